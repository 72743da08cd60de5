#pragma once

#include "starpde/multipoly.hpp"

#include <string>
#include <vector>

namespace starpde {

/// Rational function num/den over Q in a fixed chart, kept in canonical form:
/// gcd(num, den) = 1, both with integer coefficients of joint content 1, and
/// the leading graded-lex coefficient of den positive. Equality is structural.
class RationalFunction {
public:
    explicit RationalFunction(MultiPoly num);
    RationalFunction(MultiPoly num, MultiPoly den);

    static RationalFunction zero(const VarsPtr& vars);
    static RationalFunction one(const VarsPtr& vars);
    static RationalFunction constant(const VarsPtr& vars, Rational c);
    static RationalFunction var(const VarsPtr& vars, const std::string& name);

    const MultiPoly& num() const { return num_; }
    const MultiPoly& den() const { return den_; }
    const VarsPtr& vars() const { return num_.vars(); }

    bool is_zero() const { return num_.is_zero(); }
    bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
    Rational constant_value() const;
    bool is_polynomial() const { return den_.is_constant(); }

    RationalFunction operator-() const;
    friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b);
    friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b);
    friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b);
    friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b);
    RationalFunction& operator+=(const RationalFunction& o) { return *this = *this + o; }
    RationalFunction& operator-=(const RationalFunction& o) { return *this = *this - o; }
    RationalFunction& operator*=(const RationalFunction& o) { return *this = *this * o; }
    RationalFunction& operator/=(const RationalFunction& o) { return *this = *this / o; }

    RationalFunction scaled(const Rational& c) const;
    RationalFunction inverse() const;
    RationalFunction pow(long e) const;

    friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const RationalFunction& a, const RationalFunction& b) { return !(a == b); }

    RationalFunction partial(const std::string& coord) const;
    RationalFunction partial(std::size_t var) const;

    /// Exact evaluation; throws when the denominator vanishes at the point.
    Rational eval(const std::vector<Rational>& point) const;
    double eval_d(const std::vector<double>& point) const;

    /// Same function expressed over a larger chart; map[i] gives the index
    /// of old variable i in the new chart.
    RationalFunction extended(const VarsPtr& bigger, const std::vector<std::size_t>& map) const;

    std::string str() const;

private:
    MultiPoly num_, den_;

    void normalize();
};

} // namespace starpde
