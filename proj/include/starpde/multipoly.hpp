#pragma once

#include "starpde/rational.hpp"

#include <cstdint>
#include <initializer_list>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace starpde {

/// Coordinate chart: an ordered, closed set of variable names. Every value
/// built over a chart carries a pointer to it; mixing charts is an error.
using Vars = std::vector<std::string>;
using VarsPtr = std::shared_ptr<const Vars>;

VarsPtr make_vars(std::vector<std::string> names);
VarsPtr make_vars(std::initializer_list<const char*> names);

/// Exponent vector, one entry per chart variable.
using Expo = std::vector<std::uint32_t>;

/// Graded lexicographic order, ascending (total degree first, then lex).
struct GrlexLess {
    bool operator()(const Expo& a, const Expo& b) const;
};

/// Multivariate polynomial over Q in a fixed chart. Terms are kept in a
/// canonical graded-lex map with no zero coefficients, so equal polynomials
/// have identical representation.
class MultiPoly {
public:
    using TermMap = std::map<Expo, Rational, GrlexLess>;

    explicit MultiPoly(VarsPtr vars) : vars_(std::move(vars)) {
        if (!vars_) throw Error("polynomial without a chart");
    }
    static MultiPoly constant(VarsPtr vars, Rational c);
    static MultiPoly var(const VarsPtr& vars, const std::string& name);
    static MultiPoly monomial(VarsPtr vars, Expo e, Rational c);

    const VarsPtr& vars() const { return vars_; }
    std::size_t nvars() const { return vars_->size(); }
    const TermMap& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    Rational constant_value() const;

    /// Total degree; -1 for the zero polynomial.
    int total_degree() const;
    int degree_in(std::size_t var) const;
    bool depends_on(std::size_t var) const;

    /// Leading term in graded-lex order. Polynomial must be nonzero.
    const Rational& leading_coeff() const;
    const Expo& leading_expo() const;

    MultiPoly operator-() const;
    MultiPoly& operator+=(const MultiPoly& o);
    MultiPoly& operator-=(const MultiPoly& o);
    friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
    friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
    friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
    MultiPoly scaled(const Rational& c) const;
    MultiPoly pow(unsigned e) const;

    friend bool operator==(const MultiPoly& a, const MultiPoly& b);
    friend bool operator!=(const MultiPoly& a, const MultiPoly& b) { return !(a == b); }

    MultiPoly partial(std::size_t var) const;

    Rational eval(const std::vector<Rational>& point) const;
    double eval_d(const std::vector<double>& point) const;

    /// Adds c * x^e, combining with an existing term if present.
    void add_term(const Expo& e, const Rational& c);

    std::string str() const;

private:
    VarsPtr vars_;
    TermMap terms_;

    void check_chart(const MultiPoly& o) const;
};

/// Monic gcd over Q[vars] (leading graded-lex coefficient 1); gcd with zero
/// is the monic scaling of the other argument. Subresultant PRS underneath.
MultiPoly poly_gcd(const MultiPoly& a, const MultiPoly& b);

/// Exact quotient a / b when b divides a, nullopt otherwise.
std::optional<MultiPoly> try_exact_divide(const MultiPoly& a, const MultiPoly& b);

/// Index of a name in the chart; throws "unknown coordinate" otherwise.
std::size_t var_index(const VarsPtr& vars, const std::string& name);

/// True when the two charts are the same object or name-for-name equal.
bool same_chart(const VarsPtr& a, const VarsPtr& b);

} // namespace starpde
