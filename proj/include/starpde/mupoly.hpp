#pragma once

#include "starpde/matrix.hpp"
#include "starpde/ratfunc.hpp"

#include <complex>
#include <string>
#include <utility>
#include <vector>

namespace starpde {

/// Polynomial in the formal parameter mu with rational-function coefficients.
/// Coefficients are stored ascending; trailing zeros are trimmed, so degree()
/// is well defined (-1 for the zero polynomial).
class MuPoly {
public:
    explicit MuPoly(VarsPtr vars) : vars_(std::move(vars)) {}
    MuPoly(VarsPtr vars, std::vector<RationalFunction> coeffs);
    explicit MuPoly(RationalFunction c);

    static MuPoly mu(const VarsPtr& vars, unsigned power = 1);
    static MuPoly one(const VarsPtr& vars);

    const VarsPtr& vars() const { return vars_; }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }

    /// mu^i coefficient; zero beyond the degree.
    RationalFunction coeff(std::size_t i) const;
    const std::vector<RationalFunction>& coeffs() const { return c_; }

    MuPoly operator-() const;
    MuPoly& operator+=(const MuPoly& o) { return *this = *this + o; }
    MuPoly& operator-=(const MuPoly& o) { return *this = *this - o; }
    friend MuPoly operator+(const MuPoly& a, const MuPoly& b);
    friend MuPoly operator-(const MuPoly& a, const MuPoly& b);
    friend MuPoly operator*(const MuPoly& a, const MuPoly& b);
    MuPoly scaled(const RationalFunction& c) const;
    friend bool operator==(const MuPoly& a, const MuPoly& b);
    friend bool operator!=(const MuPoly& a, const MuPoly& b) { return !(a == b); }

    /// Exact value at a numeric mu with all chart coordinates fixed.
    std::complex<double> eval_mu(std::complex<double> mu_value,
                                 const std::vector<double>& point) const;

    std::string str() const;

private:
    VarsPtr vars_;
    std::vector<RationalFunction> c_;

    void trim();
};

/// Monic polynomial Z = Z_0 + Z_1 mu + ... + Z_{m-1} mu^{m-1} + mu^m.
class MonicZ {
public:
    MonicZ(VarsPtr vars, std::vector<RationalFunction> lower);

    const VarsPtr& vars() const { return vars_; }
    std::size_t m() const { return lower_.size(); }
    const RationalFunction& z(std::size_t i) const { return lower_[i]; }
    const std::vector<RationalFunction>& lower() const { return lower_; }

    MuPoly as_mu_poly() const;
    friend bool operator==(const MonicZ& a, const MonicZ& b) {
        return same_chart(a.vars_, b.vars_) && a.lower_ == b.lower_;
    }

private:
    VarsPtr vars_;
    std::vector<RationalFunction> lower_;
};

/// Column form [V_0, ..., V_{m-1}]^T of a residue class modulo Z.
struct SolutionVec {
    std::vector<RationalFunction> entries;

    std::size_t size() const { return entries.size(); }
    const RationalFunction& operator[](std::size_t i) const { return entries[i]; }
    RationalFunction& operator[](std::size_t i) { return entries[i]; }
    friend bool operator==(const SolutionVec& a, const SolutionVec& b) {
        return a.entries == b.entries;
    }
};

SolutionVec to_solution_vec(const MuPoly& p, const MonicZ& z);
MuPoly to_mu_poly(const SolutionVec& v, const VarsPtr& vars);

/// Euclidean division by the monic Z: P = Q*Z + R with deg R < m.
std::pair<MuPoly, MuPoly> divmod_mu(const MuPoly& p, const MonicZ& z);

/// Residue of the ordinary product modulo Z. Operands must already be
/// reduced (degree < m).
MuPoly star_mul(const MuPoly& v, const MuPoly& w, const MonicZ& z);

/// mu^{-1} in the quotient ring; requires Z_0 != 0 as a rational function.
MuPoly mu_inverse(const MonicZ& z);

/// Repeated star product. r = 0 gives 1; negative r only for the base mu.
MuPoly star_pow(const MuPoly& v, long r, const MonicZ& z);

/// Companion matrix C[Z]: ones on the subdiagonal, last column -Z_i.
Mat<RationalFunction> companion(const MonicZ& z);

/// Coefficients of the residue of P modulo Z, computed as P(C) e_1.
SolutionVec eval_at_companion(const MuPoly& p, const MonicZ& z);

/// Solves V * X = 1 for X as an m x m linear system over the function field.
/// Convenience inverter for general units of the quotient ring; unlike
/// mu_inverse this is not tied to any solution-space statement.
MuPoly quotient_ring_inverse(const MuPoly& v, const MonicZ& z);

} // namespace starpde
