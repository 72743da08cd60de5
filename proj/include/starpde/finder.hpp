#pragma once

#include "starpde/system.hpp"

namespace starpde {

/// Kernel of the admissibility condition for a fixed Z: every element is a
/// tensor A with sum_i C^i Z' A_i = 0, so any specialization of the family
/// admits *-multiplication.
struct TensorFamily {
    VarsPtr coords;
    MonicZ z;
    std::size_t n = 0, k = 0;
    std::vector<TensorPoly> basis;

    std::size_t dimension() const { return basis.size(); }

    /// A = sum_j params[j] * basis[j]; the result is re-verified.
    SystemSpec specialize(const std::vector<RationalFunction>& params) const;
};

/// Solves the mn x n^2(k+1) linear system of the admissibility condition
/// over the rational-function field by fraction-free elimination.
TensorFamily find_A(const MonicZ& z, std::size_t n, std::size_t k, const VarsPtr& coords);

/// Affine slice with the leading coefficient pinned to A_k = I: particular
/// solution plus the kernel in the remaining unknowns A_0..A_{k-1}.
struct UnitLeadingFamily {
    VarsPtr coords;
    MonicZ z;
    std::size_t n = 0, k = 0;
    TensorPoly particular;
    std::vector<std::vector<Mat<RationalFunction>>> kernel; // deltas for A_0..A_{k-1}

    std::size_t dimension() const { return kernel.size(); }
};

UnitLeadingFamily find_A_unit_leading(const MonicZ& z, std::size_t n, std::size_t k,
                                      const VarsPtr& coords);

/// The two nonlinear constraints a (2,3,1) closing function must satisfy:
///   0 = x phi_x^2 - phi phi_x + y phi_x phi_y - phi_y
///   0 = 1 + x phi_x phi_y + y phi_y^2 - phi phi_y
bool check_231_phi(const RationalFunction& phi);

/// (2,3,1) system with Z_2 = phi(Z_0, Z_1); phi must pass check_231_phi.
SystemSpec build_231_system(const RationalFunction& phi);

/// The one-parameter family phi = a y - a^2 x + 1/a for nonzero rational a.
SystemSpec build_231(const Rational& a);

/// Fraction-free kernel computation, exposed for reuse and testing. Pivots
/// minimize the numerator's total degree, ties broken by column then row.
struct KernelResult {
    std::size_t rank = 0;
    std::vector<std::vector<RationalFunction>> basis;
};
KernelResult kernel_of(const Mat<RationalFunction>& m);

/// One particular solution of M x = b, or nullopt when inconsistent.
std::optional<std::vector<RationalFunction>> solve_particular(
    const Mat<RationalFunction>& m, const std::vector<RationalFunction>& b);

} // namespace starpde
