#pragma once

#include "starpde/system.hpp"

namespace starpde {

/// Labelled solutions of one system; construction verifies every member.
struct GeneratedFamily {
    SystemSpec sys;
    std::vector<std::pair<std::string, SolutionVec>> members;
};

/// mu^r_* for r in [r_min, r_max]. The system must admit *-multiplication;
/// negative exponents additionally need Z_0 != 0.
GeneratedFamily mu_power_table(const SystemSpec& sys, long r_min, long r_max);

/// Sum of a_r mu^r_* for a finite coefficient list (a solution whenever the
/// system admits multiplication).
MuPoly star_series_poly(const std::vector<Rational>& coeffs, const MonicZ& z);

/// The (2,2,1) system in eigenvalue coordinates: the chart (x, y) carries the
/// two roots of Z, so Z = (mu - x)(mu - y), A_0 = -diag(x, y), A_1 = I.
SystemSpec eigen_221_system();

/// General solution of the eigenvalue-chart (2,2,1) system for univariate
/// polynomials phi, psi (coefficient lists, ascending):
///   V_0 = (x phi(y) - y psi(x)) / (x - y),  V_1 = (psi(x) - phi(y)) / (x - y).
SolutionVec general_solution_221(const std::vector<Rational>& phi,
                                 const std::vector<Rational>& psi);

/// The complementary idempotent pair (x, -1)/(x - y) and (-y, 1)/(x - y) of
/// an m = 2 system in the eigenvalue chart.
std::pair<SolutionVec, SolutionVec> idempotents_m2(const SystemSpec& sys);

/// Product system on the disjoint union of charts with Z = Z_a * Z_b and the
/// block tensor A_a + A_b per mu-degree; admissibility is preserved.
SystemSpec direct_sum(const SystemSpec& a, const SystemSpec& b);

/// X = diag(phi_1 I_(n_1), ..., phi_s I_(n_s)) where phi_a may depend only on
/// its own block's coordinates.
XTensor diagonal_block_X(const VarsPtr& coords, const std::vector<std::size_t>& sizes,
                         const std::vector<RationalFunction>& funcs);

/// Exact inverse of a nonsingular admissible X; the inverse stays admissible.
XTensor invert_X(const XTensor& x);

} // namespace starpde
