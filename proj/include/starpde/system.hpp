#pragma once

#include "starpde/mupoly.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace starpde {

/// mu-polynomial tensor A_mu = A_0 + mu A_1 + ... + mu^k A_k; every A_i is an
/// n x n matrix of rational functions in the same chart.
class TensorPoly {
public:
    TensorPoly(std::size_t n, std::vector<Mat<RationalFunction>> mats);

    std::size_t n() const { return n_; }
    std::size_t k() const { return mats_.size() - 1; }
    const Mat<RationalFunction>& mat(std::size_t i) const { return mats_[i]; }
    const std::vector<Mat<RationalFunction>>& mats() const { return mats_; }

    friend bool operator==(const TensorPoly& a, const TensorPoly& b) {
        return a.n_ == b.n_ && a.mats_ == b.mats_;
    }

private:
    std::size_t n_;
    std::vector<Mat<RationalFunction>> mats_;
};

/// One system instance A_mu dV_mu = 0 (mod Z_mu) on a fixed chart.
class SystemSpec {
public:
    SystemSpec(VarsPtr coords, MonicZ z, TensorPoly a);

    const VarsPtr& coords() const { return coords_; }
    std::size_t n() const { return coords_->size(); }
    std::size_t m() const { return z_.m(); }
    std::size_t k() const { return a_.k(); }
    const MonicZ& z() const { return z_; }
    const TensorPoly& a() const { return a_; }

private:
    VarsPtr coords_;
    MonicZ z_;
    TensorPoly a_;
};

/// The unique 1-forms B_0, ..., B_{m-1} with A dV = B_0 + ... + mu^{m-1} B_{m-1}
/// modulo Z; row a holds the components of B_a.
struct ResidualForms {
    std::vector<std::vector<RationalFunction>> rows; // m rows of n entries

    bool all_zero() const;
};

/// m x n functional matrix: row j is the gradient of the j-th component.
Mat<RationalFunction> functional_matrix(const std::vector<RationalFunction>& components,
                                        const VarsPtr& coords);

/// Residuals via the matrix encoding sum_i C^i V' A_i. The direct route
/// (expand A dV, divide by Z, keep the remainder) is exposed separately and
/// cross-checked in debug builds.
ResidualForms residuals(const SystemSpec& sys, const SolutionVec& v);
ResidualForms residuals_direct(const SystemSpec& sys, const SolutionVec& v);

bool verify_solution(const SystemSpec& sys, const SolutionVec& v);

struct AdmissibilityVerdict {
    bool admits = false;
    // location and value of the first nonzero residual entry when it fails
    std::size_t row = 0, col = 0;
    std::optional<RationalFunction> witness;
};

/// Decides A dZ = 0 (mod Z) by both encodings; they must agree.
AdmissibilityVerdict admissibility(const SystemSpec& sys);
bool admits_multiplication(const SystemSpec& sys);

/// The coefficient column of Z - mu^m, i.e. [Z_0, ..., Z_{m-1}]^T.
SolutionVec z_as_solution(const SystemSpec& sys);

/// (1,1)-tensor field in a fixed chart, used for the specialization
/// A_mu = X + mu I with Z = det(X + mu I).
class XTensor {
public:
    XTensor(VarsPtr coords, Mat<RationalFunction> entries);

    const VarsPtr& coords() const { return coords_; }
    std::size_t n() const { return entries_.rows(); }
    const Mat<RationalFunction>& entries() const { return entries_; }

private:
    VarsPtr coords_;
    Mat<RationalFunction> entries_;
};

SystemSpec from_tensor_X(const XTensor& x);

/// det(X + mu I) as a monic mu-polynomial of degree n.
MonicZ char_poly(const XTensor& x);

/// Nijenhuis torsion components N^k_{ij} in the chart, no connection:
/// N^k_{ij} = X^l_i d_l X^k_j - X^l_j d_l X^k_i - X^k_l (d_i X^l_j - d_j X^l_i).
class NijenhuisTorsion {
public:
    NijenhuisTorsion(std::size_t n, const VarsPtr& coords);
    RationalFunction& at(std::size_t k, std::size_t i, std::size_t j);
    const RationalFunction& at(std::size_t k, std::size_t i, std::size_t j) const;
    std::size_t n() const { return n_; }
    bool is_zero() const;

private:
    std::size_t n_;
    std::vector<RationalFunction> c_;
};

NijenhuisTorsion nijenhuis(const XTensor& x);

Mat<RationalFunction> adjugate(const Mat<RationalFunction>& m);

/// The torsion/cofactor relation linking N_X to X d(det X) - det X d(tr X);
/// returns the two sides so tests can assert exact equality.
std::pair<std::vector<RationalFunction>, std::vector<RationalFunction>>
torsion_identity_sides(const XTensor& x);
bool torsion_identity_holds(const XTensor& x);

/// d_i f = sum_j M_ij d_j g componentwise, M a constant square matrix.
bool check_fmg(const Mat<Rational>& m, const RationalFunction& f, const RationalFunction& g);

SystemSpec rename_coords(const SystemSpec& sys, std::vector<std::string> names);

/// Point values of a system whose coefficients live outside the rational
/// function field (radical branches); everything is evaluated per point.
struct NumericSystem {
    VarsPtr coords;
    std::size_t m = 0;
    std::function<std::vector<double>(const std::vector<double>&)> z_lower;
    std::function<std::vector<Mat<double>>(const std::vector<double>&)> tensors;
    std::function<Mat<double>(const std::vector<double>&)> z_jacobian;
};

/// Max-norm of sum_i C^i Z' A_i at the point.
double numeric_admissibility_residual(const NumericSystem& sys, const std::vector<double>& point);

/// Max-norm of sum_i C^i V' A_i at the point, V given symbolically over the
/// same chart (partials taken exactly, then evaluated).
double numeric_solution_residual(const NumericSystem& sys, const SolutionVec& v,
                                 const std::vector<double>& point);

} // namespace starpde
