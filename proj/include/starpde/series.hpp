#pragma once

#include "starpde/system.hpp"

#include <complex>
#include <map>
#include <string>
#include <vector>

namespace starpde {

/// Coefficient rule a_r of a power series sum a_r mu^r_*.
struct SeriesSpec {
    enum class Kind { Explicit, Exp, Sin, Cos, Geometric };

    Kind kind = Kind::Exp;
    std::vector<double> coeffs; // Explicit
    double ratio = 1.0;         // Geometric: a_r = ratio^r

    double coeff(std::size_t r) const;
    /// Radius of convergence, 1/R = limsup |a_r|^(1/r); infinity for the
    /// entire kinds and for finite coefficient lists.
    double radius() const;

    static SeriesSpec exponential() { return {Kind::Exp, {}, 1.0}; }
    static SeriesSpec sine() { return {Kind::Sin, {}, 1.0}; }
    static SeriesSpec cosine() { return {Kind::Cos, {}, 1.0}; }
    static SeriesSpec geometric(double ratio) { return {Kind::Geometric, {}, ratio}; }
    static SeriesSpec explicit_coeffs(std::vector<double> cs) {
        return {Kind::Explicit, std::move(cs), 1.0};
    }
};

enum class ConvergenceMode { Strict, Relaxed };

struct SeriesOptions {
    ConvergenceMode mode = ConvergenceMode::Strict;
    double epsilon = 1e-9;          // margin inside the convergence interval
    double term_tol = 1e-14;        // direct-summation stopping tolerance
    int settled_terms = 5;          // consecutive small terms before stopping
    std::size_t max_terms = 10000;  // summation cap
    double eigen_gap = 1e-6;        // spectral route used above this gap
    double route_tol = 1e-9;        // direct/spectral agreement
    double realness_tol = 1e-10;    // |Im| bound for "real" eigenvalues
    double root_residual_tol = 1e-10;
    double residual_tol = 1e-6;     // finite-difference verification bound
    double fd_step = 1e-6;          // relative step for finite differences
};

struct Root {
    std::complex<double> value;
    int multiplicity = 1;
};

struct SpectrumAtPoint {
    std::vector<double> point; // chart order
    std::vector<Root> roots;
    bool jordan_ok = true;
};

using PointMap = std::map<std::string, double>;

std::vector<double> point_vector(const VarsPtr& coords, const PointMap& point);

/// All m roots of Z at the point, Aberth-Ehrlich iteration with cluster
/// detection for multiple roots.
SpectrumAtPoint roots_at_point(const MonicZ& z, const PointMap& point,
                               const SeriesOptions& opts = {});

/// (J^r)_{ij} = binom(r, j-i) lambda^(r+i-j) for the size x size Jordan
/// block; i, j are 1-based, the binomial vanishes outside 0 <= j-i <= r.
std::complex<double> jordan_block_power_entry(std::complex<double> lambda, std::size_t size,
                                              unsigned long r, std::size_t i, std::size_t j);

bool convergence_check(const SeriesSpec& spec, const MonicZ& z, const PointMap& point,
                       double epsilon, ConvergenceMode mode = ConvergenceMode::Strict);

/// lim_N sum_{r<=N} a_r C^r e_1 at the point, by direct summation;
/// cross-checked against the spectral route when eigenvalues are separated.
std::vector<double> series_eval(const SeriesSpec& spec, const MonicZ& z, const PointMap& point,
                                const SeriesOptions& opts = {});

/// Plain truncated sum over r = 0..terms, no convergence or route checks.
std::vector<double> series_partial_sum(const SeriesSpec& spec, const MonicZ& z,
                                       const PointMap& point, std::size_t terms);

struct SeriesPointResult {
    PointMap point;
    double residual = 0.0;
};

struct SeriesVerification {
    bool passed = false;
    double worst_residual = 0.0;
    PointMap worst_point;
    std::vector<SeriesPointResult> points;
};

/// Finite-difference residual check of the truncated series solution over a
/// sample of points; demands a constant multiplicity pattern on the sample.
SeriesVerification verify_series_solution_numeric(const SeriesSpec& spec, const SystemSpec& sys,
                                                  const std::vector<PointMap>& sample,
                                                  const SeriesOptions& opts = {});

} // namespace starpde
