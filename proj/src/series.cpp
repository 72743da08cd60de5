#include "starpde/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace starpde {

namespace {

double factorial(unsigned long n) {
    double f = 1.0;
    for (unsigned long i = 2; i <= n; ++i) f *= static_cast<double>(i);
    return f;
}

} // namespace

double SeriesSpec::coeff(std::size_t r) const {
    switch (kind) {
        case Kind::Explicit:
            return r < coeffs.size() ? coeffs[r] : 0.0;
        case Kind::Exp:
            return 1.0 / factorial(r);
        case Kind::Sin:
            if (r % 2 == 0) return 0.0;
            return ((r / 2) % 2 == 0 ? 1.0 : -1.0) / factorial(r);
        case Kind::Cos:
            if (r % 2 != 0) return 0.0;
            return ((r / 2) % 2 == 0 ? 1.0 : -1.0) / factorial(r);
        case Kind::Geometric:
            return std::pow(ratio, static_cast<double>(r));
    }
    return 0.0;
}

double SeriesSpec::radius() const {
    switch (kind) {
        case Kind::Explicit:
        case Kind::Exp:
        case Kind::Sin:
        case Kind::Cos:
            return std::numeric_limits<double>::infinity();
        case Kind::Geometric:
            return ratio == 0.0 ? std::numeric_limits<double>::infinity()
                                : 1.0 / std::abs(ratio);
    }
    return 0.0;
}

std::vector<double> point_vector(const VarsPtr& coords, const PointMap& point) {
    std::vector<double> out;
    out.reserve(coords->size());
    for (const auto& name : *coords) {
        auto it = point.find(name);
        if (it == point.end()) throw Error("point does not assign coordinate " + name);
        out.push_back(it->second);
    }
    return out;
}

namespace {

using Cx = std::complex<double>;

std::vector<double> numeric_lower(const MonicZ& z, const std::vector<double>& pt) {
    std::vector<double> lower;
    lower.reserve(z.m());
    for (const auto& c : z.lower()) lower.push_back(c.eval_d(pt));
    return lower;
}

Cx poly_eval(const std::vector<double>& lower, Cx t) {
    Cx acc(1.0, 0.0);
    for (std::size_t i = lower.size(); i-- > 0;) acc = acc * t + lower[i];
    return acc;
}

Cx poly_derivative_eval(const std::vector<double>& lower, Cx t) {
    const std::size_t m = lower.size();
    Cx acc(static_cast<double>(m), 0.0);
    for (std::size_t i = m; i-- > 1;) acc = acc * t + static_cast<double>(i) * lower[i];
    return acc;
}

// Aberth-Ehrlich simultaneous iteration on a monic polynomial.
std::vector<Cx> aberth_roots(const std::vector<double>& lower, double residual_tol) {
    const std::size_t m = lower.size();
    double bound = 1.0;
    for (double c : lower) bound = std::max(bound, std::abs(c));
    bound += 1.0;
    std::vector<Cx> r(m);
    for (std::size_t i = 0; i < m; ++i) {
        double ang = 2.0 * M_PI * (static_cast<double>(i) + 0.3) / static_cast<double>(m) + 0.43;
        r[i] = bound * Cx(std::cos(ang), std::sin(ang));
    }
    for (int it = 0; it < 200; ++it) {
        double worst = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            Cx p = poly_eval(lower, r[i]);
            Cx dp = poly_derivative_eval(lower, r[i]);
            if (std::abs(dp) == 0.0) {
                r[i] += Cx(1e-8, 1e-8);
                worst = 1.0;
                continue;
            }
            Cx w = p / dp;
            Cx s(0.0, 0.0);
            for (std::size_t j = 0; j < m; ++j)
                if (j != i) s += Cx(1.0, 0.0) / (r[i] - r[j]);
            Cx corr = w / (Cx(1.0, 0.0) - w * s);
            r[i] -= corr;
            worst = std::max(worst, std::abs(corr) / (1.0 + std::abs(r[i])));
        }
        if (worst < 1e-15) break;
    }
    for (std::size_t i = 0; i < m; ++i) {
        double scale = std::pow(1.0 + std::abs(r[i]), static_cast<double>(m));
        if (std::abs(poly_eval(lower, r[i])) > residual_tol * scale)
            throw Error("root finding did not converge");
    }
    return r;
}

// Newton polishing on the (s-1)-th derivative pins a root of multiplicity s.
Cx polish_multiple(const std::vector<double>& lower, Cx seed, int mult) {
    std::vector<double> work = lower;
    work.push_back(1.0);
    for (int d = 1; d < mult; ++d) {
        std::vector<double> der(work.size() - 1);
        for (std::size_t i = 1; i < work.size(); ++i)
            der[i - 1] = static_cast<double>(i) * work[i];
        work = std::move(der);
    }
    double lead = work.back();
    std::vector<double> low(work.begin(), work.end() - 1);
    for (auto& c : low) c /= lead;
    Cx t = seed;
    for (int it = 0; it < 50; ++it) {
        Cx p = poly_eval(low, t);
        Cx dp = poly_derivative_eval(low, t);
        if (std::abs(dp) == 0.0) break;
        Cx step = p / dp;
        t -= step;
        if (std::abs(step) < 1e-15 * (1.0 + std::abs(t))) break;
    }
    return t;
}

std::vector<Root> cluster_roots(const std::vector<double>& lower, std::vector<Cx> raw,
                                bool* jordan_ok) {
    // Multiple roots only come out of double precision with ~sqrt(eps)
    // scatter, so grouping uses a looser radius than the final accuracy.
    const double group_tol = 1e-6;
    std::vector<bool> used(raw.size(), false);
    std::vector<Root> out;
    double min_center_gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (used[i]) continue;
        std::vector<std::size_t> group{i};
        used[i] = true;
        bool grew = true;
        while (grew) {
            grew = false;
            for (std::size_t j = 0; j < raw.size(); ++j) {
                if (used[j]) continue;
                for (std::size_t g : group) {
                    if (std::abs(raw[j] - raw[g]) <= group_tol * (1.0 + std::abs(raw[g]))) {
                        group.push_back(j);
                        used[j] = true;
                        grew = true;
                        break;
                    }
                }
            }
        }
        Cx center(0.0, 0.0);
        for (std::size_t g : group) center += raw[g];
        center /= static_cast<double>(group.size());
        if (group.size() > 1)
            center = polish_multiple(lower, center, static_cast<int>(group.size()));
        out.push_back(Root{center, static_cast<int>(group.size())});
    }
    for (std::size_t i = 0; i < out.size(); ++i)
        for (std::size_t j = i + 1; j < out.size(); ++j)
            min_center_gap = std::min(min_center_gap, std::abs(out[i].value - out[j].value));
    if (jordan_ok) *jordan_ok = min_center_gap > 10.0 * group_tol;
    std::sort(out.begin(), out.end(), [](const Root& a, const Root& b) {
        if (a.value.real() != b.value.real()) return a.value.real() < b.value.real();
        return a.value.imag() < b.value.imag();
    });
    return out;
}

} // namespace

SpectrumAtPoint roots_at_point(const MonicZ& z, const PointMap& point,
                               const SeriesOptions& opts) {
    std::vector<double> pt = point_vector(z.vars(), point);
    std::vector<double> lower = numeric_lower(z, pt);
    std::vector<Cx> raw = aberth_roots(lower, opts.root_residual_tol);
    SpectrumAtPoint spectrum;
    spectrum.point = pt;
    spectrum.roots = cluster_roots(lower, std::move(raw), &spectrum.jordan_ok);
    return spectrum;
}

std::complex<double> jordan_block_power_entry(std::complex<double> lambda, std::size_t size,
                                              unsigned long r, std::size_t i, std::size_t j) {
    if (i < 1 || j < 1 || i > size || j > size) throw Error("Jordan entry index out of range");
    if (j < i) return {0.0, 0.0};
    unsigned long off = j - i;
    if (off > r) return {0.0, 0.0};
    double binom = 1.0;
    for (unsigned long t = 0; t < off; ++t)
        binom = binom * static_cast<double>(r - t) / static_cast<double>(t + 1);
    unsigned long e = r + i - j;
    Cx pow(1.0, 0.0);
    for (unsigned long t = 0; t < e; ++t) pow *= lambda;
    return binom * pow;
}

bool convergence_check(const SeriesSpec& spec, const MonicZ& z, const PointMap& point,
                       double epsilon, ConvergenceMode mode) {
    SeriesOptions opts;
    opts.mode = mode;
    SpectrumAtPoint s = roots_at_point(z, point, opts);
    double radius = spec.radius();
    for (const auto& root : s.roots) {
        if (mode == ConvergenceMode::Strict) {
            if (std::abs(root.value.imag()) > opts.realness_tol * (1.0 + std::abs(root.value)))
                return false;
            if (std::isfinite(radius)) {
                double re = root.value.real();
                if (re < -radius + epsilon || re > radius - epsilon) return false;
            }
        } else {
            if (std::isfinite(radius) && std::abs(root.value) > radius - epsilon) return false;
        }
    }
    return true;
}

namespace {

void companion_apply(const std::vector<double>& lower, std::vector<double>& v) {
    const std::size_t m = lower.size();
    double last = v[m - 1];
    for (std::size_t i = m; i-- > 1;) v[i] = v[i - 1] - lower[i] * last;
    v[0] = -lower[0] * last;
}

std::vector<double> direct_sum_terms(const SeriesSpec& spec, const std::vector<double>& lower,
                                     const SeriesOptions& opts, std::size_t* terms_used) {
    const std::size_t m = lower.size();
    std::vector<double> basis(m, 0.0);
    basis[0] = 1.0;
    std::vector<double> acc(m, 0.0);
    int settled = 0;
    std::size_t r = 0;
    for (;;) {
        double a = spec.coeff(r);
        double term_norm = 0.0, acc_norm = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            double t = a * basis[i];
            acc[i] += t;
            term_norm = std::max(term_norm, std::abs(t));
            acc_norm = std::max(acc_norm, std::abs(acc[i]));
        }
        if (spec.kind == SeriesSpec::Kind::Explicit && r + 1 >= spec.coeffs.size()) {
            if (terms_used) *terms_used = r;
            return acc;
        }
        settled = term_norm < opts.term_tol * (1.0 + acc_norm) ? settled + 1 : 0;
        if (settled >= opts.settled_terms) {
            if (terms_used) *terms_used = r;
            return acc;
        }
        if (++r > opts.max_terms) throw Error("slow convergence");
        companion_apply(lower, basis);
    }
}

Cx series_value(const SeriesSpec& spec, Cx lambda) {
    switch (spec.kind) {
        case SeriesSpec::Kind::Exp:
            return std::exp(lambda);
        case SeriesSpec::Kind::Sin:
            return std::sin(lambda);
        case SeriesSpec::Kind::Cos:
            return std::cos(lambda);
        case SeriesSpec::Kind::Geometric:
            return Cx(1.0, 0.0) / (Cx(1.0, 0.0) - spec.ratio * lambda);
        case SeriesSpec::Kind::Explicit: {
            Cx acc(0.0, 0.0);
            for (std::size_t i = spec.coeffs.size(); i-- > 0;)
                acc = acc * lambda + spec.coeffs[i];
            return acc;
        }
    }
    return {0.0, 0.0};
}

// Spectral route for simple separated eigenvalues: P = sum_s f(lambda_s) L_s
// with L_s the Lagrange idempotent coefficient vectors.
std::vector<Cx> spectral_route(const SeriesSpec& spec, const std::vector<double>& lower,
                               const std::vector<Root>& roots) {
    const std::size_t m = lower.size();
    std::vector<Cx> acc(m, Cx(0.0, 0.0));
    for (const auto& root : roots) {
        // numerator polynomial prod_{t != s} (mu - lambda_t), coefficients low->high
        std::vector<Cx> num{Cx(1.0, 0.0)};
        Cx denom(1.0, 0.0);
        for (const auto& other : roots) {
            if (&other == &root) continue;
            std::vector<Cx> next(num.size() + 1, Cx(0.0, 0.0));
            for (std::size_t i = 0; i < num.size(); ++i) {
                next[i + 1] += num[i];
                next[i] -= other.value * num[i];
            }
            num = std::move(next);
            denom *= (root.value - other.value);
        }
        Cx f = series_value(spec, root.value) / denom;
        for (std::size_t i = 0; i < num.size(); ++i) acc[i] += f * num[i];
    }
    return acc;
}

} // namespace

std::vector<double> series_eval(const SeriesSpec& spec, const MonicZ& z, const PointMap& point,
                                const SeriesOptions& opts) {
    if (!convergence_check(spec, z, point, opts.epsilon, opts.mode))
        throw Error("point outside convergence domain");
    std::vector<double> pt = point_vector(z.vars(), point);
    std::vector<double> lower = numeric_lower(z, pt);
    std::vector<double> direct = direct_sum_terms(spec, lower, opts, nullptr);

    SpectrumAtPoint s = roots_at_point(z, point, opts);
    bool simple = true;
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < s.roots.size(); ++i) {
        if (s.roots[i].multiplicity > 1) simple = false;
        for (std::size_t j = i + 1; j < s.roots.size(); ++j)
            gap = std::min(gap, std::abs(s.roots[i].value - s.roots[j].value));
    }
    if (simple && gap > opts.eigen_gap) {
        std::vector<Cx> spectral = spectral_route(spec, lower, s.roots);
        double norm = 0.0;
        for (double d : direct) norm = std::max(norm, std::abs(d));
        for (std::size_t i = 0; i < direct.size(); ++i)
            if (std::abs(spectral[i] - Cx(direct[i], 0.0)) > opts.route_tol * (1.0 + norm))
                throw Error("summation and spectral routes disagree");
    }
    return direct;
}

std::vector<double> series_partial_sum(const SeriesSpec& spec, const MonicZ& z,
                                       const PointMap& point, std::size_t terms) {
    std::vector<double> pt = point_vector(z.vars(), point);
    std::vector<double> lower = numeric_lower(z, pt);
    const std::size_t m = lower.size();
    std::vector<double> basis(m, 0.0);
    basis[0] = 1.0;
    std::vector<double> acc(m, 0.0);
    for (std::size_t r = 0; r <= terms; ++r) {
        double a = spec.coeff(r);
        for (std::size_t i = 0; i < m; ++i) acc[i] += a * basis[i];
        if (r != terms) companion_apply(lower, basis);
    }
    return acc;
}

SeriesVerification verify_series_solution_numeric(const SeriesSpec& spec, const SystemSpec& sys,
                                                  const std::vector<PointMap>& sample,
                                                  const SeriesOptions& opts) {
    if (sample.empty()) throw Error("empty sample");
    SeriesVerification report;
    std::vector<int> pattern;
    for (const auto& pm : sample) {
        if (!convergence_check(spec, sys.z(), pm, opts.epsilon, opts.mode))
            throw Error("point outside convergence domain");
        SpectrumAtPoint s = roots_at_point(sys.z(), pm, opts);
        std::vector<int> mults;
        for (const auto& r : s.roots) mults.push_back(r.multiplicity);
        std::sort(mults.begin(), mults.end());
        if (pattern.empty())
            pattern = mults;
        else if (pattern != mults)
            throw Error("Jordan structure not constant on domain");
    }

    const std::size_t m = sys.m(), n = sys.n();
    report.passed = true;
    for (const auto& pm : sample) {
        std::vector<double> pt = point_vector(sys.coords(), pm);
        std::vector<double> lower = numeric_lower(sys.z(), pt);

        // dP/dq_l by central differences of the summed series
        Mat<double> vp(m, n, 0.0);
        for (std::size_t l = 0; l < n; ++l) {
            double h = opts.fd_step * (1.0 + std::abs(pt[l]));
            std::vector<double> hi = pt, lo = pt;
            hi[l] += h;
            lo[l] -= h;
            std::vector<double> phi = direct_sum_terms(spec, numeric_lower(sys.z(), hi), opts,
                                                       nullptr);
            std::vector<double> plo = direct_sum_terms(spec, numeric_lower(sys.z(), lo), opts,
                                                       nullptr);
            for (std::size_t i = 0; i < m; ++i) vp.at(i, l) = (phi[i] - plo[i]) / (2.0 * h);
        }

        Mat<double> c(m, m, 0.0);
        for (std::size_t i = 0; i + 1 < m; ++i) c.at(i + 1, i) = 1.0;
        for (std::size_t i = 0; i < m; ++i) c.at(i, m - 1) = -lower[i];
        Mat<double> cpow(m, m, 0.0);
        for (std::size_t i = 0; i < m; ++i) cpow.at(i, i) = 1.0;
        Mat<double> a0(n, n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) a0.at(i, j) = sys.a().mat(0).at(i, j).eval_d(pt);
        Mat<double> acc = vp * a0;
        for (std::size_t d = 1; d <= sys.k(); ++d) {
            Mat<double> ad(n, n, 0.0);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    ad.at(i, j) = sys.a().mat(d).at(i, j).eval_d(pt);
            cpow = cpow * c;
            acc = acc + cpow * (vp * ad);
        }
        double worst = 0.0;
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j) worst = std::max(worst, std::abs(acc.at(i, j)));

        report.points.push_back(SeriesPointResult{pm, worst});
        if (worst > report.worst_residual) {
            report.worst_residual = worst;
            report.worst_point = pm;
        }
        if (worst > opts.residual_tol) report.passed = false;
    }
    return report;
}

} // namespace starpde
