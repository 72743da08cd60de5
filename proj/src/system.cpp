#include "starpde/system.hpp"

#include <cassert>

namespace starpde {

namespace {

Mat<RationalFunction> identity(const VarsPtr& vars, std::size_t n) {
    Mat<RationalFunction> id(n, n, RationalFunction::zero(vars));
    for (std::size_t i = 0; i < n; ++i) id.at(i, i) = RationalFunction::one(vars);
    return id;
}

} // namespace

TensorPoly::TensorPoly(std::size_t n, std::vector<Mat<RationalFunction>> mats)
    : n_(n), mats_(std::move(mats)) {
    if (mats_.empty()) throw Error("tensor polynomial needs at least one coefficient");
    for (const auto& m : mats_)
        if (m.rows() != n_ || m.cols() != n_) throw Error("tensor coefficient is not n x n");
}

SystemSpec::SystemSpec(VarsPtr coords, MonicZ z, TensorPoly a)
    : coords_(std::move(coords)), z_(std::move(z)), a_(std::move(a)) {
    if (!same_chart(coords_, z_.vars())) throw Error("Z chart differs from system chart");
    if (a_.n() != coords_->size()) throw Error("tensor dimension differs from chart size");
    for (const auto& mat : a_.mats())
        for (std::size_t i = 0; i < a_.n(); ++i)
            for (std::size_t j = 0; j < a_.n(); ++j)
                if (!same_chart(mat.at(i, j).vars(), coords_))
                    throw Error("tensor entry chart differs from system chart");
    if (a_.k() > z_.m() - 1) throw Error("deg A exceeds m - 1; reduce modulo Z first");
}

bool ResidualForms::all_zero() const {
    for (const auto& row : rows)
        for (const auto& e : row)
            if (!e.is_zero()) return false;
    return true;
}

Mat<RationalFunction> functional_matrix(const std::vector<RationalFunction>& components,
                                        const VarsPtr& coords) {
    const std::size_t n = coords->size();
    Mat<RationalFunction> d(components.size(), n, RationalFunction::zero(coords));
    for (std::size_t j = 0; j < components.size(); ++j) {
        if (!same_chart(components[j].vars(), coords)) throw Error("coordinate chart mismatch");
        for (std::size_t l = 0; l < n; ++l) d.at(j, l) = components[j].partial(l);
    }
    return d;
}

namespace {

ResidualForms residuals_matrix_route(const SystemSpec& sys,
                                     const std::vector<RationalFunction>& entries) {
    const std::size_t m = sys.m(), n = sys.n();
    Mat<RationalFunction> vp = functional_matrix(entries, sys.coords());
    Mat<RationalFunction> c = companion(sys.z());
    Mat<RationalFunction> cpow = identity(sys.coords(), m);
    Mat<RationalFunction> acc = vp * sys.a().mat(0);
    for (std::size_t i = 1; i <= sys.k(); ++i) {
        cpow = cpow * c;
        acc = acc + cpow * (vp * sys.a().mat(i));
    }
    ResidualForms out;
    out.rows.assign(m, std::vector<RationalFunction>());
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t b = 0; b < n; ++b) out.rows[r].push_back(acc.at(r, b));
    return out;
}

ResidualForms residuals_direct_route(const SystemSpec& sys,
                                     const std::vector<RationalFunction>& entries) {
    const std::size_t m = sys.m(), n = sys.n();
    Mat<RationalFunction> vp = functional_matrix(entries, sys.coords());
    ResidualForms out;
    out.rows.assign(m, std::vector<RationalFunction>(n, RationalFunction::zero(sys.coords())));
    // Component b of A dV is the scalar mu-polynomial
    // sum_{i,j} mu^{i+j} (dV_j A_i)_b; reduce each one modulo Z.
    for (std::size_t b = 0; b < n; ++b) {
        std::size_t maxdeg = sys.k() + m - 1;
        std::vector<RationalFunction> cs(maxdeg + 1, RationalFunction::zero(sys.coords()));
        for (std::size_t i = 0; i <= sys.k(); ++i)
            for (std::size_t j = 0; j < m; ++j)
                for (std::size_t a = 0; a < n; ++a)
                    cs[i + j] += vp.at(j, a) * sys.a().mat(i).at(a, b);
        MuPoly rem = divmod_mu(MuPoly(sys.coords(), std::move(cs)), sys.z()).second;
        for (std::size_t r = 0; r < m; ++r) out.rows[r][b] = rem.coeff(r);
    }
    return out;
}

std::vector<RationalFunction> checked_entries(const SystemSpec& sys, const SolutionVec& v) {
    if (v.size() != sys.m()) throw Error("solution column length differs from m");
    for (const auto& e : v.entries)
        if (!same_chart(e.vars(), sys.coords())) throw Error("coordinate chart mismatch");
    return v.entries;
}

} // namespace

ResidualForms residuals(const SystemSpec& sys, const SolutionVec& v) {
    auto entries = checked_entries(sys, v);
    ResidualForms out = residuals_matrix_route(sys, entries);
#ifndef NDEBUG
    ResidualForms alt = residuals_direct_route(sys, entries);
    assert(out.rows == alt.rows);
#endif
    return out;
}

ResidualForms residuals_direct(const SystemSpec& sys, const SolutionVec& v) {
    return residuals_direct_route(sys, checked_entries(sys, v));
}

bool verify_solution(const SystemSpec& sys, const SolutionVec& v) {
    return residuals(sys, v).all_zero();
}

SolutionVec z_as_solution(const SystemSpec& sys) {
    return SolutionVec{sys.z().lower()};
}

AdmissibilityVerdict admissibility(const SystemSpec& sys) {
    SolutionVec zvec = z_as_solution(sys);
    ResidualForms matrix_route = residuals(sys, zvec);
    ResidualForms direct_route = residuals_direct(sys, zvec);
    if (matrix_route.rows != direct_route.rows)
        throw Error("admissibility routes disagree"); // unreachable if division is sound
    AdmissibilityVerdict verdict;
    verdict.admits = true;
    for (std::size_t r = 0; r < matrix_route.rows.size() && verdict.admits; ++r) {
        for (std::size_t b = 0; b < matrix_route.rows[r].size(); ++b) {
            if (!matrix_route.rows[r][b].is_zero()) {
                verdict.admits = false;
                verdict.row = r;
                verdict.col = b;
                verdict.witness = matrix_route.rows[r][b];
                break;
            }
        }
    }
    return verdict;
}

bool admits_multiplication(const SystemSpec& sys) { return admissibility(sys).admits; }

XTensor::XTensor(VarsPtr coords, Mat<RationalFunction> entries)
    : coords_(std::move(coords)), entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols()) throw Error("X must be square");
    if (entries_.rows() != coords_->size()) throw Error("X dimension differs from chart size");
    for (std::size_t i = 0; i < entries_.rows(); ++i)
        for (std::size_t j = 0; j < entries_.cols(); ++j)
            if (!same_chart(entries_.at(i, j).vars(), coords_))
                throw Error("coordinate chart mismatch");
}

MonicZ char_poly(const XTensor& x) {
    const std::size_t n = x.n();
    Mat<MuPoly> shifted(n, n, MuPoly(x.coords()));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            MuPoly e(x.entries().at(i, j));
            if (i == j) e += MuPoly::mu(x.coords());
            shifted.at(i, j) = e;
        }
    MuPoly det = shifted.det();
    if (det.degree() != static_cast<int>(n) || !(det.coeff(n) == RationalFunction::one(x.coords())))
        throw Error("char_poly is not monic of degree n");
    std::vector<RationalFunction> lower;
    for (std::size_t i = 0; i < n; ++i) lower.push_back(det.coeff(i));
    return MonicZ(x.coords(), std::move(lower));
}

SystemSpec from_tensor_X(const XTensor& x) {
    MonicZ z = char_poly(x);
    std::vector<Mat<RationalFunction>> mats{x.entries(), identity(x.coords(), x.n())};
    return SystemSpec(x.coords(), std::move(z), TensorPoly(x.n(), std::move(mats)));
}

NijenhuisTorsion::NijenhuisTorsion(std::size_t n, const VarsPtr& coords)
    : n_(n), c_(n * n * n, RationalFunction::zero(coords)) {}

RationalFunction& NijenhuisTorsion::at(std::size_t k, std::size_t i, std::size_t j) {
    return c_[(k * n_ + i) * n_ + j];
}

const RationalFunction& NijenhuisTorsion::at(std::size_t k, std::size_t i, std::size_t j) const {
    return c_[(k * n_ + i) * n_ + j];
}

bool NijenhuisTorsion::is_zero() const {
    for (const auto& e : c_)
        if (!e.is_zero()) return false;
    return true;
}

NijenhuisTorsion nijenhuis(const XTensor& x) {
    const std::size_t n = x.n();
    const auto& X = x.entries();
    NijenhuisTorsion t(n, x.coords());
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                RationalFunction acc = RationalFunction::zero(x.coords());
                for (std::size_t l = 0; l < n; ++l) {
                    acc += X.at(l, i) * X.at(k, j).partial(l);
                    acc -= X.at(l, j) * X.at(k, i).partial(l);
                    acc -= X.at(k, l) * (X.at(l, j).partial(i) - X.at(l, i).partial(j));
                }
                t.at(k, i, j) = acc;
            }
    return t;
}

Mat<RationalFunction> adjugate(const Mat<RationalFunction>& m) {
    if (m.rows() != m.cols()) throw Error("adjugate of non-square matrix");
    const std::size_t n = m.rows();
    const VarsPtr& vars = m.at(0, 0).vars();
    if (n == 1) {
        Mat<RationalFunction> a(1, 1, RationalFunction::one(vars));
        return a;
    }
    Mat<RationalFunction> adj(n, n, RationalFunction::zero(vars));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Mat<RationalFunction> minor(n - 1, n - 1, RationalFunction::zero(vars));
            for (std::size_t r = 0, rr = 0; r < n; ++r) {
                if (r == j) continue;
                for (std::size_t c = 0, cc = 0; c < n; ++c) {
                    if (c == i) continue;
                    minor.at(rr, cc) = m.at(r, c);
                    ++cc;
                }
                ++rr;
            }
            RationalFunction d = minor.det();
            adj.at(i, j) = ((i + j) % 2 == 0) ? d : -d;
        }
    return adj;
}

std::pair<std::vector<RationalFunction>, std::vector<RationalFunction>>
torsion_identity_sides(const XTensor& x) {
    const std::size_t n = x.n();
    const auto& X = x.entries();
    RationalFunction det = X.det();
    RationalFunction tr = X.at(0, 0);
    for (std::size_t i = 1; i < n; ++i) tr += X.at(i, i);
    Mat<RationalFunction> cof = adjugate(X); // (det X) X^{-1}
    NijenhuisTorsion t = nijenhuis(x);

    std::vector<RationalFunction> lhs, rhs;
    for (std::size_t i = 0; i < n; ++i) {
        RationalFunction core = RationalFunction::zero(x.coords());
        for (std::size_t j = 0; j < n; ++j) core += det.partial(j) * X.at(j, i);
        core -= det * tr.partial(i);
        lhs.push_back(core);
        RationalFunction contr = RationalFunction::zero(x.coords());
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) contr += t.at(k, i, j) * cof.at(j, k);
        rhs.push_back(contr);
    }
    return {lhs, rhs};
}

bool torsion_identity_holds(const XTensor& x) {
    auto [lhs, rhs] = torsion_identity_sides(x);
    return lhs == rhs;
}

bool check_fmg(const Mat<Rational>& m, const RationalFunction& f, const RationalFunction& g) {
    if (m.rows() != m.cols()) throw Error("M must be square");
    const VarsPtr& vars = f.vars();
    if (!same_chart(vars, g.vars())) throw Error("coordinate chart mismatch");
    if (m.rows() != vars->size()) throw Error("M dimension differs from chart size");
    for (std::size_t i = 0; i < m.rows(); ++i) {
        RationalFunction rhs = RationalFunction::zero(vars);
        for (std::size_t j = 0; j < m.cols(); ++j)
            rhs += g.partial(j).scaled(m.at(i, j));
        if (!(f.partial(i) == rhs)) return false;
    }
    return true;
}

SystemSpec rename_coords(const SystemSpec& sys, std::vector<std::string> names) {
    if (names.size() != sys.n()) throw Error("coordinate count mismatch");
    VarsPtr fresh = make_vars(std::move(names));
    std::vector<std::size_t> map(sys.n());
    for (std::size_t i = 0; i < sys.n(); ++i) map[i] = i;
    auto lift = [&](const RationalFunction& r) { return r.extended(fresh, map); };
    std::vector<RationalFunction> lower;
    for (const auto& zi : sys.z().lower()) lower.push_back(lift(zi));
    std::vector<Mat<RationalFunction>> mats;
    for (const auto& mat : sys.a().mats()) {
        Mat<RationalFunction> lifted(sys.n(), sys.n(), RationalFunction::zero(fresh));
        for (std::size_t i = 0; i < sys.n(); ++i)
            for (std::size_t j = 0; j < sys.n(); ++j) lifted.at(i, j) = lift(mat.at(i, j));
        mats.push_back(std::move(lifted));
    }
    return SystemSpec(fresh, MonicZ(fresh, std::move(lower)), TensorPoly(sys.n(), std::move(mats)));
}

namespace {

Mat<double> numeric_companion(const std::vector<double>& lower) {
    const std::size_t m = lower.size();
    Mat<double> c(m, m, 0.0);
    for (std::size_t i = 0; i + 1 < m; ++i) c.at(i + 1, i) = 1.0;
    for (std::size_t i = 0; i < m; ++i) c.at(i, m - 1) = -lower[i];
    return c;
}

double numeric_residual(const NumericSystem& sys, const Mat<double>& vp,
                        const std::vector<double>& point) {
    std::vector<Mat<double>> tensors = sys.tensors(point);
    Mat<double> c = numeric_companion(sys.z_lower(point));
    const std::size_t m = sys.m;
    Mat<double> cpow(m, m, 0.0);
    for (std::size_t i = 0; i < m; ++i) cpow.at(i, i) = 1.0;
    Mat<double> acc = vp * tensors[0];
    for (std::size_t i = 1; i < tensors.size(); ++i) {
        cpow = cpow * c;
        acc = acc + cpow * (vp * tensors[i]);
    }
    double worst = 0.0;
    for (std::size_t r = 0; r < acc.rows(); ++r)
        for (std::size_t b = 0; b < acc.cols(); ++b)
            worst = std::max(worst, std::abs(acc.at(r, b)));
    return worst;
}

} // namespace

double numeric_admissibility_residual(const NumericSystem& sys,
                                      const std::vector<double>& point) {
    return numeric_residual(sys, sys.z_jacobian(point), point);
}

double numeric_solution_residual(const NumericSystem& sys, const SolutionVec& v,
                                 const std::vector<double>& point) {
    const std::size_t n = sys.coords->size();
    Mat<double> vp(sys.m, n, 0.0);
    for (std::size_t j = 0; j < sys.m; ++j)
        for (std::size_t l = 0; l < n; ++l) vp.at(j, l) = v[j].partial(l).eval_d(point);
    return numeric_residual(sys, vp, point);
}

} // namespace starpde
