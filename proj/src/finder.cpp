#include "starpde/finder.hpp"

namespace starpde {

namespace {

struct Work {
    Mat<RationalFunction> a;
    std::vector<RationalFunction> rhs;
    std::vector<std::size_t> rows, cols; // current permutations
    std::size_t rank = 0;
};

// Fraction-free forward elimination with full pivoting. Pivot choice: entry
// of minimal numerator total degree, ties by column order, then row order.
Work eliminate(Mat<RationalFunction> m, std::vector<RationalFunction> rhs) {
    const std::size_t nr = m.rows(), nc = m.cols();
    const VarsPtr vars = m.at(0, 0).vars();
    Work w{std::move(m), std::move(rhs), {}, {}, 0};
    w.rows.resize(nr);
    w.cols.resize(nc);
    for (std::size_t i = 0; i < nr; ++i) w.rows[i] = i;
    for (std::size_t j = 0; j < nc; ++j) w.cols[j] = j;

    RationalFunction prev = RationalFunction::one(vars);
    for (std::size_t step = 0; step < std::min(nr, nc); ++step) {
        std::size_t best_i = nr, best_j = nc;
        int best_deg = -1;
        for (std::size_t jj = step; jj < nc; ++jj) {
            for (std::size_t ii = step; ii < nr; ++ii) {
                const RationalFunction& e = w.a.at(w.rows[ii], w.cols[jj]);
                if (e.is_zero()) continue;
                int deg = e.num().total_degree();
                bool better = best_i == nr || deg < best_deg ||
                              (deg == best_deg && w.cols[jj] < w.cols[best_j]) ||
                              (deg == best_deg && w.cols[jj] == w.cols[best_j] &&
                               w.rows[ii] < w.rows[best_i]);
                if (better) {
                    best_i = ii;
                    best_j = jj;
                    best_deg = deg;
                }
            }
        }
        if (best_i == nr) break;
        std::swap(w.rows[step], w.rows[best_i]);
        std::swap(w.cols[step], w.cols[best_j]);

        const RationalFunction pivot = w.a.at(w.rows[step], w.cols[step]);
        for (std::size_t ii = step + 1; ii < nr; ++ii) {
            RationalFunction factor = w.a.at(w.rows[ii], w.cols[step]);
            if (!w.rhs.empty())
                w.rhs[w.rows[ii]] =
                    (pivot * w.rhs[w.rows[ii]] - factor * w.rhs[w.rows[step]]) / prev;
            for (std::size_t jj = step + 1; jj < nc; ++jj) {
                RationalFunction& e = w.a.at(w.rows[ii], w.cols[jj]);
                e = (pivot * e - factor * w.a.at(w.rows[step], w.cols[jj])) / prev;
            }
            w.a.at(w.rows[ii], w.cols[step]) = RationalFunction::zero(vars);
        }
        prev = pivot;
        w.rank = step + 1;
    }
    return w;
}

} // namespace

KernelResult kernel_of(const Mat<RationalFunction>& m) {
    const std::size_t nc = m.cols();
    const VarsPtr vars = m.at(0, 0).vars();
    Work w = eliminate(m, {});
    KernelResult out;
    out.rank = w.rank;
    for (std::size_t free = w.rank; free < nc; ++free) {
        std::vector<RationalFunction> x(nc, RationalFunction::zero(vars));
        x[w.cols[free]] = RationalFunction::one(vars);
        for (std::size_t ii = w.rank; ii-- > 0;) {
            RationalFunction s = RationalFunction::zero(vars);
            for (std::size_t jj = ii + 1; jj < nc; ++jj)
                s += w.a.at(w.rows[ii], w.cols[jj]) * x[w.cols[jj]];
            x[w.cols[ii]] = -s / w.a.at(w.rows[ii], w.cols[ii]);
        }
        // normalize: first nonzero coordinate becomes 1
        for (const auto& e : x) {
            if (!e.is_zero()) {
                RationalFunction inv = e.inverse();
                for (auto& y : x) y = y * inv;
                break;
            }
        }
        // exact check M x = 0
        for (std::size_t r = 0; r < m.rows(); ++r) {
            RationalFunction acc = RationalFunction::zero(vars);
            for (std::size_t c = 0; c < nc; ++c) acc += m.at(r, c) * x[c];
            if (!acc.is_zero()) throw Error("kernel back-substitution failed");
        }
        out.basis.push_back(std::move(x));
    }
    return out;
}

std::optional<std::vector<RationalFunction>> solve_particular(
    const Mat<RationalFunction>& m, const std::vector<RationalFunction>& b) {
    if (b.size() != m.rows()) throw Error("right-hand side length mismatch");
    const std::size_t nc = m.cols();
    const VarsPtr vars = m.at(0, 0).vars();
    Work w = eliminate(m, b);
    for (std::size_t ii = w.rank; ii < m.rows(); ++ii)
        if (!w.rhs[w.rows[ii]].is_zero()) return std::nullopt;
    std::vector<RationalFunction> x(nc, RationalFunction::zero(vars));
    for (std::size_t ii = w.rank; ii-- > 0;) {
        RationalFunction s = w.rhs[w.rows[ii]];
        for (std::size_t jj = ii + 1; jj < nc; ++jj)
            s -= w.a.at(w.rows[ii], w.cols[jj]) * x[w.cols[jj]];
        x[w.cols[ii]] = s / w.a.at(w.rows[ii], w.cols[ii]);
    }
    for (std::size_t r = 0; r < m.rows(); ++r) {
        RationalFunction acc = RationalFunction::zero(vars);
        for (std::size_t c = 0; c < nc; ++c) acc += m.at(r, c) * x[c];
        if (!(acc == b[r])) return std::nullopt;
    }
    return x;
}

namespace {

// C^i Z' for i = 0..k: the m x n coefficient blocks of the condition.
std::vector<Mat<RationalFunction>> condition_blocks(const MonicZ& z, std::size_t k,
                                                    const VarsPtr& coords) {
    Mat<RationalFunction> zp = functional_matrix(z.lower(), coords);
    Mat<RationalFunction> c = companion(z);
    std::vector<Mat<RationalFunction>> blocks{zp};
    for (std::size_t i = 1; i <= k; ++i) blocks.push_back(c * blocks.back());
    return blocks;
}

TensorPoly reshape(const std::vector<RationalFunction>& flat, std::size_t n, std::size_t k,
                   const VarsPtr& coords) {
    std::vector<Mat<RationalFunction>> mats;
    for (std::size_t i = 0; i <= k; ++i) {
        Mat<RationalFunction> mat(n, n, RationalFunction::zero(coords));
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) mat.at(a, b) = flat[(i * n + a) * n + b];
        mats.push_back(std::move(mat));
    }
    return TensorPoly(n, std::move(mats));
}

} // namespace

SystemSpec TensorFamily::specialize(const std::vector<RationalFunction>& params) const {
    if (params.size() != basis.size()) throw Error("one parameter per basis element required");
    std::vector<Mat<RationalFunction>> mats(k + 1,
                                            Mat<RationalFunction>(n, n, RationalFunction::zero(coords)));
    for (std::size_t j = 0; j < basis.size(); ++j)
        for (std::size_t i = 0; i <= k; ++i)
            mats[i] = mats[i] + basis[j].mat(i).scaled(params[j]);
    SystemSpec sys(coords, z, TensorPoly(n, std::move(mats)));
    if (!admits_multiplication(sys)) throw Error("specialization failed admissibility");
    return sys;
}

TensorFamily find_A(const MonicZ& z, std::size_t n, std::size_t k, const VarsPtr& coords) {
    if (!same_chart(z.vars(), coords)) throw Error("coordinate chart mismatch");
    if (coords->size() != n) throw Error("chart size differs from n");
    if (k + 1 > z.m()) throw Error("k must stay below m");
    const std::size_t m = z.m();
    auto blocks = condition_blocks(z, k, coords);

    Mat<RationalFunction> sys(m * n, n * n * (k + 1), RationalFunction::zero(coords));
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t i = 0; i <= k; ++i)
                for (std::size_t a = 0; a < n; ++a)
                    sys.at(r * n + b, (i * n + a) * n + b) = blocks[i].at(r, a);

    KernelResult kr = kernel_of(sys);
    TensorFamily fam{coords, z, n, k, {}};
    for (const auto& vec : kr.basis) fam.basis.push_back(reshape(vec, n, k, coords));
    for (const auto& member : fam.basis) {
        SystemSpec candidate(coords, z, member);
        if (!admits_multiplication(candidate)) throw Error("kernel member failed admissibility");
    }
    return fam;
}

UnitLeadingFamily find_A_unit_leading(const MonicZ& z, std::size_t n, std::size_t k,
                                      const VarsPtr& coords) {
    if (k == 0) throw Error("k must be positive");
    if (k + 1 > z.m()) throw Error("k must stay below m");
    const std::size_t m = z.m();
    auto blocks = condition_blocks(z, k, coords);

    Mat<RationalFunction> sys(m * n, n * n * k, RationalFunction::zero(coords));
    std::vector<RationalFunction> rhs(m * n, RationalFunction::zero(coords));
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t b = 0; b < n; ++b) {
            for (std::size_t i = 0; i < k; ++i)
                for (std::size_t a = 0; a < n; ++a)
                    sys.at(r * n + b, (i * n + a) * n + b) = blocks[i].at(r, a);
            rhs[r * n + b] = -blocks[k].at(r, b);
        }

    auto part = solve_particular(sys, rhs);
    if (!part) throw Error("no admissible tensor with unit leading coefficient");
    std::vector<RationalFunction> full = *part;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            full.push_back(a == b ? RationalFunction::one(coords) : RationalFunction::zero(coords));

    UnitLeadingFamily fam{coords, z, n, k, reshape(full, n, k, coords), {}};
    KernelResult kr = kernel_of(sys);
    for (const auto& vec : kr.basis) {
        std::vector<Mat<RationalFunction>> deltas;
        for (std::size_t i = 0; i < k; ++i) {
            Mat<RationalFunction> mat(n, n, RationalFunction::zero(coords));
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = 0; b < n; ++b) mat.at(a, b) = vec[(i * n + a) * n + b];
            deltas.push_back(std::move(mat));
        }
        fam.kernel.push_back(std::move(deltas));
    }
    SystemSpec candidate(coords, z, fam.particular);
    if (!admits_multiplication(candidate)) throw Error("particular solution failed admissibility");
    return fam;
}

bool check_231_phi(const RationalFunction& phi) {
    const VarsPtr& vars = phi.vars();
    if (vars->size() < 2) throw Error("phi needs a chart with two coordinates");
    auto x = RationalFunction::var(vars, (*vars)[0]);
    auto y = RationalFunction::var(vars, (*vars)[1]);
    RationalFunction px = phi.partial(0), py = phi.partial(1);
    RationalFunction eq1 = x * px * px - phi * px + y * px * py - py;
    RationalFunction eq2 = RationalFunction::one(vars) + x * px * py + y * py * py - phi * py;
    return eq1.is_zero() && eq2.is_zero();
}

SystemSpec build_231_system(const RationalFunction& phi) {
    const VarsPtr& vars = phi.vars();
    if (vars->size() != 2) throw Error("the (2,3,1) construction needs a two-coordinate chart");
    if (!check_231_phi(phi)) throw Error("phi does not satisfy the (2,3,1) constraints");
    auto x = RationalFunction::var(vars, (*vars)[0]);
    auto y = RationalFunction::var(vars, (*vars)[1]);
    RationalFunction px = phi.partial(0), py = phi.partial(1);
    Mat<RationalFunction> a0(2, 2, RationalFunction::zero(vars));
    a0.at(0, 0) = x * px;
    a0.at(0, 1) = x * py;
    a0.at(1, 0) = y * px - RationalFunction::one(vars);
    a0.at(1, 1) = y * py;
    Mat<RationalFunction> a1(2, 2, RationalFunction::zero(vars));
    a1.at(0, 0) = a1.at(1, 1) = RationalFunction::one(vars);
    MonicZ z(vars, {x, y, phi});
    SystemSpec sys(vars, std::move(z), TensorPoly(2, {a0, a1}));
    if (!admits_multiplication(sys)) throw Error("(2,3,1) construction failed admissibility");
    return sys;
}

SystemSpec build_231(const Rational& a) {
    if (a.is_zero()) throw Error("a must be nonzero");
    auto vars = make_vars({"x", "y"});
    auto x = RationalFunction::var(vars, "x");
    auto y = RationalFunction::var(vars, "y");
    RationalFunction phi =
        y.scaled(a) - x.scaled(a * a) + RationalFunction::constant(vars, a.inverse());
    return build_231_system(phi);
}

} // namespace starpde
