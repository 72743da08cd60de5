#include "starpde/generate.hpp"

namespace starpde {

namespace {

Mat<RationalFunction> eye(const VarsPtr& vars, std::size_t n) {
    Mat<RationalFunction> id(n, n, RationalFunction::zero(vars));
    for (std::size_t i = 0; i < n; ++i) id.at(i, i) = RationalFunction::one(vars);
    return id;
}

} // namespace

GeneratedFamily mu_power_table(const SystemSpec& sys, long r_min, long r_max) {
    if (r_min > r_max) throw Error("empty exponent range");
    if (!admits_multiplication(sys)) throw Error("system does not admit *-multiplication");
    if (r_min < 0 && sys.z().z(0).is_zero())
        throw Error("mu is not a unit (Z0 vanishes identically)");
    GeneratedFamily fam{sys, {}};
    MuPoly mu = MuPoly::mu(sys.coords());
    for (long r = r_min; r <= r_max; ++r) {
        MuPoly p = star_pow(mu, r, sys.z());
        SolutionVec v = to_solution_vec(p, sys.z());
        if (!verify_solution(sys, v)) throw Error("generated mu power failed verification");
        fam.members.emplace_back("mu^" + std::to_string(r), std::move(v));
    }
    return fam;
}

MuPoly star_series_poly(const std::vector<Rational>& coeffs, const MonicZ& z) {
    // Residues are linear, so the finite star series is the residue of the
    // plain polynomial sum a_r mu^r.
    std::vector<RationalFunction> cs;
    cs.reserve(coeffs.size());
    for (const auto& a : coeffs) cs.push_back(RationalFunction::constant(z.vars(), a));
    return divmod_mu(MuPoly(z.vars(), std::move(cs)), z).second;
}

SystemSpec eigen_221_system() {
    auto v = make_vars({"x", "y"});
    auto x = RationalFunction::var(v, "x");
    auto y = RationalFunction::var(v, "y");
    MonicZ z(v, {x * y, -(x + y)});
    Mat<RationalFunction> a0(2, 2, RationalFunction::zero(v));
    a0.at(0, 0) = -x;
    a0.at(1, 1) = -y;
    return SystemSpec(v, z, TensorPoly(2, {a0, eye(v, 2)}));
}

namespace {

RationalFunction eval_univariate(const std::vector<Rational>& coeffs, const RationalFunction& t) {
    RationalFunction acc = RationalFunction::zero(t.vars());
    for (std::size_t i = coeffs.size(); i-- > 0;)
        acc = acc * t + RationalFunction::constant(t.vars(), coeffs[i]);
    return acc;
}

} // namespace

SolutionVec general_solution_221(const std::vector<Rational>& phi,
                                 const std::vector<Rational>& psi) {
    SystemSpec sys = eigen_221_system();
    auto x = RationalFunction::var(sys.coords(), "x");
    auto y = RationalFunction::var(sys.coords(), "y");
    RationalFunction phi_y = eval_univariate(phi, y);
    RationalFunction psi_x = eval_univariate(psi, x);
    RationalFunction d = x - y;
    return SolutionVec{{(x * phi_y - y * psi_x) / d, (psi_x - phi_y) / d}};
}

std::pair<SolutionVec, SolutionVec> idempotents_m2(const SystemSpec& sys) {
    if (sys.m() != 2) throw Error("idempotent pair requires m = 2");
    const auto& z0 = sys.z().z(0);
    const auto& z1 = sys.z().z(1);
    if ((z1 * z1 - z0.scaled(Rational(4))).is_zero()) throw Error("eigenvalues coincide");
    if (sys.n() < 2) throw Error("not in the eigenvalue chart");
    auto x = RationalFunction::var(sys.coords(), (*sys.coords())[0]);
    auto y = RationalFunction::var(sys.coords(), (*sys.coords())[1]);
    if (!(z0 == x * y) || !(z1 == -(x + y))) throw Error("not in the eigenvalue chart");
    RationalFunction d = x - y;
    SolutionVec plus{{x / d, -d.inverse()}};
    SolutionVec minus{{-y / d, d.inverse()}};
    return {plus, minus};
}

SystemSpec direct_sum(const SystemSpec& a, const SystemSpec& b) {
    for (const auto& na : *a.coords())
        for (const auto& nb : *b.coords())
            if (na == nb) throw Error("coordinate name clash: " + na);
    if (!admits_multiplication(a) || !admits_multiplication(b))
        throw Error("direct sum requires admissible summands");

    std::vector<std::string> names = *a.coords();
    names.insert(names.end(), b.coords()->begin(), b.coords()->end());
    VarsPtr big = make_vars(std::move(names));
    std::vector<std::size_t> map_a(a.n()), map_b(b.n());
    for (std::size_t i = 0; i < a.n(); ++i) map_a[i] = i;
    for (std::size_t i = 0; i < b.n(); ++i) map_b[i] = a.n() + i;

    auto lift_a = [&](const RationalFunction& r) { return r.extended(big, map_a); };
    auto lift_b = [&](const RationalFunction& r) { return r.extended(big, map_b); };

    std::vector<RationalFunction> za, zb;
    for (const auto& c : a.z().lower()) za.push_back(lift_a(c));
    for (const auto& c : b.z().lower()) zb.push_back(lift_b(c));
    MuPoly prod = MonicZ(big, za).as_mu_poly() * MonicZ(big, zb).as_mu_poly();
    std::vector<RationalFunction> lower;
    for (std::size_t i = 0; i < a.m() + b.m(); ++i) lower.push_back(prod.coeff(i));
    MonicZ z(big, std::move(lower));

    const std::size_t n = a.n() + b.n();
    const std::size_t k = std::max(a.k(), b.k());
    std::vector<Mat<RationalFunction>> mats;
    for (std::size_t i = 0; i <= k; ++i) {
        Mat<RationalFunction> blk(n, n, RationalFunction::zero(big));
        if (i <= a.k())
            for (std::size_t r = 0; r < a.n(); ++r)
                for (std::size_t c = 0; c < a.n(); ++c)
                    blk.at(r, c) = lift_a(a.a().mat(i).at(r, c));
        if (i <= b.k())
            for (std::size_t r = 0; r < b.n(); ++r)
                for (std::size_t c = 0; c < b.n(); ++c)
                    blk.at(a.n() + r, a.n() + c) = lift_b(b.a().mat(i).at(r, c));
        mats.push_back(std::move(blk));
    }
    return SystemSpec(big, std::move(z), TensorPoly(n, std::move(mats)));
}

XTensor diagonal_block_X(const VarsPtr& coords, const std::vector<std::size_t>& sizes,
                         const std::vector<RationalFunction>& funcs) {
    if (sizes.size() != funcs.size()) throw Error("one function per block required");
    std::size_t total = 0;
    for (auto s : sizes) total += s;
    if (total != coords->size()) throw Error("block sizes do not cover the chart");
    Mat<RationalFunction> x(total, total, RationalFunction::zero(coords));
    std::size_t offset = 0;
    for (std::size_t a = 0; a < sizes.size(); ++a) {
        if (!same_chart(funcs[a].vars(), coords)) throw Error("coordinate chart mismatch");
        for (std::size_t i = 0; i < coords->size(); ++i) {
            bool inside = i >= offset && i < offset + sizes[a];
            if (!inside && (funcs[a].num().depends_on(i) || funcs[a].den().depends_on(i)))
                throw Error("block function depends on coordinates outside its block");
        }
        for (std::size_t i = 0; i < sizes[a]; ++i) x.at(offset + i, offset + i) = funcs[a];
        offset += sizes[a];
    }
    return XTensor(coords, std::move(x));
}

XTensor invert_X(const XTensor& x) {
    RationalFunction det = x.entries().det();
    if (det.is_zero()) throw Error("singular X");
    if (!admits_multiplication(from_tensor_X(x)))
        throw Error("X is not admissible");
    Mat<RationalFunction> inv = adjugate(x.entries()).scaled(det.inverse());
    return XTensor(x.coords(), std::move(inv));
}

} // namespace starpde
