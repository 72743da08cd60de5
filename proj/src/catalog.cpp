#include "starpde/catalog.hpp"

#include <sstream>

namespace starpde {

namespace {

RationalFunction rf(const VarsPtr& v, const std::string& name) {
    return RationalFunction::var(v, name);
}

Mat<RationalFunction> eye(const VarsPtr& v, std::size_t n) {
    Mat<RationalFunction> id(n, n, RationalFunction::zero(v));
    for (std::size_t i = 0; i < n; ++i) id.at(i, i) = RationalFunction::one(v);
    return id;
}

SystemSpec cauchy_riemann_system() {
    auto v = make_vars({"x", "y"});
    MonicZ z(v, {RationalFunction::one(v), RationalFunction::zero(v)});
    Mat<RationalFunction> a0(2, 2, RationalFunction::zero(v));
    a0.at(0, 1) = RationalFunction::one(v);
    a0.at(1, 0) = -RationalFunction::one(v);
    return SystemSpec(v, z, TensorPoly(2, {a0, eye(v, 2)}));
}

SystemSpec generic_221_system() {
    auto v = make_vars({"x", "y"});
    MonicZ z(v, {rf(v, "x"), rf(v, "y")});
    return SystemSpec(v, z, TensorPoly(2, {-companion(z), eye(v, 2)}));
}

SystemSpec mm1_system(std::size_t m) {
    std::vector<std::string> names;
    for (std::size_t i = 1; i <= m; ++i) names.push_back("q" + std::to_string(i));
    auto v = make_vars(names);
    std::vector<RationalFunction> lower;
    for (const auto& nm : names) lower.push_back(rf(v, nm));
    MonicZ z(v, std::move(lower));
    return SystemSpec(v, z, TensorPoly(m, {-companion(z), eye(v, m)}));
}

SystemSpec jodeit_system() {
    auto v = make_vars({"x1", "x2"});
    MonicZ z(v, {RationalFunction::zero(v), RationalFunction::zero(v)});
    Mat<RationalFunction> a0(2, 2, RationalFunction::zero(v));
    a0.at(1, 0) = -RationalFunction::one(v);
    return SystemSpec(v, z, TensorPoly(2, {a0, eye(v, 2)}));
}

SystemSpec findex_system() {
    auto v = make_vars({"x", "y"});
    auto x = rf(v, "x"), y = rf(v, "y");
    MonicZ z(v, {x, y, x * y});
    auto p = x * x * y + RationalFunction::one(v);
    auto q = x * (RationalFunction::one(v) - y * y);
    Mat<RationalFunction> a1(2, 2, RationalFunction::zero(v));
    a1.at(0, 0) = p;
    a1.at(0, 1) = p;
    a1.at(1, 0) = q;
    a1.at(1, 1) = q;
    Mat<RationalFunction> mrel(2, 2, RationalFunction::zero(v));
    mrel.at(0, 0) = x * y;
    mrel.at(0, 1) = x * x;
    mrel.at(1, 0) = y * y - RationalFunction::one(v);
    mrel.at(1, 1) = x * y;
    return SystemSpec(v, z, TensorPoly(2, {mrel * a1, a1}));
}

SystemSpec build_231_fixture(const Rational& a) {
    auto v = make_vars({"x", "y"});
    auto x = rf(v, "x"), y = rf(v, "y");
    RationalFunction phi =
        y.scaled(a) - x.scaled(a * a) + RationalFunction::constant(v, a.inverse());
    Mat<RationalFunction> a0(2, 2, RationalFunction::zero(v));
    a0.at(0, 0) = x * phi.partial(0);
    a0.at(0, 1) = x * phi.partial(1);
    a0.at(1, 0) = y * phi.partial(0) - RationalFunction::one(v);
    a0.at(1, 1) = y * phi.partial(1);
    MonicZ z(v, {x, y, phi});
    return SystemSpec(v, z, TensorPoly(2, {a0, eye(v, 2)}));
}

NumericSystem generic_321_numeric(double perturb = 0.0) {
    NumericSystem num;
    num.coords = make_vars({"x", "y", "z"});
    num.m = 2;
    num.z_lower = [](const std::vector<double>& p) { return std::vector<double>{p[0], p[1]}; };
    num.z_jacobian = [](const std::vector<double>&) {
        Mat<double> zp(2, 3, 0.0);
        zp.at(0, 0) = 1.0;
        zp.at(1, 1) = 1.0;
        return zp;
    };
    num.tensors = [perturb](const std::vector<double>& p) {
        double x = p[0], y = p[1];
        if (y * y <= 4.0 * x) throw Error("point outside the branch domain y^2 > 4x");
        double c = y + 0.5 * std::sqrt(y * y - 4.0 * x);
        double a = 1.0, b = a * (c - y);
        Mat<double> a0(3, 3, 0.0);
        a0.at(0, 0) = perturb;
        a0.at(0, 1) = x;
        a0.at(1, 0) = -1.0;
        a0.at(1, 1) = y;
        a0.at(2, 0) = a;
        a0.at(2, 1) = b;
        a0.at(2, 2) = c;
        Mat<double> a1(3, 3, 0.0);
        for (int i = 0; i < 3; ++i) a1.at(i, i) = 1.0;
        return std::vector<Mat<double>>{a0, a1};
    };
    return num;
}

SolutionVec vec(std::initializer_list<RationalFunction> es) {
    return SolutionVec{std::vector<RationalFunction>(es)};
}

void add_mu_powers(Fixture& f, long lo, long hi) {
    const auto& sys = *f.sys;
    MuPoly mu = MuPoly::mu(sys.coords());
    for (long r = lo; r <= hi; ++r)
        f.known_solutions.emplace_back("mu^" + std::to_string(r),
                                       to_solution_vec(star_pow(mu, r, sys.z()), sys.z()));
}

Fixture make_cauchy_riemann() {
    Fixture f;
    f.name = "cauchy-riemann";
    f.sys = cauchy_riemann_system();
    auto v = f.sys->coords();
    auto x = rf(v, "x"), y = rf(v, "y");
    f.known_solutions.emplace_back("unit", vec({RationalFunction::one(v), RationalFunction::zero(v)}));
    f.known_solutions.emplace_back("z", vec({x, y}));
    f.known_solutions.emplace_back("z^2", vec({x * x - y * y, (x * y).scaled(Rational(2))}));
    f.known_solutions.emplace_back("z^3",
                                   vec({x * x * x - (x * y * y).scaled(Rational(3)),
                                        (x * x * y).scaled(Rational(3)) - y * y * y}));
    const MonicZ z = f.sys->z();
    f.identities.emplace_back("star product is complex multiplication", [v, z]() {
        auto xx = rf(v, "x"), yy = rf(v, "y");
        MuPoly simple(v, {xx, yy});
        MuPoly sq = star_mul(simple, simple, z);
        if (!(sq == MuPoly(v, {xx * xx - yy * yy, (xx * yy).scaled(Rational(2))}))) return false;
        MuPoly cube = star_mul(sq, simple, z);
        return cube == MuPoly(v, {xx * xx * xx - (xx * yy * yy).scaled(Rational(3)),
                                  (xx * xx * yy).scaled(Rational(3)) - yy * yy * yy});
    });
    return f;
}

Fixture make_generic_221() {
    Fixture f;
    f.name = "generic-221";
    f.sys = generic_221_system();
    auto v = f.sys->coords();
    auto x = rf(v, "x"), y = rf(v, "y");
    add_mu_powers(f, -2, 3);
    const MonicZ z = f.sys->z();
    f.identities.emplace_back("power table rows", [v, z, x, y]() {
        MuPoly mu = MuPoly::mu(v);
        return star_pow(mu, -2, z) == MuPoly(v, {(y * y - x) / (x * x), y / (x * x)}) &&
               star_pow(mu, -1, z) == MuPoly(v, {-y / x, -x.inverse()}) &&
               star_pow(mu, 0, z) == MuPoly::one(v) &&
               star_pow(mu, 1, z) == MuPoly::mu(v) &&
               star_pow(mu, 2, z) == MuPoly(v, {-x, -y}) &&
               star_pow(mu, 3, z) == MuPoly(v, {x * y, -x + y * y});
    });
    return f;
}

Fixture make_generic_221_eigen() {
    Fixture f;
    f.name = "generic-221-eigen";
    f.sys = eigen_221_system();
    auto v = f.sys->coords();
    SystemSpec sys = *f.sys;
    add_mu_powers(f, 0, 3);
    auto [eplus, eminus] = idempotents_m2(sys);
    f.known_solutions.emplace_back("idempotent+", eplus);
    f.known_solutions.emplace_back("idempotent-", eminus);
    f.known_solutions.emplace_back(
        "general(t^2, t^3)",
        general_solution_221({Rational(0), Rational(0), Rational(1)},
                             {Rational(0), Rational(0), Rational(0), Rational(1)}));
    f.identities.emplace_back("idempotent algebra", [sys]() {
        auto [ep, em] = idempotents_m2(sys);
        auto v = sys.coords();
        MuPoly p = to_mu_poly(ep, v), q = to_mu_poly(em, v);
        return star_mul(p, p, sys.z()) == p && star_mul(q, q, sys.z()) == q &&
               p + q == MuPoly::one(v) && star_mul(p, q, sys.z()).is_zero();
    });
    f.identities.emplace_back("general solution at phi = psi = id is mu", [sys]() {
        SolutionVec got = general_solution_221({Rational(0), Rational(1)},
                                               {Rational(0), Rational(1)});
        return to_mu_poly(got, sys.coords()) == MuPoly::mu(sys.coords());
    });
    return f;
}

void add_mmk_carryover(Fixture& f);

Fixture make_mm1(std::size_t m) {
    Fixture f;
    f.name = "generic-mm1-" + std::to_string(m);
    f.sys = mm1_system(m);
    SystemSpec sys = *f.sys;
    add_mu_powers(f, 0, static_cast<long>(m) + 2);
    f.known_solutions.emplace_back("coordinate column", z_as_solution(sys));
    f.identities.emplace_back("mu^m is minus the coordinate column", [sys, m]() {
        MuPoly p = star_pow(MuPoly::mu(sys.coords()), static_cast<long>(m), sys.z());
        for (std::size_t i = 0; i < m; ++i)
            if (!(p.coeff(i) == -sys.z().z(i))) return false;
        return true;
    });
    if (m >= 3) add_mmk_carryover(f);
    return f;
}

void add_mmk_carryover(Fixture& f) {
    SystemSpec sys = *f.sys;
    const std::size_t m = sys.m();
    f.identities.emplace_back("solutions carry over to the (m,m,2) system", [sys, m]() {
        // any A with A_C = 0 keeps the mm1 solutions: A_0 = -(C A_1 + C^2 A_2)
        auto v = sys.coords();
        Mat<RationalFunction> c = companion(sys.z());
        Mat<RationalFunction> a1(m, m, RationalFunction::zero(v));
        Mat<RationalFunction> a2(m, m, RationalFunction::zero(v));
        for (std::size_t i = 0; i < m; ++i) {
            a1.at(i, i) = RationalFunction::constant(v, Rational(2 + static_cast<long>(i)));
            a2.at(i, (i + 1) % m) = RationalFunction::one(v);
        }
        Mat<RationalFunction> a0 = -(c * a1 + c * c * a2);
        SystemSpec mmk(v, sys.z(), TensorPoly(m, {a0, a1, a2}));
        if (!admits_multiplication(mmk)) return false;
        MuPoly mu = MuPoly::mu(v);
        for (long r = 0; r <= static_cast<long>(m) + 1; ++r) {
            SolutionVec s = to_solution_vec(star_pow(mu, r, sys.z()), sys.z());
            if (!verify_solution(mmk, s)) return false;
        }
        return true;
    });
}

Fixture make_findex() {
    Fixture f;
    f.name = "findex";
    f.sys = findex_system();
    SystemSpec sys = *f.sys;
    add_mu_powers(f, 0, 4);
    f.identities.emplace_back("cubic star product follows the m = 3 formula", [sys]() {
        auto v = sys.coords();
        auto z0 = sys.z().z(0), z1 = sys.z().z(1), z2 = sys.z().z(2);
        auto x = rf(v, "x"), y = rf(v, "y");
        MuPoly a(v, {x, y, x * y});
        MuPoly b(v, {RationalFunction::one(v), x + y, y * y});
        MuPoly got = star_mul(a, b, sys.z());
        auto v0 = a.coeff(0), v1 = a.coeff(1), v2 = a.coeff(2);
        auto w0 = b.coeff(0), w1 = b.coeff(1), w2 = b.coeff(2);
        MuPoly expect(v, {v0 * w0 - z0 * v1 * w2 - z0 * v2 * w1 + z0 * z2 * v2 * w2,
                          v0 * w1 + v1 * w0 - z1 * v1 * w2 - z1 * v2 * w1 +
                              (z1 * z2 - z0) * v2 * w2,
                          v0 * w2 + v1 * w1 + v2 * w0 - z2 * v1 * w2 - z2 * v2 * w1 +
                              (z2 * z2 - z1) * v2 * w2});
        return got == expect;
    });
    return f;
}

Fixture make_231(const Rational& a, const std::string& name) {
    Fixture f;
    f.name = name;
    f.sys = build_231_fixture(a);
    SystemSpec sys = *f.sys;
    add_mu_powers(f, 0, 3);
    f.identities.emplace_back("worked product mu * mu^2", [sys, a]() {
        auto v = sys.coords();
        auto x = rf(v, "x"), y = rf(v, "y");
        MuPoly mu = MuPoly::mu(v);
        MuPoly got = star_mul(mu, star_pow(mu, 2, sys.z()), sys.z());
        MuPoly expect(v, {-x, -y,
                          x.scaled(a * a) - y.scaled(a) -
                              RationalFunction::constant(v, a.inverse())});
        return got == expect;
    });
    return f;
}

Fixture make_jodeit() {
    Fixture f;
    f.name = "jodeit-4d";
    f.sys = jodeit_system();
    SystemSpec sys = *f.sys;
    auto v = sys.coords();
    auto x1 = rf(v, "x1"), x2 = rf(v, "x2");
    // psi = t^2, phi = t^3: f1 = psi(x1), g1 = x2 psi'(x1) + phi(x1)
    f.known_solutions.emplace_back("psi=t^2, phi=t^3",
                                   vec({x1 * x1, (x1 * x2).scaled(Rational(2)) + x1 * x1 * x1}));
    f.known_solutions.emplace_back("unit", vec({RationalFunction::one(v), RationalFunction::zero(v)}));
    f.identities.emplace_back("power series representation", [sys, x1, x2]() {
        auto v = sys.coords();
        // psi = sum a_r t^r, phi = sum b_r t^r; per-degree test up to 5
        std::vector<Rational> a{Rational(3), Rational(-1), Rational(2), Rational(0), Rational(1),
                                Rational(-2)};
        std::vector<Rational> b{Rational(1), Rational(4), Rational(0), Rational(-3), Rational(2),
                                Rational(5)};
        RationalFunction psi = RationalFunction::zero(v), dpsi = RationalFunction::zero(v),
                         phi = RationalFunction::zero(v);
        for (std::size_t r = 0; r < a.size(); ++r) {
            psi += x1.pow(static_cast<long>(r)).scaled(a[r]);
            if (r >= 1)
                dpsi += x1.pow(static_cast<long>(r - 1)).scaled(a[r] * Rational(static_cast<long>(r)));
            phi += x1.pow(static_cast<long>(r)).scaled(b[r]);
        }
        MuPoly lhs(v, {psi, x2 * dpsi + phi});
        MuPoly simple(v, {x1, x2});
        MuPoly rhs(v);
        for (std::size_t r = 0; r < a.size(); ++r) {
            MuPoly factor(v, {RationalFunction::constant(v, a[r]),
                              RationalFunction::constant(v, b[r])});
            rhs += star_mul(factor, star_pow(simple, static_cast<long>(r), sys.z()), sys.z());
        }
        return lhs == rhs;
    });
    f.identities.emplace_back("gradient pair against the Jordan block", [v, x1, x2]() {
        Mat<Rational> m(2, 2, Rational(0));
        m.at(0, 1) = Rational(1);
        RationalFunction fpart = x1 * x1;
        RationalFunction gpart = (x1 * x2).scaled(Rational(2)) + x1 * x1 * x1;
        return check_fmg(m, fpart, gpart);
    });
    return f;
}

Fixture make_generic_321() {
    Fixture f;
    f.name = "generic-321";
    f.numeric = generic_321_numeric();
    NumericSystem num = *f.numeric;
    f.identities.emplace_back("grid admissibility", [num]() {
        for (const auto& p : default_321_grid())
            if (numeric_admissibility_residual(num, p) > 1e-9) return false;
        return true;
    });
    f.identities.emplace_back("(2,2,1) solutions embed", [num]() {
        auto v = num.coords;
        auto x = rf(v, "x"), y = rf(v, "y");
        std::vector<SolutionVec> sols{
            SolutionVec{{-x, -y}},
            SolutionVec{{x * y, -x + y * y}},
            SolutionVec{{-y / x, -x.inverse()}},
        };
        for (const auto& p : default_321_grid())
            for (const auto& s : sols)
                if (numeric_solution_residual(num, s, p) > 1e-9) return false;
        return true;
    });
    return f;
}

void verify_fixture(const Fixture& f) {
    if (f.sys) {
        if (!admits_multiplication(*f.sys))
            throw Error("fixture " + f.name + " is not admissible");
        for (const auto& [label, sol] : f.known_solutions)
            if (!verify_solution(*f.sys, sol))
                throw Error("fixture " + f.name + ": known solution " + label + " failed");
    }
    for (const auto& [label, check] : f.identities)
        if (!check()) throw Error("fixture " + f.name + ": identity " + label + " failed");
}

Fixture build(const std::string& name) {
    if (name == "cauchy-riemann") return make_cauchy_riemann();
    if (name == "generic-221") return make_generic_221();
    if (name == "generic-221-eigen") return make_generic_221_eigen();
    if (name == "generic-mm1-2") return make_mm1(2);
    if (name == "generic-mm1-3") return make_mm1(3);
    if (name == "generic-mm1-4") return make_mm1(4);
    if (name == "generic-mm1-5") return make_mm1(5);
    if (name == "generic-321") return make_generic_321();
    if (name == "generic-231-a1") return make_231(Rational(1), "generic-231-a1");
    if (name == "generic-231-a2") return make_231(Rational(2), "generic-231-a2");
    if (name == "findex") return make_findex();
    if (name == "jodeit-4d") return make_jodeit();
    std::ostringstream os;
    os << "unknown fixture \"" << name << "\"; available:";
    for (const auto& n : catalog_names()) os << " " << n;
    throw Error(os.str());
}

} // namespace

std::vector<std::string> catalog_names() {
    return {"cauchy-riemann", "generic-221",    "generic-221-eigen", "generic-mm1-2",
            "generic-mm1-3",  "generic-mm1-4",  "generic-mm1-5",     "generic-321",
            "generic-231-a1", "generic-231-a2", "findex",            "jodeit-4d"};
}

Fixture load_fixture(const std::string& name) {
    Fixture f = build(name);
    verify_fixture(f);
    return f;
}

Fixture load_broken_fixture(const std::string& name) {
    Fixture f = build(name);
    f.known_solutions.clear();
    f.identities.clear();
    f.name += " (broken)";
    if (f.numeric) {
        f.numeric = generic_321_numeric(1.0);
        return f;
    }
    const SystemSpec& sys = *f.sys;
    auto v = sys.coords();
    if (name == "cauchy-riemann" || name == "jodeit-4d") {
        // constant-Z fixtures admit every tensor, so the perturbation goes
        // into Z itself
        std::vector<RationalFunction> lower = sys.z().lower();
        lower[0] += rf(v, (*v)[0]);
        f.sys = SystemSpec(v, MonicZ(v, std::move(lower)), sys.a());
    } else {
        auto a0 = sys.a().mat(0);
        a0.at(0, 0) += RationalFunction::one(v);
        std::vector<Mat<RationalFunction>> mats = sys.a().mats();
        mats[0] = a0;
        f.sys = SystemSpec(v, sys.z(), TensorPoly(sys.n(), std::move(mats)));
    }
    return f;
}

std::vector<std::vector<double>> default_321_grid() {
    std::vector<std::vector<double>> out;
    for (double x : {0.05, 0.1, 0.2})
        for (double y : {1.2, 1.6, 2.0})
            for (double z : {-0.4, 0.3}) out.push_back({x, y, z});
    return out;
}

} // namespace starpde
