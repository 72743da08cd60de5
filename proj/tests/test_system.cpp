#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "starpde/system.hpp"
#include "test_util.hpp"

#include <random>

using namespace starpde;
using namespace starpde::testutil;

namespace {

RationalFunction rf(const VarsPtr& v, const char* name) { return RationalFunction::var(v, name); }

Mat<RationalFunction> eye(const VarsPtr& v, std::size_t n) {
    Mat<RationalFunction> id(n, n, RationalFunction::zero(v));
    for (std::size_t i = 0; i < n; ++i) id.at(i, i) = RationalFunction::one(v);
    return id;
}

// Generic (m,m,1) chart: coordinates q1..qm, Z_i = q^(i+1), A = -C + mu I.
SystemSpec mm1_sys(std::size_t m) {
    std::vector<std::string> names;
    for (std::size_t i = 1; i <= m; ++i) names.push_back("q" + std::to_string(i));
    auto v = make_vars(names);
    std::vector<RationalFunction> lower;
    for (const auto& nm : names) lower.push_back(rf(v, nm.c_str()));
    MonicZ z(v, lower);
    return SystemSpec(v, z, TensorPoly(m, {-companion(z), eye(v, m)}));
}

// Same system with coordinates named (x, y).
SystemSpec generic_221() {
    auto v = make_vars({"x", "y"});
    MonicZ z(v, {rf(v, "x"), rf(v, "y")});
    return SystemSpec(v, z, TensorPoly(2, {-companion(z), eye(v, 2)}));
}

SystemSpec cauchy_riemann() {
    auto v = make_vars({"x", "y"});
    MonicZ z(v, {RationalFunction::one(v), RationalFunction::zero(v)});
    Mat<RationalFunction> a0(2, 2, RationalFunction::zero(v));
    a0.at(0, 1) = RationalFunction::one(v);
    a0.at(1, 0) = -RationalFunction::one(v);
    return SystemSpec(v, z, TensorPoly(2, {a0, eye(v, 2)}));
}

// (2,3,1) with Z_2 = phi(Z_0, Z_1) = a y - a^2 x + 1/a and A_1 = I.
SystemSpec sys_231(const Rational& a) {
    auto v = make_vars({"x", "y"});
    auto x = rf(v, "x"), y = rf(v, "y");
    RationalFunction phi =
        y.scaled(a) - x.scaled(a * a) + RationalFunction::constant(v, a.inverse());
    Mat<RationalFunction> a0(2, 2, RationalFunction::zero(v));
    a0.at(0, 0) = x * phi.partial("x");
    a0.at(0, 1) = x * phi.partial("y");
    a0.at(1, 0) = y * phi.partial("x") - RationalFunction::one(v);
    a0.at(1, 1) = y * phi.partial("y");
    MonicZ z(v, {x, y, phi});
    return SystemSpec(v, z, TensorPoly(2, {a0, eye(v, 2)}));
}

SolutionVec sol(std::initializer_list<RationalFunction> es) {
    return SolutionVec{std::vector<RationalFunction>(es)};
}

} // namespace

TEST_CASE("residual forms") {
    auto sys = generic_221();
    auto v = sys.coords();
    auto x = rf(v, "x"), y = rf(v, "y");
    auto zero = RationalFunction::zero(v);
    auto one = RationalFunction::one(v);

    SUBCASE("constants solve the system") {
        CHECK(residuals(sys, sol({one, zero})).all_zero());
    }
    SUBCASE("mu^2 column has zero residuals") {
        CHECK(residuals(sys, sol({-x, -y})).all_zero());
    }
    SUBCASE("(x, 0) fails with the residuals of the direct expansion") {
        SolutionVec cand = sol({x, zero});
        ResidualForms r = residuals(sys, cand);
        CHECK_FALSE(r.all_zero());
        // Independent expansion of A dV mod Z for V = (x, 0):
        // B_0 = (-d_y V0 - x d_x V1, x d_x V0 + y d_y V0 - x d_y V1) = (0, x)
        // B_1 = (d_x V0 - y d_x V1 - d_y V1, d_y V0 + x d_x V1) = (1, 0)
        CHECK(r.rows[0][0] == zero);
        CHECK(r.rows[0][1] == x);
        CHECK(r.rows[1][0] == one);
        CHECK(r.rows[1][1] == zero);
    }
    SUBCASE("matrix and direct routes agree on random candidates") {
        std::mt19937 gen(12);
        for (int rep = 0; rep < 20; ++rep) {
            SolutionVec cand = sol({RationalFunction(rand_poly(v, gen, 2, 3)),
                                    RationalFunction(rand_poly(v, gen, 2, 3))});
            CHECK(residuals(sys, cand).rows == residuals_direct(sys, cand).rows);
        }
    }
    SUBCASE("wrong length is rejected") {
        CHECK_THROWS(residuals(sys, sol({x})));
    }
}

TEST_CASE("verify_solution") {
    SUBCASE("Cauchy-Riemann") {
        auto sys = cauchy_riemann();
        auto v = sys.coords();
        auto x = rf(v, "x"), y = rf(v, "y");
        CHECK(verify_solution(sys, sol({x, y})));
        CHECK_FALSE(verify_solution(sys, sol({x, -y})));
        // real and imaginary parts of (x + i y)^2
        CHECK(verify_solution(sys, sol({x * x - y * y, (x * y).scaled(Rational(2))})));
    }
    SUBCASE("(2,3,1) worked product") {
        auto sys = sys_231(Rational(1));
        auto v = sys.coords();
        auto x = rf(v, "x"), y = rf(v, "y");
        CHECK(verify_solution(sys, sol({-x, -y, x - y - RationalFunction::one(v)})));
    }
}

TEST_CASE("admissibility") {
    SUBCASE("Cauchy-Riemann: constant Z") {
        CHECK(admits_multiplication(cauchy_riemann()));
    }
    SUBCASE("generic (m,m,1) for m up to 5") {
        for (std::size_t m = 2; m <= 5; ++m) CHECK(admits_multiplication(mm1_sys(m)));
    }
    SUBCASE("perturbed A_0 breaks the condition with a unit witness") {
        auto sys = generic_221();
        auto v = sys.coords();
        auto a0 = sys.a().mat(0);
        a0.at(0, 0) += RationalFunction::one(v);
        SystemSpec broken(v, sys.z(), TensorPoly(2, {a0, sys.a().mat(1)}));
        auto verdict = admissibility(broken);
        CHECK_FALSE(verdict.admits);
        // In this chart Z' = I, so the residual is exactly the perturbation.
        CHECK(verdict.row == 0);
        CHECK(verdict.col == 0);
        CHECK(*verdict.witness == RationalFunction::one(v));
    }
    SUBCASE("admissible iff Z - mu^m is a solution") {
        auto good = generic_221();
        CHECK(verify_solution(good, z_as_solution(good)) == admits_multiplication(good));
        auto sys = generic_221();
        auto a0 = sys.a().mat(0);
        a0.at(1, 0) += rf(sys.coords(), "x");
        SystemSpec bad(sys.coords(), sys.z(), TensorPoly(2, {a0, sys.a().mat(1)}));
        CHECK(verify_solution(bad, z_as_solution(bad)) == admits_multiplication(bad));
        CHECK_FALSE(admits_multiplication(bad));
    }
    SUBCASE("converse of the multiplication theorem: mu * mu^(m-1) is the witness") {
        auto sys = generic_221();
        auto a0 = sys.a().mat(0);
        a0.at(0, 0) += RationalFunction::one(sys.coords());
        SystemSpec broken(sys.coords(), sys.z(), TensorPoly(2, {a0, sys.a().mat(1)}));
        MuPoly mu = MuPoly::mu(sys.coords());
        MuPoly prod = star_mul(mu, star_pow(mu, 1, broken.z()), broken.z());
        CHECK_FALSE(verify_solution(broken, to_solution_vec(prod, broken.z())));
        // trivial factors stay solutions of the broken system
        CHECK(verify_solution(broken, to_solution_vec(mu, broken.z())));
    }
}

TEST_CASE("closure under the star product") {
    auto sys = generic_221();
    auto z = sys.z();
    std::mt19937 gen(13);
    std::vector<MuPoly> pool;
    for (long r = 0; r <= 4; ++r) pool.push_back(star_pow(MuPoly::mu(sys.coords()), r, z));
    for (int rep = 0; rep < 40; ++rep) {
        MuPoly a = pool[gen() % pool.size()].scaled(
            RationalFunction::constant(sys.coords(), rand_nonzero_rational(gen)));
        MuPoly b = pool[gen() % pool.size()] + pool[gen() % pool.size()];
        REQUIRE(verify_solution(sys, to_solution_vec(a, z)));
        REQUIRE(verify_solution(sys, to_solution_vec(b, z)));
        CHECK(verify_solution(sys, to_solution_vec(star_mul(a, b, z), z)));
    }
}

TEST_CASE("X tensor specialization") {
    SUBCASE("diag(x, y)") {
        auto v = make_vars({"x", "y"});
        Mat<RationalFunction> m(2, 2, RationalFunction::zero(v));
        m.at(0, 0) = rf(v, "x");
        m.at(1, 1) = rf(v, "y");
        XTensor x(v, m);
        auto sys = from_tensor_X(x);
        CHECK(sys.z().z(0) == rf(v, "x") * rf(v, "y"));
        CHECK(sys.z().z(1) == rf(v, "x") + rf(v, "y"));
        CHECK(admits_multiplication(sys));
        CHECK(nijenhuis(x).is_zero());
    }
    SUBCASE("X = 0") {
        auto v = make_vars({"x", "y"});
        XTensor x(v, Mat<RationalFunction>(2, 2, RationalFunction::zero(v)));
        auto sys = from_tensor_X(x);
        CHECK(sys.z().z(0).is_zero());
        CHECK(sys.z().z(1).is_zero());
        CHECK(admits_multiplication(sys));
    }
    SUBCASE("constant companion-form X") {
        auto v = make_vars({"x", "y"});
        Mat<RationalFunction> m(2, 2, RationalFunction::zero(v));
        m.at(0, 1) = RationalFunction::constant(v, Rational(-2));
        m.at(1, 0) = RationalFunction::one(v);
        m.at(1, 1) = RationalFunction::constant(v, Rational(-3));
        XTensor x(v, m);
        CHECK(nijenhuis(x).is_zero());
        CHECK(admits_multiplication(from_tensor_X(x)));
    }
}

TEST_CASE("Nijenhuis torsion and the cofactor identity") {
    SUBCASE("scalar multiple of the identity") {
        auto v = make_vars({"x", "y"});
        auto f = rf(v, "x") + rf(v, "y") * rf(v, "y");
        Mat<RationalFunction> m(2, 2, RationalFunction::zero(v));
        m.at(0, 0) = f;
        m.at(1, 1) = f;
        CHECK(nijenhuis(XTensor(v, m)).is_zero());
    }
    SUBCASE("explicit nonzero torsion with exact identity") {
        auto v = make_vars({"x", "y"});
        Mat<RationalFunction> m(2, 2, RationalFunction::zero(v));
        m.at(0, 1) = rf(v, "x");
        m.at(1, 0) = RationalFunction::one(v);
        m.at(1, 1) = rf(v, "y");
        XTensor x(v, m);
        // companion-form tensors are torsion free
        CHECK(nijenhuis(x).is_zero());
        auto [lhs, rhs] = torsion_identity_sides(x);
        CHECK(lhs == rhs);

        // crossed diagonal: nonzero torsion, identity still exact
        Mat<RationalFunction> cross(2, 2, RationalFunction::zero(v));
        cross.at(0, 0) = rf(v, "y");
        cross.at(1, 1) = rf(v, "x");
        XTensor xc(v, cross);
        auto t = nijenhuis(xc);
        CHECK_FALSE(t.is_zero());
        CHECK(t.at(0, 0, 1) == rf(v, "y") - rf(v, "x"));
        auto [l2, r2] = torsion_identity_sides(xc);
        CHECK(l2 == r2);
        CHECK_FALSE(l2[0].is_zero());
    }
    SUBCASE("identity on random 2x2 and 3x3 tensors") {
        std::mt19937 gen(14);
        auto v2 = make_vars({"x", "y"});
        auto v3 = make_vars({"x", "y", "z"});
        for (int rep = 0; rep < 20; ++rep) {
            Mat<RationalFunction> m2(2, 2, RationalFunction::zero(v2));
            for (std::size_t i = 0; i < 2; ++i)
                for (std::size_t j = 0; j < 2; ++j)
                    m2.at(i, j) = RationalFunction(rand_poly(v2, gen, 2, 2));
            CHECK(torsion_identity_holds(XTensor(v2, m2)));
            Mat<RationalFunction> m3(3, 3, RationalFunction::zero(v3));
            for (std::size_t i = 0; i < 3; ++i)
                for (std::size_t j = 0; j < 3; ++j)
                    m3.at(i, j) = RationalFunction(rand_poly(v3, gen, 2, 2));
            CHECK(torsion_identity_holds(XTensor(v3, m3)));
        }
    }
}

TEST_CASE("Cayley-Hamilton consequence in the generic (2,2,1) chart") {
    auto sys = generic_221();
    auto v = sys.coords();
    // With A = -C the first block of the equivalent system is
    // (A^2 - Z_1 A + Z_0 I) dV_1, and the matrix itself vanishes.
    auto c = companion(sys.z());
    auto a = -c;
    auto lhs = a * a - a.scaled(rf(v, "y")) + eye(v, 2).scaled(rf(v, "x"));
    CHECK(lhs == Mat<RationalFunction>(2, 2, RationalFunction::zero(v)));
}

TEST_CASE("gradient pairs against a constant matrix") {
    SUBCASE("Jordan-block pair") {
        auto v = make_vars({"x1", "x2"});
        auto x1 = rf(v, "x1"), x2 = rf(v, "x2");
        Mat<Rational> m(2, 2, Rational(0));
        m.at(0, 1) = Rational(1);
        // psi = t^2 + 3t, phi = t^3: f = psi(x1), g = x2 psi'(x1) + phi(x1)
        RationalFunction f = x1 * x1 + x1.scaled(Rational(3));
        RationalFunction g = x2 * (x1.scaled(Rational(2)) + RationalFunction::constant(v, Rational(3))) +
                             x1 * x1 * x1;
        CHECK(check_fmg(m, f, g));
        CHECK_FALSE(check_fmg(m, g, f));
    }
    SUBCASE("identity matrix") {
        auto v = make_vars({"x", "y"});
        auto f = rf(v, "x") * rf(v, "y");
        Mat<Rational> id(2, 2, Rational(0));
        id.at(0, 0) = id.at(1, 1) = Rational(1);
        CHECK(check_fmg(id, f, f));
    }
    SUBCASE("Cauchy-Riemann pair (x + i y)^2") {
        auto v = make_vars({"x", "y"});
        auto x = rf(v, "x"), y = rf(v, "y");
        Mat<Rational> m(2, 2, Rational(0));
        m.at(0, 1) = Rational(1);
        m.at(1, 0) = Rational(-1);
        CHECK(check_fmg(m, x * x - y * y, (x * y).scaled(Rational(2))));
    }
    SUBCASE("dimension mismatch") {
        auto v = make_vars({"x", "y"});
        Mat<Rational> m(3, 3, Rational(0));
        CHECK_THROWS(check_fmg(m, rf(v, "x"), rf(v, "y")));
    }
}

TEST_CASE("numeric route for radical branches") {
    // (3,2,1) branch: A_0 = [[0,x,0],[-1,y,0],[a,b,c]] with a = 1,
    // c = y + sqrt(y^2-4x)/2, b = a (c - y); Z = (x, y) and A_1 = I.
    auto coords = make_vars({"x", "y", "z"});
    NumericSystem num;
    num.coords = coords;
    num.m = 2;
    num.z_lower = [](const std::vector<double>& p) { return std::vector<double>{p[0], p[1]}; };
    num.z_jacobian = [](const std::vector<double>&) {
        Mat<double> zp(2, 3, 0.0);
        zp.at(0, 0) = 1.0;
        zp.at(1, 1) = 1.0;
        return zp;
    };
    num.tensors = [](const std::vector<double>& p) {
        double x = p[0], y = p[1];
        double c = y + 0.5 * std::sqrt(y * y - 4 * x);
        double a = 1.0, b = a * (c - y);
        Mat<double> a0(3, 3, 0.0);
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

    auto x = rf(coords, "x"), y = rf(coords, "y");
    for (double px : {0.05, 0.1, 0.2}) {
        for (double py : {1.2, 1.6, 2.0}) {
            std::vector<double> p{px, py, 0.3};
            CHECK(numeric_admissibility_residual(num, p) <= 1e-12);
            // embedded (2,2,1) solution mu^2 = (-x, -y), constant in z
            SolutionVec v{std::vector<RationalFunction>{-x, -y}};
            CHECK(numeric_solution_residual(num, v, p) <= 1e-9);
        }
    }
}
