#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "starpde/generate.hpp"
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

SystemSpec generic_221() {
    auto v = make_vars({"x", "y"});
    MonicZ z(v, {rf(v, "x"), rf(v, "y")});
    return SystemSpec(v, z, TensorPoly(2, {-companion(z), eye(v, 2)}));
}

SystemSpec mm1_sys(std::size_t m, const char* prefix = "q") {
    std::vector<std::string> names;
    for (std::size_t i = 1; i <= m; ++i) names.push_back(prefix + std::to_string(i));
    auto v = make_vars(names);
    std::vector<RationalFunction> lower;
    for (const auto& nm : names) lower.push_back(rf(v, nm.c_str()));
    MonicZ z(v, lower);
    return SystemSpec(v, z, TensorPoly(m, {-companion(z), eye(v, m)}));
}

SystemSpec cauchy_riemann(const char* xn = "x", const char* yn = "y") {
    auto v = make_vars({std::string(xn), std::string(yn)});
    MonicZ z(v, {RationalFunction::one(v), RationalFunction::zero(v)});
    Mat<RationalFunction> a0(2, 2, RationalFunction::zero(v));
    a0.at(0, 1) = RationalFunction::one(v);
    a0.at(1, 0) = -RationalFunction::one(v);
    return SystemSpec(v, z, TensorPoly(2, {a0, eye(v, 2)}));
}

} // namespace

TEST_CASE("mu power table") {
    SUBCASE("the six (2,2,1) rows") {
        auto sys = generic_221();
        auto v = sys.coords();
        auto x = rf(v, "x"), y = rf(v, "y");
        auto fam = mu_power_table(sys, -2, 3);
        REQUIRE(fam.members.size() == 6);
        CHECK(fam.members[0].second == SolutionVec{{(y * y - x) / (x * x), y / (x * x)}});
        CHECK(fam.members[1].second == SolutionVec{{-y / x, -x.inverse()}});
        CHECK(fam.members[2].second == SolutionVec{{RationalFunction::one(v), RationalFunction::zero(v)}});
        CHECK(fam.members[3].second == SolutionVec{{RationalFunction::zero(v), RationalFunction::one(v)}});
        CHECK(fam.members[4].second == SolutionVec{{-x, -y}});
        CHECK(fam.members[5].second == SolutionVec{{x * y, -x + y * y}});
    }
    SUBCASE("(m,m,1) closed forms for m = 4") {
        auto sys = mm1_sys(4);
        auto v = sys.coords();
        auto fam = mu_power_table(sys, 1, 6);
        REQUIRE(fam.members.size() == 6);
        // basis columns mu^1..mu^3
        for (std::size_t r = 1; r <= 3; ++r)
            for (std::size_t i = 0; i < 4; ++i)
                CHECK(fam.members[r - 1].second[i] ==
                      (i == r ? RationalFunction::one(v) : RationalFunction::zero(v)));
        auto q = [&](std::size_t i) { return sys.z().z(i - 1); }; // q^i = Z_{i-1}
        // mu^4 = -[q1..q4]
        for (std::size_t i = 1; i <= 4; ++i) CHECK(fam.members[3].second[i - 1] == -q(i));
        // mu^5: first entry q1 q4, entry i = -q^(i-1) + q^i q4
        CHECK(fam.members[4].second[0] == q(1) * q(4));
        for (std::size_t i = 2; i <= 4; ++i)
            CHECK(fam.members[4].second[i - 1] == -q(i - 1) + q(i) * q(4));
        // mu^6: displayed composite rows
        RationalFunction tail = q(3) - q(4) * q(4);
        CHECK(fam.members[5].second[0] == q(1) * tail);
        CHECK(fam.members[5].second[1] == q(1) * q(4) + q(2) * tail);
        CHECK(fam.members[5].second[2] == -q(1) + q(2) * q(4) + q(3) * tail);
        CHECK(fam.members[5].second[3] ==
              -q(2) + q(4) * (q(3).scaled(Rational(2)) - q(4) * q(4)));
    }
    SUBCASE("r = 0 gives the unit solution") {
        auto sys = mm1_sys(3);
        auto fam = mu_power_table(sys, 0, 0);
        CHECK(fam.members[0].second[0] == RationalFunction::one(sys.coords()));
        CHECK(fam.members[0].second[1].is_zero());
        CHECK(fam.members[0].second[2].is_zero());
    }
    SUBCASE("negative range needs invertible mu") {
        auto v = make_vars({"x1", "x2"});
        MonicZ z(v, {RationalFunction::zero(v), RationalFunction::zero(v)});
        Mat<RationalFunction> a0(2, 2, RationalFunction::zero(v));
        a0.at(1, 0) = -RationalFunction::one(v);
        SystemSpec jodeit(v, z, TensorPoly(2, {a0, eye(v, 2)}));
        CHECK_THROWS_WITH((void)mu_power_table(jodeit, -1, 1),
                          "mu is not a unit (Z0 vanishes identically)");
    }
    SUBCASE("inadmissible systems are rejected") {
        auto sys = generic_221();
        auto a0 = sys.a().mat(0);
        a0.at(0, 0) += RationalFunction::one(sys.coords());
        SystemSpec broken(sys.coords(), sys.z(), TensorPoly(2, {a0, sys.a().mat(1)}));
        CHECK_THROWS((void)mu_power_table(broken, 0, 2));
    }
}

TEST_CASE("general solution of the eigenvalue-chart (2,2,1) system") {
    auto sys = eigen_221_system();
    auto v = sys.coords();
    auto x = rf(v, "x"), y = rf(v, "y");
    REQUIRE(admits_multiplication(sys));

    SUBCASE("phi = psi = t reproduces mu") {
        SolutionVec got = general_solution_221({Rational(0), Rational(1)}, {Rational(0), Rational(1)});
        CHECK(got == SolutionVec{{RationalFunction::zero(v), RationalFunction::one(v)}});
    }
    SUBCASE("phi = psi = t^2 reproduces the square of mu") {
        SolutionVec got = general_solution_221({Rational(0), Rational(0), Rational(1)},
                                               {Rational(0), Rational(0), Rational(1)});
        CHECK(got == SolutionVec{{-(x * y), x + y}});
        MuPoly sq = star_pow(MuPoly::mu(v), 2, sys.z());
        CHECK(to_mu_poly(got, v) == sq);
    }
    SUBCASE("phi = t^3, psi = 0 is a solution") {
        SolutionVec got = general_solution_221({Rational(0), Rational(0), Rational(0), Rational(1)},
                                               {});
        CHECK(verify_solution(sys, got));
    }
    SUBCASE("random polynomial pairs verify and decompose through idempotents") {
        std::mt19937 gen(21);
        auto [eplus, eminus] = idempotents_m2(sys);
        for (int rep = 0; rep < 10; ++rep) {
            std::vector<Rational> phi, psi;
            for (int d = 0; d <= 3; ++d) phi.push_back(rand_rational(gen, -4, 4));
            for (int d = 0; d <= 3; ++d) psi.push_back(rand_rational(gen, -4, 4));
            SolutionVec got = general_solution_221(phi, psi);
            CHECK(verify_solution(sys, got));
            // V = e+ * sum a_r mu^r_* + e- * sum b_r mu^r_* with phi = sum a_r t^r
            MuPoly phi_series = star_series_poly(phi, sys.z());
            MuPoly psi_series = star_series_poly(psi, sys.z());
            MuPoly lhs = to_mu_poly(got, v);
            MuPoly rhs = star_mul(to_mu_poly(eplus, v), phi_series, sys.z()) +
                         star_mul(to_mu_poly(eminus, v), psi_series, sys.z());
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("idempotents") {
    auto sys = eigen_221_system();
    auto v = sys.coords();
    auto z = sys.z();
    auto [ep, em] = idempotents_m2(sys);

    SUBCASE("algebra relations") {
        MuPoly p = to_mu_poly(ep, v), q = to_mu_poly(em, v);
        CHECK(star_mul(p, p, z) == p);
        CHECK(star_mul(q, q, z) == q);
        CHECK(p + q == MuPoly::one(v));
        CHECK(star_mul(p, q, z).is_zero());
    }
    SUBCASE("both are solutions") {
        CHECK(verify_solution(sys, ep));
        CHECK(verify_solution(sys, em));
    }
    SUBCASE("coinciding eigenvalues are rejected") {
        auto x = rf(v, "x");
        MonicZ zz(v, {x * x, x.scaled(Rational(-2))}); // (mu - x)^2
        Mat<RationalFunction> a0(2, 2, RationalFunction::zero(v));
        a0.at(0, 0) = -x;
        a0.at(1, 1) = -x;
        SystemSpec degenerate(v, zz, TensorPoly(2, {a0, eye(v, 2)}));
        CHECK_THROWS_WITH((void)idempotents_m2(degenerate), "eigenvalues coincide");
    }
}

TEST_CASE("direct sums") {
    SUBCASE("two generic (2,2,1) systems") {
        auto a = generic_221();
        auto b = rename_coords(generic_221(), {"u", "v"});
        auto sum = direct_sum(a, b);
        CHECK(sum.n() == 4);
        CHECK(sum.m() == 4);
        CHECK(admits_multiplication(sum));
        // lifted trivial solutions multiply into verified solutions
        auto fam = mu_power_table(sum, 0, 5);
        for (const auto& [label, sol] : fam.members) CHECK(verify_solution(sum, sol));
    }
    SUBCASE("constant-Z summand") {
        auto a = generic_221();
        auto b = cauchy_riemann("u", "v");
        auto sum = direct_sum(a, b);
        CHECK(admits_multiplication(sum));
        CHECK(sum.m() == 4);
    }
    SUBCASE("star products of lifted trivial solutions stay solutions") {
        auto sum = direct_sum(generic_221(), cauchy_riemann("u", "v"));
        std::mt19937 gen(22);
        auto z = sum.z();
        for (int rep = 0; rep < 10; ++rep) {
            std::vector<Rational> ca, cb;
            for (int i = 0; i < 4; ++i) ca.push_back(rand_rational(gen, -3, 3));
            for (int i = 0; i < 4; ++i) cb.push_back(rand_rational(gen, -3, 3));
            MuPoly pa = star_series_poly(ca, z);
            MuPoly pb = star_series_poly(cb, z);
            CHECK(verify_solution(sum, to_solution_vec(star_mul(pa, pb, z), z)));
        }
    }
    SUBCASE("name clashes are rejected") {
        CHECK_THROWS_WITH((void)direct_sum(generic_221(), generic_221()),
                          "coordinate name clash: x");
    }
}

TEST_CASE("diagonal block tensors") {
    SUBCASE("two 1x1 blocks") {
        auto v = make_vars({"q1", "q2"});
        auto x = diagonal_block_X(v, {1, 1}, {rf(v, "q1"), rf(v, "q2")});
        CHECK(admits_multiplication(from_tensor_X(x)));
    }
    SUBCASE("single constant block") {
        auto v = make_vars({"q1", "q2", "q3"});
        auto c = RationalFunction::constant(v, Rational(5));
        auto x = diagonal_block_X(v, {3}, {c});
        auto sys = from_tensor_X(x);
        // Z = (5 + mu)^3
        CHECK(sys.z().z(0) == RationalFunction::constant(v, Rational(125)));
        CHECK(sys.z().z(1) == RationalFunction::constant(v, Rational(75)));
        CHECK(sys.z().z(2) == RationalFunction::constant(v, Rational(15)));
        CHECK(admits_multiplication(sys));
    }
    SUBCASE("cross-block dependence is rejected") {
        auto v = make_vars({"q1", "q2"});
        CHECK_THROWS_WITH((void)diagonal_block_X(v, {1, 1}, {rf(v, "q2"), rf(v, "q2")}),
                          "block function depends on coordinates outside its block");
    }
    SUBCASE("mixed block sizes stay admissible") {
        auto v = make_vars({"q1", "q2", "q3"});
        auto f1 = rf(v, "q1") * rf(v, "q2") + RationalFunction::one(v);
        auto f2 = rf(v, "q3");
        auto x = diagonal_block_X(v, {2, 1}, {f1, f2});
        CHECK(admits_multiplication(from_tensor_X(x)));
    }
}

TEST_CASE("inverse tensors") {
    SUBCASE("diag(x, y)") {
        auto v = make_vars({"x", "y"});
        auto x = diagonal_block_X(v, {1, 1}, {rf(v, "x"), rf(v, "y")});
        auto inv = invert_X(x);
        CHECK(inv.entries().at(0, 0) == rf(v, "x").inverse());
        CHECK(inv.entries().at(1, 1) == rf(v, "y").inverse());
        CHECK(admits_multiplication(from_tensor_X(inv)));
    }
    SUBCASE("constant multiple of the identity") {
        auto v = make_vars({"x", "y"});
        auto c = RationalFunction::constant(v, Rational(3));
        auto x = diagonal_block_X(v, {2}, {c});
        auto inv = invert_X(x);
        CHECK(inv.entries().at(0, 0) == RationalFunction::constant(v, Rational(1, 3)));
    }
    SUBCASE("random admissible diagonal X") {
        std::mt19937 gen(23);
        auto v = make_vars({"x", "y"});
        for (int rep = 0; rep < 5; ++rep) {
            auto fx = RationalFunction::one(v) + rf(v, "x") * rf(v, "x");
            auto fy = RationalFunction::one(v) + rf(v, "y").scaled(rand_nonzero_rational(gen).abs());
            auto x = diagonal_block_X(v, {1, 1}, {fx, fy});
            auto inv = invert_X(x);
            CHECK(admits_multiplication(from_tensor_X(inv)));
        }
    }
    SUBCASE("singular X is rejected") {
        auto v = make_vars({"x", "y"});
        Mat<RationalFunction> m(2, 2, RationalFunction::zero(v));
        m.at(0, 0) = rf(v, "x");
        CHECK_THROWS_WITH((void)invert_X(XTensor(v, m)), "singular X");
    }
}
