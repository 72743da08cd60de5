#include "starpde/ratfunc.hpp"

namespace starpde {

namespace {

MultiPoly exact_div(const MultiPoly& a, const MultiPoly& b) {
    auto q = try_exact_divide(a, b);
    if (!q) throw Error("exact polynomial division failed");
    return *q;
}

// Joint canonical scaling: multiply both polynomials by the positive rational
// that makes all coefficients integers with overall content 1.
void integer_scale(MultiPoly& num, MultiPoly& den) {
    mpz_class l(1);
    for (const auto& [e, c] : num.terms()) l = lcm(l, c.denominator());
    for (const auto& [e, c] : den.terms()) l = lcm(l, c.denominator());
    mpz_class g(0);
    for (const auto& [e, c] : num.terms()) g = gcd(g, mpz_class(c.numerator() * l / c.denominator()));
    for (const auto& [e, c] : den.terms()) g = gcd(g, mpz_class(c.numerator() * l / c.denominator()));
    if (g == 0) g = 1;
    Rational s(l, g);
    num = num.scaled(s);
    den = den.scaled(s);
}

} // namespace

RationalFunction::RationalFunction(MultiPoly num)
    : num_(std::move(num)), den_(MultiPoly::constant(num_.vars(), Rational(1))) {
    normalize();
}

RationalFunction::RationalFunction(MultiPoly num, MultiPoly den)
    : num_(std::move(num)), den_(std::move(den)) {
    if (!same_chart(num_.vars(), den_.vars())) throw Error("coordinate chart mismatch");
    normalize();
}

void RationalFunction::normalize() {
    if (den_.is_zero()) throw Error("division by zero polynomial");
    if (num_.is_zero()) {
        den_ = MultiPoly::constant(num_.vars(), Rational(1));
        return;
    }
    if (!den_.is_constant()) {
        MultiPoly g = poly_gcd(num_, den_);
        if (!g.is_constant()) {
            num_ = exact_div(num_, g);
            den_ = exact_div(den_, g);
        }
    }
    integer_scale(num_, den_);
    if (den_.leading_coeff().sign() < 0) {
        num_ = -num_;
        den_ = -den_;
    }
}

RationalFunction RationalFunction::zero(const VarsPtr& vars) {
    return RationalFunction(MultiPoly(vars));
}

RationalFunction RationalFunction::one(const VarsPtr& vars) {
    return constant(vars, Rational(1));
}

RationalFunction RationalFunction::constant(const VarsPtr& vars, Rational c) {
    return RationalFunction(MultiPoly::constant(vars, std::move(c)));
}

RationalFunction RationalFunction::var(const VarsPtr& vars, const std::string& name) {
    return RationalFunction(MultiPoly::var(vars, name));
}

Rational RationalFunction::constant_value() const {
    return num_.constant_value() / den_.constant_value();
}

RationalFunction RationalFunction::operator-() const {
    RationalFunction r = *this;
    r.num_ = -r.num_;
    return r;
}

RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
    return RationalFunction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) {
    return RationalFunction(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
}

RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
    return RationalFunction(a.num_ * b.num_, a.den_ * b.den_);
}

RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
    if (b.is_zero()) throw Error("division by the zero rational function");
    return RationalFunction(a.num_ * b.den_, a.den_ * b.num_);
}

RationalFunction RationalFunction::scaled(const Rational& c) const {
    return RationalFunction(num_.scaled(c), den_);
}

RationalFunction RationalFunction::inverse() const {
    if (is_zero()) throw Error("division by the zero rational function");
    return RationalFunction(den_, num_);
}

RationalFunction RationalFunction::pow(long e) const {
    if (e < 0) return inverse().pow(-e);
    RationalFunction r = one(vars());
    RationalFunction b = *this;
    while (e > 0) {
        if (e & 1) r = r * b;
        b = b * b;
        e >>= 1;
    }
    return r;
}

RationalFunction RationalFunction::partial(const std::string& coord) const {
    return partial(var_index(vars(), coord));
}

RationalFunction RationalFunction::partial(std::size_t var) const {
    if (var >= vars()->size()) throw Error("unknown coordinate index");
    // Quotient rule; den' = 0 is the common polynomial case.
    MultiPoly dn = num_.partial(var);
    MultiPoly dd = den_.partial(var);
    if (dd.is_zero()) return RationalFunction(std::move(dn), den_);
    return RationalFunction(dn * den_ - num_ * dd, den_ * den_);
}

Rational RationalFunction::eval(const std::vector<Rational>& point) const {
    Rational d = den_.eval(point);
    if (d.is_zero()) throw Error("denominator vanishes at evaluation point");
    return num_.eval(point) / d;
}

double RationalFunction::eval_d(const std::vector<double>& point) const {
    double d = den_.eval_d(point);
    if (d == 0.0) throw Error("denominator vanishes at evaluation point");
    return num_.eval_d(point) / d;
}

RationalFunction RationalFunction::extended(const VarsPtr& bigger,
                                            const std::vector<std::size_t>& map) const {
    auto lift = [&](const MultiPoly& p) {
        MultiPoly out(bigger);
        for (const auto& [e, c] : p.terms()) {
            Expo big(bigger->size(), 0);
            for (std::size_t i = 0; i < e.size(); ++i) big[map[i]] = e[i];
            out.add_term(big, c);
        }
        return out;
    };
    return RationalFunction(lift(num_), lift(den_));
}

std::string RationalFunction::str() const {
    if (den_.is_constant() && den_.constant_value().is_one()) return num_.str();
    return "(" + num_.str() + ")/(" + den_.str() + ")";
}

} // namespace starpde
