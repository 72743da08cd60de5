#include "starpde/mupoly.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace starpde {

MuPoly::MuPoly(VarsPtr vars, std::vector<RationalFunction> coeffs)
    : vars_(std::move(vars)), c_(std::move(coeffs)) {
    for (const auto& c : c_)
        if (!same_chart(c.vars(), vars_)) throw Error("coordinate chart mismatch");
    trim();
}

MuPoly::MuPoly(RationalFunction c) : vars_(c.vars()) {
    if (!c.is_zero()) c_.push_back(std::move(c));
}

MuPoly MuPoly::mu(const VarsPtr& vars, unsigned power) {
    std::vector<RationalFunction> cs(power + 1, RationalFunction::zero(vars));
    cs.back() = RationalFunction::one(vars);
    return MuPoly(vars, std::move(cs));
}

MuPoly MuPoly::one(const VarsPtr& vars) { return MuPoly(RationalFunction::one(vars)); }

void MuPoly::trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

RationalFunction MuPoly::coeff(std::size_t i) const {
    if (i < c_.size()) return c_[i];
    return RationalFunction::zero(vars_);
}

MuPoly MuPoly::operator-() const {
    MuPoly r = *this;
    for (auto& c : r.c_) c = -c;
    return r;
}

MuPoly operator+(const MuPoly& a, const MuPoly& b) {
    if (!same_chart(a.vars_, b.vars_)) throw Error("coordinate chart mismatch");
    std::vector<RationalFunction> cs(std::max(a.c_.size(), b.c_.size()),
                                     RationalFunction::zero(a.vars_));
    for (std::size_t i = 0; i < cs.size(); ++i) cs[i] = a.coeff(i) + b.coeff(i);
    return MuPoly(a.vars_, std::move(cs));
}

MuPoly operator-(const MuPoly& a, const MuPoly& b) { return a + (-b); }

MuPoly operator*(const MuPoly& a, const MuPoly& b) {
    if (!same_chart(a.vars_, b.vars_)) throw Error("coordinate chart mismatch");
    if (a.is_zero() || b.is_zero()) return MuPoly(a.vars_);
    std::vector<RationalFunction> cs(a.c_.size() + b.c_.size() - 1,
                                     RationalFunction::zero(a.vars_));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
        for (std::size_t j = 0; j < b.c_.size(); ++j) cs[i + j] += a.c_[i] * b.c_[j];
    return MuPoly(a.vars_, std::move(cs));
}

MuPoly MuPoly::scaled(const RationalFunction& c) const {
    MuPoly r = *this;
    for (auto& x : r.c_) x = x * c;
    r.trim();
    return r;
}

bool operator==(const MuPoly& a, const MuPoly& b) {
    return same_chart(a.vars_, b.vars_) && a.c_ == b.c_;
}

std::complex<double> MuPoly::eval_mu(std::complex<double> mu_value,
                                     const std::vector<double>& point) const {
    std::complex<double> acc(0.0, 0.0);
    for (std::size_t i = c_.size(); i-- > 0;) acc = acc * mu_value + c_[i].eval_d(point);
    return acc;
}

std::string MuPoly::str() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i].is_zero()) continue;
        if (!first) os << " + ";
        os << "(" << c_[i].str() << ")";
        if (i == 1) os << "*mu";
        if (i > 1) os << "*mu^" << i;
        first = false;
    }
    return os.str();
}

MonicZ::MonicZ(VarsPtr vars, std::vector<RationalFunction> lower)
    : vars_(std::move(vars)), lower_(std::move(lower)) {
    if (lower_.empty()) throw Error("monic Z must have degree at least 1");
    for (const auto& c : lower_)
        if (!same_chart(c.vars(), vars_)) throw Error("coordinate chart mismatch");
}

MuPoly MonicZ::as_mu_poly() const {
    std::vector<RationalFunction> cs = lower_;
    cs.push_back(RationalFunction::one(vars_));
    return MuPoly(vars_, std::move(cs));
}

SolutionVec to_solution_vec(const MuPoly& p, const MonicZ& z) {
    if (p.degree() >= static_cast<int>(z.m()))
        throw Error("mu-polynomial degree not below m");
    SolutionVec v;
    v.entries.reserve(z.m());
    for (std::size_t i = 0; i < z.m(); ++i) v.entries.push_back(p.coeff(i));
    return v;
}

MuPoly to_mu_poly(const SolutionVec& v, const VarsPtr& vars) {
    return MuPoly(vars, v.entries);
}

std::pair<MuPoly, MuPoly> divmod_mu(const MuPoly& p, const MonicZ& z) {
    const std::size_t m = z.m();
    const int d = p.degree();
    if (d < static_cast<int>(m)) return {MuPoly(z.vars()), p};
    std::vector<RationalFunction> r = p.coeffs();
    std::vector<RationalFunction> q(static_cast<std::size_t>(d) - m + 1,
                                    RationalFunction::zero(z.vars()));
    for (int i = d; i >= static_cast<int>(m); --i) {
        RationalFunction lead = r[static_cast<std::size_t>(i)];
        if (lead.is_zero()) continue;
        q[static_cast<std::size_t>(i) - m] = lead;
        r[static_cast<std::size_t>(i)] = RationalFunction::zero(z.vars());
        for (std::size_t j = 0; j < m; ++j)
            r[static_cast<std::size_t>(i) - m + j] -= lead * z.z(j);
    }
    r.resize(m, RationalFunction::zero(z.vars()));
    return {MuPoly(z.vars(), std::move(q)), MuPoly(z.vars(), std::move(r))};
}

MuPoly star_mul(const MuPoly& v, const MuPoly& w, const MonicZ& z) {
    const int m = static_cast<int>(z.m());
    if (v.degree() >= m || w.degree() >= m) throw Error("reduce operands first");
    MuPoly r = divmod_mu(v * w, z).second;
#ifndef NDEBUG
    // Matrix encoding of the same division must agree.
    SolutionVec alt = eval_at_companion(v * w, z);
    assert(to_mu_poly(alt, z.vars()) == r);
#endif
    return r;
}

MuPoly mu_inverse(const MonicZ& z) {
    if (z.z(0).is_zero()) throw Error("mu is not a unit (Z0 vanishes identically)");
    RationalFunction s = -z.z(0).inverse();
    std::vector<RationalFunction> cs(z.m(), RationalFunction::zero(z.vars()));
    for (std::size_t i = 0; i + 1 < z.m(); ++i) cs[i] = z.z(i + 1) * s;
    cs[z.m() - 1] = s;
    return MuPoly(z.vars(), std::move(cs));
}

MuPoly star_pow(const MuPoly& v, long r, const MonicZ& z) {
    if (r == 0) return MuPoly::one(z.vars());
    if (r < 0) {
        if (v != MuPoly::mu(z.vars()))
            throw Error("negative star powers are defined only for the base mu");
        return star_pow(mu_inverse(z), -r, z);
    }
    if (v.degree() >= static_cast<int>(z.m())) throw Error("reduce operands first");
    MuPoly acc = v;
    for (long i = 1; i < r; ++i) acc = star_mul(acc, v, z);
    return acc;
}

Mat<RationalFunction> companion(const MonicZ& z) {
    const std::size_t m = z.m();
    Mat<RationalFunction> c(m, m, RationalFunction::zero(z.vars()));
    for (std::size_t i = 0; i + 1 < m; ++i) c.at(i + 1, i) = RationalFunction::one(z.vars());
    for (std::size_t i = 0; i < m; ++i) c.at(i, m - 1) = -z.z(i);
    return c;
}

SolutionVec eval_at_companion(const MuPoly& p, const MonicZ& z) {
    const std::size_t m = z.m();
    // w = C^t e_1, advanced by the cheap companion recurrence.
    std::vector<RationalFunction> w(m, RationalFunction::zero(z.vars()));
    w[0] = RationalFunction::one(z.vars());
    std::vector<RationalFunction> acc(m, RationalFunction::zero(z.vars()));
    const int d = p.degree();
    for (int t = 0; t <= d; ++t) {
        if (t > 0) {
            RationalFunction last = w[m - 1];
            for (std::size_t i = m; i-- > 1;) w[i] = w[i - 1] - z.z(i) * last;
            w[0] = -z.z(0) * last;
        }
        RationalFunction pt = p.coeff(static_cast<std::size_t>(t));
        if (pt.is_zero()) continue;
        for (std::size_t i = 0; i < m; ++i) acc[i] += pt * w[i];
    }
    return SolutionVec{std::move(acc)};
}

MuPoly quotient_ring_inverse(const MuPoly& v, const MonicZ& z) {
    const std::size_t m = z.m();
    if (v.degree() >= static_cast<int>(m)) throw Error("reduce operands first");
    if (v.is_zero()) throw Error("zero is not a unit");
    // Column j of M is the coefficient vector of v * mu^j mod Z, so
    // v * x = 1 becomes M x = e_1.
    Mat<RationalFunction> mt(m, m, RationalFunction::zero(z.vars()));
    for (std::size_t j = 0; j < m; ++j) {
        MuPoly col = star_mul(v, star_pow(MuPoly::mu(z.vars()), static_cast<long>(j), z), z);
        for (std::size_t i = 0; i < m; ++i) mt.at(i, j) = col.coeff(i);
    }
    // Plain field elimination on the augmented system.
    std::vector<RationalFunction> rhs(m, RationalFunction::zero(z.vars()));
    rhs[0] = RationalFunction::one(z.vars());
    std::vector<std::size_t> perm(m);
    for (std::size_t i = 0; i < m; ++i) perm[i] = i;
    for (std::size_t k = 0; k < m; ++k) {
        std::size_t pivot = k;
        while (pivot < m && mt.at(perm[pivot], k).is_zero()) ++pivot;
        if (pivot == m) throw Error("not a unit in the quotient ring");
        std::swap(perm[k], perm[pivot]);
        for (std::size_t i = k + 1; i < m; ++i) {
            RationalFunction f = mt.at(perm[i], k) / mt.at(perm[k], k);
            if (f.is_zero()) continue;
            for (std::size_t j = k; j < m; ++j)
                mt.at(perm[i], j) -= f * mt.at(perm[k], j);
            rhs[perm[i]] -= f * rhs[perm[k]];
        }
    }
    std::vector<RationalFunction> x(m, RationalFunction::zero(z.vars()));
    for (std::size_t k = m; k-- > 0;) {
        RationalFunction s = rhs[perm[k]];
        for (std::size_t j = k + 1; j < m; ++j) s -= mt.at(perm[k], j) * x[j];
        x[k] = s / mt.at(perm[k], k);
    }
    return MuPoly(z.vars(), std::move(x));
}

} // namespace starpde
