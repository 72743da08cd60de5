#include "starpde/multipoly.hpp"

#include <algorithm>
#include <sstream>

namespace starpde {

VarsPtr make_vars(std::vector<std::string> names) {
    for (std::size_t i = 0; i < names.size(); ++i)
        for (std::size_t j = i + 1; j < names.size(); ++j)
            if (names[i] == names[j]) throw Error("duplicate coordinate name: " + names[i]);
    return std::make_shared<const Vars>(std::move(names));
}

VarsPtr make_vars(std::initializer_list<const char*> names) {
    std::vector<std::string> v(names.begin(), names.end());
    return make_vars(std::move(v));
}

std::size_t var_index(const VarsPtr& vars, const std::string& name) {
    for (std::size_t i = 0; i < vars->size(); ++i)
        if ((*vars)[i] == name) return i;
    throw Error("unknown coordinate: " + name);
}

bool same_chart(const VarsPtr& a, const VarsPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    return *a == *b;
}

bool GrlexLess::operator()(const Expo& a, const Expo& b) const {
    unsigned long da = 0, db = 0;
    for (auto e : a) da += e;
    for (auto e : b) db += e;
    if (da != db) return da < db;
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

MultiPoly MultiPoly::constant(VarsPtr vars, Rational c) {
    MultiPoly p(std::move(vars));
    if (!c.is_zero()) p.terms_.emplace(Expo(p.nvars(), 0), std::move(c));
    return p;
}

MultiPoly MultiPoly::var(const VarsPtr& vars, const std::string& name) {
    std::size_t i = var_index(vars, name);
    Expo e(vars->size(), 0);
    e[i] = 1;
    return monomial(vars, std::move(e), Rational(1));
}

MultiPoly MultiPoly::monomial(VarsPtr vars, Expo e, Rational c) {
    MultiPoly p(std::move(vars));
    if (e.size() != p.nvars()) throw Error("exponent vector length mismatch");
    if (!c.is_zero()) p.terms_.emplace(std::move(e), std::move(c));
    return p;
}

void MultiPoly::check_chart(const MultiPoly& o) const {
    if (!same_chart(vars_, o.vars_)) throw Error("coordinate chart mismatch");
}

bool MultiPoly::is_constant() const {
    if (terms_.empty()) return true;
    if (terms_.size() > 1) return false;
    const Expo& e = terms_.begin()->first;
    return std::all_of(e.begin(), e.end(), [](std::uint32_t x) { return x == 0; });
}

Rational MultiPoly::constant_value() const {
    if (terms_.empty()) return Rational(0);
    if (!is_constant()) throw Error("polynomial is not constant");
    return terms_.begin()->second;
}

int MultiPoly::total_degree() const {
    if (terms_.empty()) return -1;
    unsigned long d = 0;
    for (auto e : terms_.rbegin()->first) d += e;
    return static_cast<int>(d);
}

int MultiPoly::degree_in(std::size_t var) const {
    int d = -1;
    for (const auto& [e, c] : terms_) d = std::max(d, static_cast<int>(e[var]));
    return d;
}

bool MultiPoly::depends_on(std::size_t var) const {
    for (const auto& [e, c] : terms_)
        if (e[var] > 0) return true;
    return false;
}

const Rational& MultiPoly::leading_coeff() const {
    if (terms_.empty()) throw Error("zero polynomial has no leading term");
    return terms_.rbegin()->second;
}

const Expo& MultiPoly::leading_expo() const {
    if (terms_.empty()) throw Error("zero polynomial has no leading term");
    return terms_.rbegin()->first;
}

void MultiPoly::add_term(const Expo& e, const Rational& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        terms_.emplace(e, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

MultiPoly MultiPoly::operator-() const {
    MultiPoly r(vars_);
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
    return r;
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& o) {
    check_chart(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& o) {
    check_chart(o);
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
    a.check_chart(b);
    MultiPoly r(a.vars_);
    Expo e(a.nvars(), 0);
    for (const auto& [ea, ca] : a.terms_) {
        for (const auto& [eb, cb] : b.terms_) {
            for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
            r.add_term(e, ca * cb);
        }
    }
    return r;
}

MultiPoly MultiPoly::scaled(const Rational& c) const {
    MultiPoly r(vars_);
    if (c.is_zero()) return r;
    for (const auto& [e, t] : terms_) r.terms_.emplace(e, t * c);
    return r;
}

MultiPoly MultiPoly::pow(unsigned e) const {
    MultiPoly r = constant(vars_, Rational(1));
    MultiPoly b = *this;
    while (e > 0) {
        if (e & 1) r = r * b;
        b = b * b;
        e >>= 1;
    }
    return r;
}

bool operator==(const MultiPoly& a, const MultiPoly& b) {
    if (!same_chart(a.vars_, b.vars_)) return false;
    return a.terms_ == b.terms_;
}

MultiPoly MultiPoly::partial(std::size_t var) const {
    if (var >= nvars()) throw Error("unknown coordinate index");
    MultiPoly r(vars_);
    for (const auto& [e, c] : terms_) {
        if (e[var] == 0) continue;
        Expo d = e;
        d[var] -= 1;
        r.add_term(d, c * Rational(static_cast<long>(e[var])));
    }
    return r;
}

Rational MultiPoly::eval(const std::vector<Rational>& point) const {
    if (point.size() != nvars()) throw Error("evaluation point dimension mismatch");
    Rational acc(0);
    for (const auto& [e, c] : terms_) {
        Rational t = c;
        for (std::size_t i = 0; i < e.size(); ++i)
            if (e[i]) t *= point[i].pow(e[i]);
        acc += t;
    }
    return acc;
}

double MultiPoly::eval_d(const std::vector<double>& point) const {
    if (point.size() != nvars()) throw Error("evaluation point dimension mismatch");
    double acc = 0.0;
    for (const auto& [e, c] : terms_) {
        double t = c.to_double();
        for (std::size_t i = 0; i < e.size(); ++i)
            for (std::uint32_t k = 0; k < e[i]; ++k) t *= point[i];
        acc += t;
    }
    return acc;
}

std::string MultiPoly::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    // Descending graded-lex: leading term first.
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [e, c] = *it;
        Rational mag = c.abs();
        if (first) {
            if (c.sign() < 0) os << "-";
            first = false;
        } else {
            os << (c.sign() < 0 ? " - " : " + ");
        }
        bool any_var = std::any_of(e.begin(), e.end(), [](std::uint32_t x) { return x != 0; });
        bool coeff_shown = !mag.is_one() || !any_var;
        if (coeff_shown) os << mag.str();
        if (any_var) {
            bool first_var = true;
            for (std::size_t i = 0; i < e.size(); ++i) {
                if (e[i] == 0) continue;
                if (!first_var || coeff_shown) os << "*";
                os << (*vars_)[i];
                if (e[i] > 1) os << "^" << e[i];
                first_var = false;
            }
        }
    }
    return os.str();
}

std::optional<MultiPoly> try_exact_divide(const MultiPoly& a, const MultiPoly& b) {
    if (b.is_zero()) throw Error("division by zero polynomial");
    MultiPoly q(a.vars());
    if (a.is_zero()) return q;
    if (!same_chart(a.vars(), b.vars())) throw Error("coordinate chart mismatch");
    MultiPoly r = a;
    const Expo& eb = b.leading_expo();
    const Rational& cb = b.leading_coeff();
    Expo et(a.nvars(), 0);
    while (!r.is_zero()) {
        const Expo& er = r.leading_expo();
        for (std::size_t i = 0; i < et.size(); ++i) {
            if (er[i] < eb[i]) return std::nullopt;
            et[i] = er[i] - eb[i];
        }
        Rational ct = r.leading_coeff() / cb;
        MultiPoly t = MultiPoly::monomial(a.vars(), et, ct);
        q += t;
        r -= t * b;
    }
    return q;
}

namespace {

MultiPoly monic(const MultiPoly& p) {
    if (p.is_zero()) return p;
    return p.scaled(p.leading_coeff().inverse());
}

// Dense coefficient list of p viewed as univariate in variable k; the
// coefficients live in the same chart but are free of variable k.
std::vector<MultiPoly> coeffs_in_var(const MultiPoly& p, std::size_t k) {
    int d = p.degree_in(k);
    std::vector<MultiPoly> out(static_cast<std::size_t>(d + 1), MultiPoly(p.vars()));
    for (const auto& [e, c] : p.terms()) {
        Expo r = e;
        std::uint32_t deg = r[k];
        r[k] = 0;
        out[deg].add_term(r, c);
    }
    return out;
}

MultiPoly from_coeffs_in_var(const std::vector<MultiPoly>& cs, std::size_t k, const VarsPtr& vars) {
    MultiPoly p(vars);
    for (std::size_t d = 0; d < cs.size(); ++d) {
        for (const auto& [e, c] : cs[d].terms()) {
            Expo r = e;
            r[k] += static_cast<std::uint32_t>(d);
            p.add_term(r, c);
        }
    }
    return p;
}

int deg_of(const std::vector<MultiPoly>& cs) {
    for (int i = static_cast<int>(cs.size()) - 1; i >= 0; --i)
        if (!cs[static_cast<std::size_t>(i)].is_zero()) return i;
    return -1;
}

void trim(std::vector<MultiPoly>& cs) {
    while (!cs.empty() && cs.back().is_zero()) cs.pop_back();
}

MultiPoly exact_div(const MultiPoly& a, const MultiPoly& b) {
    auto q = try_exact_divide(a, b);
    if (!q) throw Error("exact polynomial division failed");
    return *q;
}

MultiPoly content_of(const std::vector<MultiPoly>& cs) {
    MultiPoly g(cs.empty() ? VarsPtr{} : cs.front().vars());
    bool started = false;
    for (const auto& c : cs) {
        if (c.is_zero()) continue;
        if (!started) {
            g = monic(c);
            started = true;
        } else {
            g = poly_gcd(g, c);
        }
        if (g.is_constant()) break;
    }
    return g;
}

std::vector<MultiPoly> divide_all(const std::vector<MultiPoly>& cs, const MultiPoly& d) {
    std::vector<MultiPoly> out;
    out.reserve(cs.size());
    for (const auto& c : cs) out.push_back(c.is_zero() ? c : exact_div(c, d));
    return out;
}

// Pseudo-remainder of F by G (univariate views in the same variable):
// lc(G)^(deg F - deg G + 1) * F reduced by G. Ring operations only.
std::vector<MultiPoly> prem(std::vector<MultiPoly> F, const std::vector<MultiPoly>& G) {
    int dF = deg_of(F), dG = deg_of(G);
    const MultiPoly& lcG = G[static_cast<std::size_t>(dG)];
    for (int i = dF; i >= dG; --i) {
        MultiPoly top = F[static_cast<std::size_t>(i)];
        for (auto& c : F) c = c * lcG;
        if (!top.is_zero()) {
            for (int j = 0; j <= dG; ++j) {
                std::size_t idx = static_cast<std::size_t>(i - dG + j);
                F[idx] -= top * G[static_cast<std::size_t>(j)];
            }
        }
    }
    F.erase(F.begin() + dG, F.end());
    trim(F);
    return F;
}

// Subresultant PRS gcd of two primitive univariate views. Returns the
// primitive gcd (a polynomial in the full chart, univariate in var k).
MultiPoly prs_gcd(std::vector<MultiPoly> F, std::vector<MultiPoly> G, std::size_t k, const VarsPtr& vars) {
    if (deg_of(F) < deg_of(G)) std::swap(F, G);
    MultiPoly one = MultiPoly::constant(vars, Rational(1));
    MultiPoly g = one, h = one;
    for (;;) {
        int dF = deg_of(F), dG = deg_of(G);
        if (dG <= 0) return one; // coprime after content removal
        int delta = dF - dG;
        std::vector<MultiPoly> R = prem(F, G);
        if (deg_of(R) < 0) {
            MultiPoly cand = from_coeffs_in_var(G, k, vars);
            return exact_div(cand, content_of(G));
        }
        F = std::move(G);
        MultiPoly divisor = g;
        for (int i = 0; i < delta; ++i) divisor = divisor * h;
        G = divide_all(R, divisor);
        g = F[static_cast<std::size_t>(deg_of(F))];
        if (delta == 1) {
            h = g;
        } else if (delta > 1) {
            MultiPoly gd = g;
            for (int i = 1; i < delta; ++i) gd = gd * g;
            MultiPoly hd = h;
            for (int i = 2; i < delta; ++i) hd = hd * h;
            h = delta >= 2 ? exact_div(gd, hd) : gd;
        }
    }
}

} // namespace

MultiPoly poly_gcd(const MultiPoly& a, const MultiPoly& b) {
    if (!same_chart(a.vars(), b.vars())) throw Error("coordinate chart mismatch");
    if (a.is_zero()) return monic(b);
    if (b.is_zero()) return monic(a);
    if (a.is_constant() || b.is_constant()) return MultiPoly::constant(a.vars(), Rational(1));

    std::size_t k = 0;
    while (!a.depends_on(k) && !b.depends_on(k)) ++k;

    auto A = coeffs_in_var(a, k);
    auto B = coeffs_in_var(b, k);
    MultiPoly contA = content_of(A);
    MultiPoly contB = content_of(B);
    auto ppA = divide_all(A, contA);
    auto ppB = divide_all(B, contB);
    MultiPoly cont = poly_gcd(contA, contB);
    MultiPoly pp = prs_gcd(std::move(ppA), std::move(ppB), k, a.vars());
    return monic(cont * pp);
}

} // namespace starpde
