#include "starpde/parser.hpp"

#include <cctype>
#include <sstream>

namespace starpde {

namespace {

struct Token {
    enum class Kind { Ident, Int, Punct, End };
    Kind kind = Kind::End;
    std::string text;
    int line = 1, col = 1;
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : s_(text) { advance(); }

    const Token& peek() const { return tok_; }

    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

    [[noreturn]] void fail(const std::string& msg) const { fail_at(tok_.line, tok_.col, msg); }

    [[noreturn]] static void fail_at(int line, int col, const std::string& msg) {
        std::ostringstream os;
        os << "syntax error at line " << line << ", column " << col << ": " << msg;
        throw Error(os.str());
    }

private:
    std::string s_;
    std::size_t pos_ = 0;
    int line_ = 1, col_ = 1;
    Token tok_;

    int cur() const { return pos_ < s_.size() ? static_cast<unsigned char>(s_[pos_]) : -1; }

    void bump() {
        if (cur() == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void advance() {
        for (;;) {
            while (std::isspace(cur())) bump();
            if (cur() == '#') {
                while (cur() != -1 && cur() != '\n') bump();
                continue;
            }
            break;
        }
        tok_.line = line_;
        tok_.col = col_;
        if (cur() == -1) {
            tok_ = Token{Token::Kind::End, "", line_, col_};
            return;
        }
        if (std::isalpha(cur()) || cur() == '_') {
            std::string text;
            while (std::isalnum(cur()) || cur() == '_') {
                text.push_back(static_cast<char>(cur()));
                bump();
            }
            tok_ = Token{Token::Kind::Ident, std::move(text), tok_.line, tok_.col};
            return;
        }
        if (std::isdigit(cur())) {
            std::string text;
            while (std::isdigit(cur())) {
                text.push_back(static_cast<char>(cur()));
                bump();
            }
            tok_ = Token{Token::Kind::Int, std::move(text), tok_.line, tok_.col};
            return;
        }
        static const std::string punct = "+-*/^(),:;[]=";
        if (punct.find(static_cast<char>(cur())) != std::string::npos) {
            tok_ = Token{Token::Kind::Punct, std::string(1, static_cast<char>(cur())), tok_.line,
                         tok_.col};
            bump();
            return;
        }
        tok_ = Token{Token::Kind::Punct, std::string(1, static_cast<char>(cur())), tok_.line,
                     tok_.col};
        fail("unexpected character '" + tok_.text + "'");
    }
};

class ExprParser {
public:
    ExprParser(Lexer& lex, const VarsPtr& coords) : lex_(lex), coords_(coords) {}

    MuPoly parse() { return expr(); }

private:
    Lexer& lex_;
    VarsPtr coords_;

    bool punct(const char* p) const {
        return lex_.peek().kind == Token::Kind::Punct && lex_.peek().text == p;
    }

    MuPoly expr() {
        MuPoly acc = term();
        for (;;) {
            if (punct("+")) {
                lex_.take();
                acc += term();
            } else if (punct("-")) {
                lex_.take();
                acc -= term();
            } else {
                return acc;
            }
        }
    }

    MuPoly term() {
        MuPoly acc = factor();
        for (;;) {
            if (punct("*")) {
                lex_.take();
                acc = acc * factor();
            } else if (punct("/")) {
                lex_.take();
                MuPoly d = factor();
                if (d.degree() > 0) lex_.fail("cannot divide by a mu-dependent expression");
                if (d.is_zero()) lex_.fail("division by zero");
                acc = acc.scaled(d.coeff(0).inverse());
            } else {
                return acc;
            }
        }
    }

    MuPoly factor() {
        if (punct("-")) {
            lex_.take();
            return -factor();
        }
        return power();
    }

    MuPoly power() {
        MuPoly base = atom();
        if (!punct("^")) return base;
        lex_.take();
        if (lex_.peek().kind != Token::Kind::Int) lex_.fail("exponent must be a natural number");
        unsigned long e = std::stoul(lex_.take().text);
        MuPoly acc = MuPoly::one(coords_);
        for (unsigned long i = 0; i < e; ++i) acc = acc * base;
        return acc;
    }

    MuPoly atom() {
        const Token& t = lex_.peek();
        if (t.kind == Token::Kind::Int) {
            long v = std::stol(lex_.take().text);
            return MuPoly(RationalFunction::constant(coords_, Rational(v)));
        }
        if (t.kind == Token::Kind::Ident) {
            Token id = lex_.take();
            if (id.text == "mu") return MuPoly::mu(coords_);
            for (const auto& name : *coords_)
                if (name == id.text) return MuPoly(RationalFunction::var(coords_, name));
            Lexer::fail_at(id.line, id.col, "unknown identifier '" + id.text + "'");
        }
        if (punct("(")) {
            lex_.take();
            MuPoly inner = expr();
            if (!punct(")")) lex_.fail("expected ')'");
            lex_.take();
            return inner;
        }
        lex_.fail("expected a value");
    }
};

MuPoly parse_expr_tokens(Lexer& lex, const VarsPtr& coords) {
    return ExprParser(lex, coords).parse();
}

} // namespace

MuPoly parse_mu_expression(const std::string& text, const VarsPtr& coords) {
    Lexer lex(text);
    MuPoly p = parse_expr_tokens(lex, coords);
    if (lex.peek().kind != Token::Kind::End) lex.fail("trailing input after expression");
    return p;
}

RationalFunction parse_rf_expression(const std::string& text, const VarsPtr& coords) {
    MuPoly p = parse_mu_expression(text, coords);
    if (p.degree() > 0) throw Error("mu in a coefficient position");
    return p.coeff(0);
}

SystemDocument parse_system(const std::string& text) {
    Lexer lex(text);
    auto expect_punct = [&](const char* p) {
        if (lex.peek().kind != Token::Kind::Punct || lex.peek().text != p)
            lex.fail(std::string("expected '") + p + "'");
        lex.take();
    };
    auto expect_ident = [&](const char* what) {
        if (lex.peek().kind != Token::Kind::Ident) lex.fail(std::string("expected ") + what);
        return lex.take().text;
    };

    std::string name;
    if (lex.peek().kind == Token::Kind::Ident && lex.peek().text == "system") {
        lex.take();
        name = expect_ident("a system name");
        expect_punct(";");
    }

    if (!(lex.peek().kind == Token::Kind::Ident && lex.peek().text == "coords"))
        lex.fail("expected 'coords'");
    lex.take();
    expect_punct(":");
    std::vector<std::string> names;
    names.push_back(expect_ident("a coordinate name"));
    while (lex.peek().kind == Token::Kind::Punct && lex.peek().text == ",") {
        lex.take();
        names.push_back(expect_ident("a coordinate name"));
    }
    expect_punct(";");
    for (const auto& n : names)
        if (n == "mu") throw Error("'mu' is reserved and cannot be a coordinate");
    VarsPtr coords = make_vars(names);

    if (!(lex.peek().kind == Token::Kind::Ident && lex.peek().text == "Z"))
        lex.fail("expected 'Z'");
    lex.take();
    expect_punct(":");
    MuPoly zp = parse_expr_tokens(lex, coords);
    expect_punct(";");
    if (zp.degree() < 1) throw Error("Z must have degree at least 1");
    if (!(zp.coeff(static_cast<std::size_t>(zp.degree())) == RationalFunction::one(coords)))
        throw Error("Z must be monic");
    std::vector<RationalFunction> lower;
    for (int i = 0; i < zp.degree(); ++i) lower.push_back(zp.coeff(static_cast<std::size_t>(i)));
    MonicZ z(coords, std::move(lower));

    const std::size_t n = coords->size();
    std::vector<std::optional<Mat<RationalFunction>>> mats;
    bool any = false;
    while (lex.peek().kind == Token::Kind::Ident && lex.peek().text.size() > 1 &&
           lex.peek().text[0] == 'A') {
        Token head = lex.take();
        std::string digits = head.text.substr(1);
        for (char c : digits)
            if (!std::isdigit(static_cast<unsigned char>(c))) lex.fail("expected 'A<degree>'");
        std::size_t degree = std::stoul(digits);
        expect_punct(":");
        expect_punct("[");
        Mat<RationalFunction> mat(n, n, RationalFunction::zero(coords));
        for (std::size_t r = 0; r < n; ++r) {
            expect_punct("[");
            for (std::size_t c = 0; c < n; ++c) {
                MuPoly e = parse_expr_tokens(lex, coords);
                if (e.degree() > 0) throw Error("mu in a coefficient position");
                mat.at(r, c) = e.coeff(0);
                if (c + 1 < n) expect_punct(",");
            }
            expect_punct("]");
            if (r + 1 < n) expect_punct(",");
        }
        expect_punct("]");
        expect_punct(";");
        if (degree >= mats.size()) mats.resize(degree + 1);
        if (mats[degree]) throw Error("duplicate matrix A" + std::to_string(degree));
        mats[degree] = std::move(mat);
        any = true;
    }
    if (!any) lex.fail("expected at least one 'A<degree>' block");
    if (lex.peek().kind != Token::Kind::End) lex.fail("trailing input after system document");

    std::vector<Mat<RationalFunction>> tensor;
    for (auto& slot : mats)
        tensor.push_back(slot ? std::move(*slot)
                              : Mat<RationalFunction>(n, n, RationalFunction::zero(coords)));
    return SystemDocument{std::move(name),
                          SystemSpec(coords, std::move(z), TensorPoly(n, std::move(tensor)))};
}

std::string print_system(const SystemSpec& sys, const std::string& name) {
    std::ostringstream os;
    if (!name.empty()) os << "system " << name << ";\n";
    os << "coords: ";
    for (std::size_t i = 0; i < sys.n(); ++i) {
        if (i) os << ", ";
        os << (*sys.coords())[i];
    }
    os << ";\n";
    os << "Z: " << sys.z().as_mu_poly().str() << ";\n";
    for (std::size_t d = 0; d <= sys.k(); ++d) {
        os << "A" << d << ": [";
        for (std::size_t r = 0; r < sys.n(); ++r) {
            if (r) os << ", ";
            os << "[";
            for (std::size_t c = 0; c < sys.n(); ++c) {
                if (c) os << ", ";
                os << sys.a().mat(d).at(r, c).str();
            }
            os << "]";
        }
        os << "];\n";
    }
    return os.str();
}

std::string print_solution(const SolutionVec& v) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) os << ", ";
        os << v[i].str();
    }
    os << ")";
    return os.str();
}

} // namespace starpde
