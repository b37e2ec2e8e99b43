#include <algorithm>
#include <cctype>
#include <set>

#include "tauvar/cli.hpp"

namespace tauvar::cli {

namespace {

std::string join(const std::vector<std::string>& v, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
    return out;
}

}  // namespace

ParseError::ParseError(Pos pos, const std::string& message, std::vector<std::string> expected)
    : Error(std::to_string(pos.line) + ":" + std::to_string(pos.col) + ": " + message), pos_(pos), message_(message) {
    std::sort(expected.begin(), expected.end());
    expected.erase(std::unique(expected.begin(), expected.end()), expected.end());
    expected_ = std::move(expected);
}

std::string describe(const ParseError& e) {
    std::string out = e.what();
    if (!e.expected().empty()) out += "; expected one of: " + join(e.expected(), " ");
    return out;
}

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names = {
        "diag",   "hermite", "radical",   "zeros",    "annihilator", "dim",           "tangent", "image",
        "kernel", "preimage", "sum",      "intersect", "quotient",   "separable",     "torsion", "torsionpoints",
        "rank",   "tate",    "jacobian", "gmax",     "axioms"};
    return names;
}

namespace {

const std::set<std::string>& reserved() {
    static const std::set<std::string> r = [] {
        std::set<std::string> s = {"t", "T", "g", "w", "S", "Z", "points", "map", "amodule", "let", "field"};
        for (const auto& c : command_names()) s.insert(c);
        return s;
    }();
    return r;
}

struct Token {
    enum class Kind { Int, Ident, Punct, End };
    Kind kind = Kind::End;
    std::string text;
    long long value = 0;
    Pos pos;
};

std::vector<Token> lex(const std::string& src) {
    std::vector<Token> out;
    Pos pos;
    std::size_t i = 0;
    const auto advance = [&] {
        if (src[i] == '\n') {
            ++pos.line;
            pos.col = 1;
        } else {
            ++pos.col;
        }
        ++i;
    };
    while (i < src.size()) {
        const char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance();
            continue;
        }
        if (c == '#') {
            while (i < src.size() && src[i] != '\n') advance();
            continue;
        }
        Token tok;
        tok.pos = pos;
        if (std::isdigit(static_cast<unsigned char>(c))) {
            tok.kind = Token::Kind::Int;
            while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) {
                tok.text += src[i];
                advance();
            }
            if (tok.text.size() > 18) throw ParseError(tok.pos, "integer literal too large");
            tok.value = std::stoll(tok.text);
        } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            tok.kind = Token::Kind::Ident;
            while (i < src.size() && (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_')) {
                tok.text += src[i];
                advance();
            }
        } else if (std::string("[](){},;=+-*/^").find(c) != std::string::npos) {
            tok.kind = Token::Kind::Punct;
            tok.text = std::string(1, c);
            advance();
        } else {
            throw ParseError(pos, std::string("unexpected character '") + c + "'");
        }
        out.push_back(std::move(tok));
    }
    Token end;
    end.pos = pos;
    out.push_back(end);
    return out;
}

std::string show(const Token& t) {
    switch (t.kind) {
        case Token::Kind::End: return "end of input";
        case Token::Kind::Int: return "integer " + t.text;
        default: return "'" + t.text + "'";
    }
}

const std::vector<std::string> kPrimaryStart = {"integer", "name", "(", "-", "[", "t", "T", "g", "w", "S{", "Z{",
                                                "points{", "map{", "amodule{"};

class Parser {
   public:
    explicit Parser(const std::string& text) : toks_(lex(text)) {}

    Expr single() {
        Expr e = expr();
        if (!at_end()) fail("unexpected trailing input", {"end of input"});
        return e;
    }

    Script script() {
        Script s;
        if (at_end()) return s;
        s.field = field_decl();
        while (!at_end()) {
            if (is_ident("let")) {
                Statement st;
                st.let = let();
                s.statements.push_back(std::move(st));
            } else if (peek().kind == Token::Kind::Ident &&
                       std::find(command_names().begin(), command_names().end(), peek().text) !=
                           command_names().end()) {
                Statement st;
                st.command = command();
                s.statements.push_back(std::move(st));
            } else {
                std::vector<std::string> exp = command_names();
                exp.push_back("let");
                fail("expected a declaration or a command", exp);
            }
        }
        return s;
    }

   private:
    const Token& peek(std::size_t k = 0) const { return toks_[std::min(i_ + k, toks_.size() - 1)]; }
    bool at_end() const { return peek().kind == Token::Kind::End; }
    bool is_punct(const char* p, std::size_t k = 0) const {
        return peek(k).kind == Token::Kind::Punct && peek(k).text == p;
    }
    bool is_ident(const char* s, std::size_t k = 0) const {
        return peek(k).kind == Token::Kind::Ident && peek(k).text == s;
    }
    Token take() { return toks_[std::min(i_++, toks_.size() - 1)]; }

    [[noreturn]] void fail(const std::string& what, std::vector<std::string> expected) const {
        throw ParseError(peek().pos, what + ", found " + show(peek()), std::move(expected));
    }
    Token expect_punct(const char* p) {
        if (!is_punct(p)) fail(std::string("expected '") + p + "'", {p});
        return take();
    }
    void expect_ident(const char* s) {
        if (!is_ident(s)) fail(std::string("expected '") + s + "'", {s});
        take();
    }
    long long expect_int() {
        if (peek().kind != Token::Kind::Int) fail("expected an integer", {"integer"});
        return take().value;
    }

    FieldDecl field_decl() {
        FieldDecl d;
        expect_ident("field");
        expect_ident("q");
        expect_punct("=");
        d.q = static_cast<std::uint32_t>(expect_int());
        if (is_ident("ext")) {
            take();
            expect_ident("m");
            expect_punct("=");
            d.m = static_cast<unsigned>(expect_int());
        }
        if (is_ident("func")) {
            take();
            d.func = true;
        }
        if (is_ident("perfect")) {
            take();
            d.perfect = true;
        }
        if (!is_punct(";")) {
            std::vector<std::string> exp = {";"};
            if (!d.perfect) exp.push_back("perfect");
            if (!d.perfect && !d.func) exp.push_back("func");
            if (!d.perfect && !d.func && d.m == 1) exp.push_back("ext");
            fail("expected ';' after the field declaration", exp);
        }
        take();
        return d;
    }

    Let let() {
        Let l;
        l.pos = peek().pos;
        expect_ident("let");
        if (peek().kind != Token::Kind::Ident) fail("expected a name", {"name"});
        const Token name = take();
        if (reserved().count(name.text)) throw ParseError(name.pos, "'" + name.text + "' is reserved");
        if (bound_.count(name.text)) throw ParseError(name.pos, "name already bound: " + name.text);
        l.name = name.text;
        expect_punct("=");
        l.value = expr();
        expect_punct(";");
        bound_.insert(l.name);
        return l;
    }

    Command command() {
        Command c;
        c.pos = peek().pos;
        c.name = take().text;
        while (!is_punct(";")) {
            if (at_end()) return c;  // the last command may omit ';'

            if (peek().kind == Token::Kind::Ident && is_punct("=", 1) && !reserved().count(peek().text)) {
                c.keys.push_back(take().text);
                take();
                c.kwargs.push_back(expr());
            } else {
                c.args.push_back(expr());
            }
        }
        take();
        return c;
    }

    Expr node(Expr::Kind k, Pos pos) const {
        Expr e;
        e.kind = k;
        e.pos = pos;
        return e;
    }

    Expr expr() {
        Expr lhs = term();
        while (is_punct("+") || is_punct("-")) {
            const Token op = take();
            Expr e = node(op.text == "+" ? Expr::Kind::Add : Expr::Kind::Sub, op.pos);
            e.args.push_back(std::move(lhs));
            e.args.push_back(term());
            lhs = std::move(e);
        }
        return lhs;
    }

    Expr term() {
        Expr lhs = unary();
        while (is_punct("*") || is_punct("/")) {
            const Token op = take();
            Expr e = node(op.text == "*" ? Expr::Kind::Mul : Expr::Kind::Div, op.pos);
            e.args.push_back(std::move(lhs));
            e.args.push_back(unary());
            lhs = std::move(e);
        }
        return lhs;
    }

    Expr unary() {
        if (is_punct("-")) {
            const Token op = take();
            Expr e = node(Expr::Kind::Neg, op.pos);
            e.args.push_back(unary());
            return e;
        }
        Expr base = primary();
        if (is_punct("^")) {
            const Token op = take();
            Expr e = node(Expr::Kind::Pow, op.pos);
            bool neg = false;
            if (is_punct("-")) {
                take();
                neg = true;
            }
            e.value = neg ? -expect_int() : expect_int();
            e.args.push_back(std::move(base));
            return e;
        }
        return base;
    }

    Expr braced_open(Expr::Kind k) {
        Expr e = node(k, take().pos);
        expect_punct("{");
        return e;
    }

    Expr primary() {
        const Token& tok = peek();
        if (tok.kind == Token::Kind::Int) {
            Expr e = node(Expr::Kind::Int, tok.pos);
            e.value = take().value;
            return e;
        }
        if (is_punct("(")) {
            take();
            Expr e = expr();
            expect_punct(")");
            return e;
        }
        if (is_punct("[")) return matrix();
        if (tok.kind != Token::Kind::Ident) fail("expected an expression", kPrimaryStart);
        const std::string& s = tok.text;
        if (s == "t" || s == "T" || s == "g" || s == "w") {
            Expr e = node(Expr::Kind::Symbol, tok.pos);
            e.text = take().text;
            return e;
        }
        if (s == "S") {
            Expr e = braced_open(Expr::Kind::Root);
            e.value = expect_int();
            expect_punct("}");
            return e;
        }
        if (s == "Z") {
            Expr e = braced_open(Expr::Kind::Zeros);
            e.args.push_back(expr());
            expect_punct("}");
            return e;
        }
        if (s == "points") {
            Expr e = braced_open(Expr::Kind::Points);
            while (true) {
                e.args.push_back(tuple());
                if (!is_punct(",")) break;
                take();
            }
            expect_punct("}");
            return e;
        }
        if (s == "map") {
            Expr e = braced_open(Expr::Kind::Map);
            e.args.push_back(expr());
            expect_punct(",");
            e.args.push_back(expr());
            expect_punct(",");
            e.args.push_back(expr());
            expect_punct("}");
            return e;
        }
        if (s == "amodule") return amodule();
        if (reserved().count(s)) fail("'" + s + "' cannot start an expression", kPrimaryStart);
        if (!bound_.count(s)) throw ParseError(tok.pos, "unknown name: " + s);
        Expr e = node(Expr::Kind::Name, tok.pos);
        e.text = take().text;
        return e;
    }

    Expr tuple() {
        Expr e = node(Expr::Kind::Tuple, peek().pos);
        expect_punct("(");
        while (true) {
            e.args.push_back(expr());
            if (!is_punct(",")) break;
            take();
        }
        expect_punct(")");
        return e;
    }

    Expr matrix() {
        Expr m = node(Expr::Kind::Matrix, expect_punct("[").pos);
        while (true) {
            Expr row = node(Expr::Kind::Row, expect_punct("[").pos);
            while (true) {
                row.args.push_back(expr());
                if (!is_punct(",")) break;
                take();
            }
            if (!is_punct("]")) fail("expected ',' or ']' in a matrix row", {",", "]"});
            take();
            if (!m.args.empty() && row.args.size() != m.args.front().args.size())
                throw ParseError(row.pos, "ragged matrix: rows have different lengths");
            m.args.push_back(std::move(row));
            if (!is_punct(",")) break;
            take();
        }
        if (!is_punct("]")) fail("expected ',' or ']' after a matrix row", {",", "]"});
        take();
        return m;
    }

    Expr amodule() {
        Expr e = braced_open(Expr::Kind::AModule);
        static const std::vector<std::string> fields = {"q", "delta", "PhiT", "carrier"};
        while (true) {
            if (peek().kind != Token::Kind::Ident ||
                std::find(fields.begin(), fields.end(), peek().text) == fields.end())
                fail("expected an amodule field", fields);
            const Token key = take();
            if (std::find(e.keys.begin(), e.keys.end(), key.text) != e.keys.end())
                throw ParseError(key.pos, "duplicate amodule field: " + key.text);
            expect_punct("=");
            e.keys.push_back(key.text);
            e.args.push_back(expr());
            if (!is_punct(";")) break;
            take();
            if (is_punct("}")) break;
        }
        expect_punct("}");
        for (const char* required : {"delta", "PhiT"})
            if (std::find(e.keys.begin(), e.keys.end(), required) == e.keys.end())
                throw ParseError(e.pos, std::string("amodule needs ") + required);
        return e;
    }

    std::vector<Token> toks_;
    std::size_t i_ = 0;
    std::set<std::string> bound_;
};

int precedence(const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::Add:
        case Expr::Kind::Sub: return 1;
        case Expr::Kind::Mul:
        case Expr::Kind::Div: return 2;
        case Expr::Kind::Neg: return 3;
        case Expr::Kind::Pow: return 4;
        default: return 5;
    }
}

std::string wrap_if(const Expr& e, int below) {
    const std::string s = render(e);
    return precedence(e) < below ? "(" + s + ")" : s;
}

}  // namespace

Script parse(const std::string& text) { return Parser(text).script(); }

Expr parse_expression(const std::string& text) { return Parser(text).single(); }

std::string render(const FieldDecl& d) {
    std::string s = "field q=" + std::to_string(d.q);
    if (d.m != 1) s += " ext m=" + std::to_string(d.m);
    if (d.func) s += " func";
    if (d.perfect) s += " perfect";
    return s + ";";
}

std::string render(const Expr& e) {
    using K = Expr::Kind;
    switch (e.kind) {
        case K::Int: return std::to_string(e.value);
        case K::Symbol:
        case K::Name: return e.text;
        case K::Root: return "S{" + std::to_string(e.value) + "}";
        case K::Neg: return "-" + wrap_if(e.args[0], 3);
        case K::Add: return render(e.args[0]) + " + " + wrap_if(e.args[1], 2);
        case K::Sub: return render(e.args[0]) + " - " + wrap_if(e.args[1], 2);
        case K::Mul: return wrap_if(e.args[0], 2) + "*" + wrap_if(e.args[1], 3);
        case K::Div: return wrap_if(e.args[0], 2) + "/" + wrap_if(e.args[1], 3);
        case K::Pow: return wrap_if(e.args[0], 5) + "^" + std::to_string(e.value);
        case K::Row:
        case K::Tuple: {
            std::vector<std::string> parts;
            for (const auto& a : e.args) parts.push_back(render(a));
            return (e.kind == K::Row ? "[" : "(") + join(parts, ", ") + (e.kind == K::Row ? "]" : ")");
        }
        case K::Matrix: {
            std::vector<std::string> parts;
            for (const auto& a : e.args) parts.push_back(render(a));
            return "[" + join(parts, ", ") + "]";
        }
        case K::Zeros: return "Z{" + render(e.args[0]) + "}";
        case K::Points: {
            std::vector<std::string> parts;
            for (const auto& a : e.args) parts.push_back(render(a));
            return "points{" + join(parts, ", ") + "}";
        }
        case K::Map: return "map{" + render(e.args[0]) + ", " + render(e.args[1]) + ", " + render(e.args[2]) + "}";
        case K::AModule: {
            std::vector<std::string> parts;
            for (std::size_t i = 0; i < e.args.size(); ++i) parts.push_back(e.keys[i] + "=" + render(e.args[i]));
            return "amodule{" + join(parts, "; ") + "}";
        }
    }
    return "";
}

std::string render(const Command& c) {
    std::string s = c.name;
    for (const auto& a : c.args) s += " " + render(a);
    for (std::size_t i = 0; i < c.keys.size(); ++i) s += " " + c.keys[i] + "=" + render(c.kwargs[i]);
    return s + ";";
}

std::string render(const OrePoly& p) { return p.to_string(); }

std::string render(const OreMatrix& m) {
    if (m.rows() == 0) {
        // no equations: a zero row keeps the width
        return render(OreMatrix(m.field(), 1, m.cols()));
    }
    return m.to_string();
}

std::string render(const QVariety& v) {
    const auto basis = v.ann().basis();
    return "Z{" + render(basis.empty() ? OreMatrix(v.field(), 1, v.n()) : OreMatrix(v.field(), v.n(), basis)) + "}";
}

std::string render(const AModule& m) {
    return "amodule{q=" + std::to_string(m.field()->q()) + "; delta=" + m.delta_T().to_string() +
           "; PhiT=" + render(m.phi_T().L) + "; carrier=" + render(m.carrier()) + "}";
}

FieldPtr make_field(const FieldDecl& d) {
    if (d.func || d.perfect) {
        if (d.m != 1) throw DomainError("ext m is only available for finite fields");
        return d.perfect ? Field::perfect_closure(d.q) : Field::rational_functions(d.q);
    }
    return Field::extension(d.q, d.m);
}

}  // namespace tauvar::cli
