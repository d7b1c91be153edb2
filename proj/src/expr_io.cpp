#include "hce/expr_io.hpp"

#include <cctype>

namespace hce {

// ---------------------------------------------------------------------------
// printing
// ---------------------------------------------------------------------------

namespace {

void print_expr(std::string& out, const Expr& e);

bool term_negative(const Expr& t) {
    const ENode& n = t.node();
    if (n.kind == ExprKind::Rat) return n.rat < 0;
    if (n.kind == ExprKind::Mul && n.kids[0].kind() == ExprKind::Rat)
        return n.kids[0].node().rat < 0;
    return false;
}

// prints |t| (the term with its rational coefficient made positive)
void print_term_abs(std::string& out, const Expr& t) {
    const ENode& n = t.node();
    if (n.kind == ExprKind::Rat) {
        out += to_string(abs(n.rat));
        return;
    }
    if (n.kind == ExprKind::Mul && n.kids[0].kind() == ExprKind::Rat) {
        Rational c = abs(n.kids[0].node().rat);
        std::vector<Expr> rest(n.kids.begin() + 1, n.kids.end());
        if (c != 1) {
            out += to_string(c);
            out += "*";
        }
        for (std::size_t i = 0; i < rest.size(); ++i) {
            if (i) out += "*";
            print_expr(out, rest[i]);
        }
        return;
    }
    print_expr(out, t);
}

void print_factor(std::string& out, const Expr& f) {
    if (f.kind() == ExprKind::Add) {
        out += "(";
        print_expr(out, f);
        out += ")";
    } else {
        print_expr(out, f);
    }
}

void print_expr(std::string& out, const Expr& e) {
    const ENode& n = e.node();
    switch (n.kind) {
        case ExprKind::Rat:
            if (n.rat < 0) {
                out += "-";
                out += to_string(abs(n.rat));
            } else {
                out += to_string(n.rat);
            }
            return;
        case ExprKind::Sym:
            out += syms().name(n.sym);
            return;
        case ExprKind::Add: {
            for (std::size_t i = 0; i < n.kids.size(); ++i) {
                if (i == 0) {
                    if (term_negative(n.kids[i])) out += "-";
                } else {
                    out += term_negative(n.kids[i]) ? " - " : " + ";
                }
                print_term_abs(out, n.kids[i]);
            }
            return;
        }
        case ExprKind::Mul: {
            if (term_negative(e)) {
                out += "-";
                print_term_abs(out, e);
                return;
            }
            for (std::size_t i = 0; i < n.kids.size(); ++i) {
                if (i) out += "*";
                print_factor(out, n.kids[i]);
            }
            return;
        }
        case ExprKind::Pow: {
            print_factor(out, n.kids[0]);
            out += "^";
            out += std::to_string(n.expo);
            return;
        }
        case ExprKind::Exp: {
            out += "exp(";
            print_expr(out, n.kids[0]);
            out += ")";
            return;
        }
        case ExprKind::Log: {
            out += "ln(";
            print_expr(out, n.kids[0]);
            out += ")";
            return;
        }
        case ExprKind::App: {
            out += syms().finfo(n.fn).name;
            out += "(";
            for (std::size_t i = 0; i < n.kids.size(); ++i) {
                if (i) out += ", ";
                print_expr(out, n.kids[i]);
            }
            out += ")";
            return;
        }
    }
}

} // namespace

std::string to_text(const Expr& e) {
    std::string out;
    print_expr(out, e);
    return out;
}

// ---------------------------------------------------------------------------
// parsing
// ---------------------------------------------------------------------------

namespace {

struct Parser {
    std::string_view s;
    std::size_t pos = 0;

    void skip() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool eat(char c) {
        skip();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    char peek() {
        skip();
        return pos < s.size() ? s[pos] : '\0';
    }
    [[noreturn]] void fail(const std::string& msg) {
        throw ParseError(msg + " at offset " + std::to_string(pos));
    }

    Expr parse() {
        Expr e = expr();
        skip();
        if (pos != s.size()) fail("trailing input");
        return e;
    }

    Expr expr() {
        Expr acc = term();
        for (;;) {
            if (eat('+'))
                acc = acc + term();
            else if (eat('-'))
                acc = acc - term();
            else
                return acc;
        }
    }

    Expr term() {
        Expr acc = unary();
        for (;;) {
            if (eat('*'))
                acc = acc * unary();
            else if (eat('/'))
                acc = acc * pow(unary(), -1);
            else
                return acc;
        }
    }

    Expr unary() {
        if (eat('-')) return -unary();
        return power();
    }

    Expr power() {
        Expr base = primary();
        if (eat('^')) {
            bool neg = eat('-');
            skip();
            if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos])))
                fail("expected integer exponent");
            long k = 0;
            while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
                k = k * 10 + (s[pos++] - '0');
            return pow(base, neg ? -k : k);
        }
        return base;
    }

    Expr primary() {
        skip();
        if (pos >= s.size()) fail("unexpected end of input");
        char c = s[pos];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos;
            while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
            return num(parse_rational(s.substr(start, pos - start)));
        }
        if (c == '(') {
            ++pos;
            Expr e = expr();
            if (!eat(')')) fail("expected ')'");
            return e;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos;
            while (pos < s.size() &&
                   (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
                ++pos;
            while (pos < s.size() && s[pos] == '\'') ++pos;
            std::string name(s.substr(start, pos - start));
            if (peek() == '(') {
                ++pos;
                std::vector<Expr> args;
                if (peek() != ')') {
                    args.push_back(expr());
                    while (eat(',')) args.push_back(expr());
                }
                if (!eat(')')) fail("expected ')'");
                if (name == "exp") {
                    if (args.size() != 1) fail("exp takes one argument");
                    return exp_(args[0]);
                }
                if (name == "ln") {
                    if (args.size() != 1) fail("ln takes one argument");
                    return log_(args[0]);
                }
                if (!syms().has_func(name)) fail("unknown function '" + name + "'");
                return app(syms().lookup_func(name), args);
            }
            if (!syms().has_symbol(name)) fail("unknown symbol '" + name + "'");
            return sym(syms().lookup(name));
        }
        fail(std::string("unexpected character '") + c + "'");
    }
};

} // namespace

Expr parse_expr(std::string_view text) {
    Parser p{text};
    return p.parse();
}

// ---------------------------------------------------------------------------
// LaTeX
// ---------------------------------------------------------------------------

namespace {

std::string latex_name(const std::string& n) {
    // alpha3 -> \alpha_3, beta1 -> \beta_1, u_tx -> u_{tx}, Phi -> \Phi
    auto greek = [&](const std::string& stem,
                     const std::string& tex) -> std::optional<std::string> {
        if (n.rfind(stem, 0) == 0) {
            std::string rest = n.substr(stem.size());
            if (rest.empty()) return tex;
            bool digits = !rest.empty();
            for (char c : rest) digits = digits && std::isdigit(static_cast<unsigned char>(c));
            if (digits) return tex + "_{" + rest + "}";
            if (rest[0] == '\'' ) return tex + rest;
            if (rest[0] == '_') return tex + "_{" + rest.substr(1) + "}";
        }
        return std::nullopt;
    };
    for (auto& [stem, tex] : std::initializer_list<std::pair<std::string, std::string>>{
             {"alpha", "\\alpha"},
             {"beta", "\\beta"},
             {"lambda", "\\lambda"},
             {"Phi", "\\Phi"},
             {"Psi", "\\Psi"},
             {"xi", "\\xi"},
             {"tau", "\\tau"},
             {"chi", "\\chi"},
             {"eta", "\\eta"},
             {"phi", "\\varphi"}})
        if (auto r = greek(stem, tex)) return *r;
    if (auto p = n.find('_'); p != std::string::npos)
        return n.substr(0, p) + "_{" + n.substr(p + 1) + "}";
    return n;
}

void latex_expr(std::string& out, const Expr& e);

void latex_factor(std::string& out, const Expr& f) {
    if (f.kind() == ExprKind::Add) {
        out += "\\left(";
        latex_expr(out, f);
        out += "\\right)";
    } else {
        latex_expr(out, f);
    }
}

bool latex_term_negative(const Expr& t) {
    const ENode& n = t.node();
    if (n.kind == ExprKind::Rat) return n.rat < 0;
    if (n.kind == ExprKind::Mul && n.kids[0].kind() == ExprKind::Rat)
        return n.kids[0].node().rat < 0;
    return false;
}

void latex_rat(std::string& out, const Rational& q) {
    if (q.get_den() == 1) {
        out += q.get_num().get_str();
    } else {
        out += "\\tfrac{" + q.get_num().get_str() + "}{" + q.get_den().get_str() + "}";
    }
}

void latex_term_abs(std::string& out, const Expr& t) {
    const ENode& n = t.node();
    if (n.kind == ExprKind::Rat) {
        latex_rat(out, abs(n.rat));
        return;
    }
    if (n.kind == ExprKind::Mul && n.kids[0].kind() == ExprKind::Rat) {
        Rational c = abs(n.kids[0].node().rat);
        if (c != 1) {
            latex_rat(out, c);
            out += "\\,";
        }
        for (std::size_t i = 1; i < n.kids.size(); ++i) {
            if (i > 1) out += "\\,";
            latex_factor(out, n.kids[i]);
        }
        return;
    }
    latex_expr(out, t);
}

void latex_expr(std::string& out, const Expr& e) {
    const ENode& n = e.node();
    switch (n.kind) {
        case ExprKind::Rat:
            if (n.rat < 0) out += "-";
            latex_rat(out, abs(n.rat));
            return;
        case ExprKind::Sym:
            out += latex_name(syms().name(n.sym));
            return;
        case ExprKind::Add:
            for (std::size_t i = 0; i < n.kids.size(); ++i) {
                if (i == 0) {
                    if (latex_term_negative(n.kids[i])) out += "-";
                } else {
                    out += latex_term_negative(n.kids[i]) ? " - " : " + ";
                }
                latex_term_abs(out, n.kids[i]);
            }
            return;
        case ExprKind::Mul:
            if (latex_term_negative(e)) {
                out += "-";
                latex_term_abs(out, e);
                return;
            }
            for (std::size_t i = 0; i < n.kids.size(); ++i) {
                if (i) out += "\\,";
                latex_factor(out, n.kids[i]);
            }
            return;
        case ExprKind::Pow:
            latex_factor(out, n.kids[0]);
            out += "^{" + std::to_string(n.expo) + "}";
            return;
        case ExprKind::Exp:
            out += "e^{";
            latex_expr(out, n.kids[0]);
            out += "}";
            return;
        case ExprKind::Log:
            out += "\\ln ";
            latex_factor(out, n.kids[0]);
            return;
        case ExprKind::App: {
            out += latex_name(syms().finfo(n.fn).name);
            out += "\\!\\left(";
            for (std::size_t i = 0; i < n.kids.size(); ++i) {
                if (i) out += ", ";
                latex_expr(out, n.kids[i]);
            }
            out += "\\right)";
            return;
        }
    }
}

} // namespace

std::string to_latex(const Expr& e) {
    std::string out;
    latex_expr(out, e);
    return out;
}

} // namespace hce
