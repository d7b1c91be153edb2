#pragma once

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hce/rational.hpp"
#include "hce/symbols.hpp"

namespace hce {

// Immutable symbolic expressions over exact rational coefficients. Every
// Expr handed out by this module is in canonical form: sums and products are
// flattened and sorted, like terms merged, rational constants folded, and the
// limited exp/log rules applied (exp(0)=1, exp(log a)=a, log(exp a)=a,
// exp(a)exp(b)=exp(a+b)). Structural equality of canonical forms is the
// equality test used everywhere else in the project.

class Expr;

enum class ExprKind : std::uint8_t { Rat, Sym, Add, Mul, Pow, App, Exp, Log };

struct ENode {
    ExprKind kind;
    Rational rat;             // Rat
    SymbolId sym{};           // Sym
    FuncId fn{};              // App
    long expo = 0;            // Pow
    std::vector<Expr> kids;   // Add/Mul children, App args, Pow/Exp/Log arg at [0]
};

class Expr {
public:
    Expr();  // zero
    explicit Expr(std::shared_ptr<const ENode> n) : node_(std::move(n)) {}

    const ENode& node() const { return *node_; }
    ExprKind kind() const { return node_->kind; }
    const std::shared_ptr<const ENode>& ptr() const { return node_; }

    bool is_zero() const { return kind() == ExprKind::Rat && node_->rat == 0; }
    bool is_one() const { return kind() == ExprKind::Rat && node_->rat == 1; }
    std::optional<Rational> as_rational() const;

    static int compare(const Expr& a, const Expr& b);
    friend bool operator==(const Expr& a, const Expr& b) { return compare(a, b) == 0; }
    friend bool operator!=(const Expr& a, const Expr& b) { return compare(a, b) != 0; }

private:
    std::shared_ptr<const ENode> node_;
};

struct ExprLess {
    bool operator()(const Expr& a, const Expr& b) const { return Expr::compare(a, b) < 0; }
};

// --- constructors (results canonical) ---
Expr num(long n);
Expr num(const Rational& q);
Expr sym(SymbolId s);
Expr add(const std::vector<Expr>& terms);
Expr mul(const std::vector<Expr>& factors);
Expr pow(const Expr& base, long k);
Expr app(FuncId f, const std::vector<Expr>& args);
Expr exp_(const Expr& a);
Expr log_(const Expr& a);

inline Expr operator+(const Expr& a, const Expr& b) { return add({a, b}); }
inline Expr operator-(const Expr& a, const Expr& b) { return add({a, mul({num(-1), b})}); }
inline Expr operator*(const Expr& a, const Expr& b) { return mul({a, b}); }
inline Expr operator-(const Expr& a) { return mul({num(-1), a}); }

// --- operations ---
Expr normalize(const Expr& e);  // idempotent; canonical constructors already normalize

Expr diff(const Expr& e, SymbolId v);

using Bindings = std::map<Expr, Expr, ExprLess>;
Expr substitute(const Expr& e, const Bindings& bindings);

struct NotPolynomialInBasis : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Coefficients of `e` over monomials in the given kernels. Keys are monomial
// expressions in the basis kernels (1 for the constant slot); values contain
// no basis kernel. Throws NotPolynomialInBasis if a kernel occurs inside an
// opaque kernel argument or with a negative power.
std::map<Expr, Expr, ExprLess> collect(const Expr& e, const std::vector<Expr>& basis);

// --- queries ---
bool depends_on(const Expr& e, SymbolId v);
bool contains_kernel(const Expr& e, const Expr& kernel);

// Splits a canonical expression into (monomial, coefficient) pairs; the
// monomial carries no rational factor. Constant term reports monomial 1.
std::vector<std::pair<Expr, Rational>> terms_of(const Expr& e);

// Factors of a monomial term: (base, exponent) pairs plus the exp-kernel
// argument (zero if absent). Throws if `e` is a sum.
struct MonomialView {
    Rational coeff;
    std::vector<std::pair<Expr, long>> factors;
    Expr exp_argument;
};
MonomialView monomial_view(const Expr& e);

struct EvalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
// Exact rational evaluation; every symbol must be bound; App/Exp/Log nodes
// are rejected (substitute kernels away first).
Rational eval(const Expr& e, const std::map<SymbolId, Rational>& env);

} // namespace hce
