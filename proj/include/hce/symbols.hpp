#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hce {

// The fixed variable universe of the artifact: base coordinates (t,x,u), the
// order-<=2 jet of u (plus an order-3 extension used only by test oracles),
// the extended-space coordinates E,H with their first-order formal partials,
// and the named parameters. Unknown-function coefficients and the arbitrary
// classification functions live in a separate function-symbol table and enter
// expressions through FunctionApply nodes.

enum class SymbolKind : std::uint8_t {
    IndependentVar,
    DependentVar,
    JetVar,
    FormalDerivative,
    Parameter,
    Constant,
};

struct SymbolId {
    std::uint32_t v = 0;
    friend bool operator==(SymbolId a, SymbolId b) { return a.v == b.v; }
    friend auto operator<=>(SymbolId a, SymbolId b) { return a.v <=> b.v; }
};

struct FuncId {
    std::uint32_t v = 0;
    friend bool operator==(FuncId a, FuncId b) { return a.v == b.v; }
    friend auto operator<=>(FuncId a, FuncId b) { return a.v <=> b.v; }
};

struct SymbolInfo {
    std::string name;
    SymbolKind kind;
    // JetVar only: derivative counts of u with respect to t and x.
    int jet_t = 0, jet_x = 0;
    // FormalDerivative only (plain E/H jet coordinates): base name and the
    // differentiation variable, e.g. E_x -> base "E", wrt x.
    std::string base;
    SymbolId wrt{};
};

struct FuncInfo {
    std::string name;            // display name, e.g. "E", "Phi'", "xi_t"
    std::string base_name;       // underived name, e.g. "E", "Phi", "xi"
    std::vector<SymbolId> args;  // canonical argument symbols (for naming/diff)
    std::vector<int> deriv;      // multi-index over args; empty = underived
};

class SymbolTable {
public:
    static SymbolTable& instance();

    SymbolId intern(const std::string& name, SymbolKind kind);
    SymbolId parameter(const std::string& name);  // intern-or-get, kind Parameter
    bool has_symbol(const std::string& name) const;
    SymbolId lookup(const std::string& name) const;  // throws if absent
    const SymbolInfo& info(SymbolId id) const { return symbols_[id.v]; }
    const std::string& name(SymbolId id) const { return symbols_[id.v].name; }

    FuncId intern_func(const std::string& base, const std::vector<SymbolId>& args);
    bool has_func(const std::string& name) const;
    FuncId lookup_func(const std::string& name) const;
    const FuncInfo& finfo(FuncId id) const { return funcs_[id.v]; }
    // Derivative of a function symbol with respect to argument slot `slot`.
    FuncId derive(FuncId id, std::size_t slot);

    // Fixed universe, created on first use.
    SymbolId t, x, u;
    SymbolId E, H;                          // extended-space coordinates
    SymbolId E_t, E_x, E_u, H_t, H_x, H_u;  // their formal partials on (t,x,u)
    SymbolId s_param, r_param;
    // split markers for the two auxiliary equivalence conditions
    SymbolId mark_E, mark_H;
    // u-jet by multi-index; order <= 3 registered, public ops cap at 2.
    SymbolId jet(int nt, int nx) const;

    FuncId fE, fH;        // E(x,u), H(x,u) kernels for the point analysis
    FuncId fPhi, fPsi;    // arbitrary functions of the invariant
    FuncId fSol;          // formal solution symbol f(t,x)
    FuncId fXi, fTau, fPhiCoef;  // xi(t,x,u), tau(t,x,u), phi(t,x,u)
    FuncId fChi, fEta;           // chi(t,x,u,E,H), eta(t,x,u,E,H)

private:
    SymbolTable();
    std::vector<SymbolInfo> symbols_;
    std::vector<FuncInfo> funcs_;
    SymbolId jets_[4][4];  // [nt][nx], nt+nx <= 3
    std::string deriv_name(const FuncInfo& base_underived, const std::vector<int>& deriv) const;
};

inline SymbolTable& syms() { return SymbolTable::instance(); }

} // namespace hce
