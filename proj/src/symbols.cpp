#include "hce/symbols.hpp"

#include <map>
#include <stdexcept>

namespace hce {

namespace {
std::map<std::string, std::uint32_t>& sym_index() {
    static std::map<std::string, std::uint32_t> m;
    return m;
}
std::map<std::string, std::uint32_t>& func_index() {
    static std::map<std::string, std::uint32_t> m;
    return m;
}
} // namespace

SymbolTable& SymbolTable::instance() {
    static SymbolTable table;
    return table;
}

SymbolId SymbolTable::intern(const std::string& name, SymbolKind kind) {
    auto it = sym_index().find(name);
    if (it != sym_index().end()) {
        if (symbols_[it->second].kind != kind)
            throw std::logic_error("symbol '" + name + "' already interned with a different kind");
        return SymbolId{it->second};
    }
    SymbolId id{static_cast<std::uint32_t>(symbols_.size())};
    symbols_.push_back(SymbolInfo{name, kind});
    sym_index().emplace(name, id.v);
    return id;
}

SymbolId SymbolTable::parameter(const std::string& name) {
    return intern(name, SymbolKind::Parameter);
}

bool SymbolTable::has_symbol(const std::string& name) const {
    return sym_index().count(name) != 0;
}

SymbolId SymbolTable::lookup(const std::string& name) const {
    auto it = sym_index().find(name);
    if (it == sym_index().end()) throw std::out_of_range("unknown symbol: " + name);
    return SymbolId{it->second};
}

FuncId SymbolTable::intern_func(const std::string& base, const std::vector<SymbolId>& args) {
    auto it = func_index().find(base);
    if (it != func_index().end()) return FuncId{it->second};
    FuncId id{static_cast<std::uint32_t>(funcs_.size())};
    funcs_.push_back(FuncInfo{base, base, args, {}});
    func_index().emplace(base, id.v);
    return id;
}

bool SymbolTable::has_func(const std::string& name) const {
    return func_index().count(name) != 0;
}

FuncId SymbolTable::lookup_func(const std::string& name) const {
    auto it = func_index().find(name);
    if (it == func_index().end()) throw std::out_of_range("unknown function symbol: " + name);
    return FuncId{it->second};
}

std::string SymbolTable::deriv_name(const FuncInfo& fi, const std::vector<int>& deriv) const {
    int total = 0;
    for (int d : deriv) total += d;
    if (total == 0) return fi.base_name;
    if (fi.args.size() == 1) {
        std::string n = fi.base_name;
        n.append(static_cast<std::size_t>(total), '\'');
        return n;
    }
    std::string n = fi.base_name + "_";
    for (std::size_t i = 0; i < deriv.size(); ++i)
        for (int k = 0; k < deriv[i]; ++k) n += name(fi.args[i]);
    return n;
}

FuncId SymbolTable::derive(FuncId id, std::size_t slot) {
    const FuncInfo fi = funcs_[id.v];
    if (slot >= fi.args.size()) throw std::out_of_range("derivative slot out of range");
    std::vector<int> d = fi.deriv;
    d.resize(fi.args.size(), 0);
    d[slot] += 1;
    // Find the underived ancestor to build the display name.
    FuncInfo base = fi;
    base.deriv.clear();
    base.name = fi.base_name;
    std::string nm = deriv_name(base, d);
    auto it = func_index().find(nm);
    if (it != func_index().end()) return FuncId{it->second};
    FuncId nid{static_cast<std::uint32_t>(funcs_.size())};
    funcs_.push_back(FuncInfo{nm, fi.base_name, fi.args, d});
    func_index().emplace(nm, nid.v);
    return nid;
}

SymbolId SymbolTable::jet(int nt, int nx) const {
    if (nt < 0 || nx < 0 || nt + nx > 3) throw std::out_of_range("jet order out of range");
    if (nt + nx == 0) return u;
    return jets_[nt][nx];
}

SymbolTable::SymbolTable() {
    t = intern("t", SymbolKind::IndependentVar);
    x = intern("x", SymbolKind::IndependentVar);
    u = intern("u", SymbolKind::DependentVar);

    auto mkjet = [&](int nt, int nx) {
        std::string n = "u_";
        n.append(static_cast<std::size_t>(nt), 't');
        n.append(static_cast<std::size_t>(nx), 'x');
        SymbolId id = intern(n, SymbolKind::JetVar);
        symbols_[id.v].jet_t = nt;
        symbols_[id.v].jet_x = nx;
        jets_[nt][nx] = id;
    };
    for (int order = 1; order <= 3; ++order)
        for (int nt = order; nt >= 0; --nt)
            if (nt + (order - nt) == order) mkjet(nt, order - nt);

    E = intern("E", SymbolKind::DependentVar);
    H = intern("H", SymbolKind::DependentVar);
    auto mkpartial = [&](const std::string& base, SymbolId wrt) {
        SymbolId id = intern(base + "_" + name(wrt), SymbolKind::FormalDerivative);
        symbols_[id.v].base = base;
        symbols_[id.v].wrt = wrt;
        return id;
    };
    E_t = mkpartial("E", t);
    E_x = mkpartial("E", x);
    E_u = mkpartial("E", u);
    H_t = mkpartial("H", t);
    H_x = mkpartial("H", x);
    H_u = mkpartial("H", u);

    s_param = parameter("s");
    r_param = parameter("r");
    mark_E = intern("mu_E", SymbolKind::Constant);
    mark_H = intern("mu_H", SymbolKind::Constant);
    parameter("c");
    for (int i = 1; i <= 6; ++i) parameter("c" + std::to_string(i));
    for (int i = 1; i <= 8; ++i) parameter("alpha" + std::to_string(i));
    for (int i = 1; i <= 4; ++i) parameter("beta" + std::to_string(i));

    fE = intern_func("E", {x, u});
    fH = intern_func("H", {x, u});
    SymbolId lam = intern("lambda", SymbolKind::IndependentVar);
    fPhi = intern_func("Phi", {lam});
    fPsi = intern_func("Psi", {lam});
    fSol = intern_func("f", {t, x});
    fXi = intern_func("xi", {t, x, u});
    fTau = intern_func("tau", {t, x, u});
    fPhiCoef = intern_func("phi", {t, x, u});
    fChi = intern_func("chi", {t, x, u, E, H});
    fEta = intern_func("eta", {t, x, u, E, H});
}

} // namespace hce
