#pragma once

#include "hce/vectorfield.hpp"

namespace hce {

struct JetOrderOverflow : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Total derivative D_v = d/dv + Sigma u_{J,v} d/du_J on jet space, with chain
// rule through E(x,u)/H(x,u) kernels and through the plain E,H coordinates
// (D_v E = E_v + E_u u_v). Results beyond jet order `max_order` throw; the
// default honours the project-wide order-2 cap, test oracles may pass 3.
Expr total_derivative(const Expr& e, SymbolId v, int max_order = 2);

// Extended total derivative on (t,x,u) with E,H as dependent variables:
// D~_I = d/dI + E_I d/dE + H_I d/dH. Here t,x,u are mutually independent.
Expr extended_total_derivative(const Expr& e, SymbolId I);

// Q = phi - xi u_t - tau u_x for a point generator.
Expr characteristic(const VectorField& y);

// Second prolongation of a point generator: u_t,u_x by the characteristic
// formula, second order by iterating the first-order rule
// phi^{Jv} = D_v(phi^J) - u_{Jt} D_v(xi) - u_{Jx} D_v(tau).
ProlongedField prolong2(const VectorField& y);

// Prolongation of an equivalence generator on (t,x,u,E,H): the point jet
// coefficients plus chi^t, chi^x, chi^u and eta^t via the extended total
// derivatives (E_t/H_t kept; the residual imposes E_t = H_t = 0).
ProlongedField prolong_equivalence(const VectorField& y);

} // namespace hce
