#include <doctest.h>

#include <random>

#include "hce/jetcalc.hpp"

using namespace hce;

namespace {

Expr T() { return sym(syms().t); }
Expr X() { return sym(syms().x); }
Expr U() { return sym(syms().u); }
Expr J(int nt, int nx) { return sym(syms().jet(nt, nx)); }
Expr Ek() { return app(syms().fE, {X(), U()}); }

// Independent oracle for the second-order coefficients: the characteristic
// formula eta^J = D_J(Q) + xi u_{J,t} + tau u_{J,x}, evaluated with the jet
// order relaxed to 3 (the order-3 terms cancel exactly).
Expr char_route(const VectorField& y, int jt, int jx) {
    auto& S = syms();
    Expr q = characteristic(y);
    Expr d = q;
    for (int k = 0; k < jt; ++k) d = total_derivative(d, S.t, 3);
    for (int k = 0; k < jx; ++k) d = total_derivative(d, S.x, 3);
    return d + y.coeff(S.t) * sym(S.jet(jt + 1, jx)) + y.coeff(S.x) * sym(S.jet(jt, jx + 1));
}

VectorField random_point_field(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> coef(-3, 3);
    auto rnd_poly = [&]() {
        // random polynomial of total degree <= 2 in (t,x,u)
        std::vector<Expr> monos = {num(1),    T(),       X(),       U(),       T() * T(),
                                   T() * X(), T() * U(), X() * X(), X() * U(), U() * U()};
        std::vector<Expr> parts;
        for (const Expr& m : monos) parts.push_back(num(coef(rng)) * m);
        return add(parts);
    };
    return VectorField::point(rnd_poly(), rnd_poly(), rnd_poly());
}

} // namespace

TEST_CASE("total derivative expands the equation right-hand side") {
    auto& S = syms();
    Expr ex = app(S.derive(S.fE, 0), {X(), U()});
    Expr eu = app(S.derive(S.fE, 1), {X(), U()});
    CHECK(total_derivative(Ek() * J(0, 1), S.x) ==
          ex * J(0, 1) + eu * J(0, 1) * J(0, 1) + Ek() * J(0, 2));
    CHECK(total_derivative(T(), S.x).is_zero());
    CHECK(total_derivative(U(), S.t) == J(1, 0));
}

TEST_CASE("total derivative order cap") {
    auto& S = syms();
    CHECK_THROWS_AS(total_derivative(J(0, 2), S.x), JetOrderOverflow);
    CHECK(total_derivative(J(0, 2), S.x, 3) == J(0, 3));
    // mixed seconds commute
    CHECK(total_derivative(total_derivative(U(), S.t), S.x) ==
          total_derivative(total_derivative(U(), S.x), S.t));
    CHECK(total_derivative(total_derivative(U(), S.t), S.x) == J(1, 1));
}

TEST_CASE("extended total derivative") {
    auto& S = syms();
    CHECK(extended_total_derivative(sym(S.E), S.x) == sym(S.E_x));
    CHECK(extended_total_derivative(T(), S.u).is_zero());
    CHECK(extended_total_derivative(U(), S.x).is_zero());
    // chain through chi(t,x,u,E,H)
    Expr chi = app(S.fChi, {T(), X(), U(), sym(S.E), sym(S.H)});
    Expr d = extended_total_derivative(chi, S.t);
    Expr chi_t = app(S.derive(S.fChi, 0), {T(), X(), U(), sym(S.E), sym(S.H)});
    Expr chi_E = app(S.derive(S.fChi, 3), {T(), X(), U(), sym(S.E), sym(S.H)});
    Expr chi_H = app(S.derive(S.fChi, 4), {T(), X(), U(), sym(S.E), sym(S.H)});
    CHECK(d == chi_t + chi_E * sym(S.E_t) + chi_H * sym(S.H_t));
    // imposing E_t = H_t = 0 leaves the bare partial
    Bindings zero;
    zero[sym(S.E_t)] = num(0);
    zero[sym(S.H_t)] = num(0);
    CHECK(substitute(d, zero) == chi_t);
}

TEST_CASE("characteristic") {
    CHECK(characteristic(VectorField::point(num(1), num(0), num(0))) == -J(1, 0));
    CHECK(characteristic(VectorField::point(num(0), num(0), U())) == U());
    CHECK(characteristic(VectorField::point(num(1), num(1), num(1))) ==
          num(1) - J(1, 0) - J(0, 1));
}

TEST_CASE("prolong2 on simple generators") {
    auto& S = syms();
    SUBCASE("time translation prolongs trivially") {
        ProlongedField p = prolong2(VectorField::point(num(1), num(0), num(0)));
        for (auto& [c, e] : p.jet_coeffs) CHECK(e.is_zero());
    }
    SUBCASE("u d/du lifts to the identity on every jet") {
        ProlongedField p = prolong2(VectorField::point(num(0), num(0), U()));
        CHECK(p.jet_coeffs.at(S.jet(0, 1)) == J(0, 1));
        CHECK(p.jet_coeffs.at(S.jet(0, 2)) == J(0, 2));
        CHECK(p.jet_coeffs.at(S.jet(1, 0)) == J(1, 0));
    }
    SUBCASE("t d/dt lowers u_t") {
        ProlongedField p = prolong2(VectorField::point(T(), num(0), num(0)));
        CHECK(p.jet_coeffs.at(S.jet(1, 0)) == -J(1, 0));
        CHECK(p.jet_coeffs.at(S.jet(0, 2)).is_zero());
    }
}

TEST_CASE("first-order coefficients match the expanded identity") {
    auto& S = syms();
    std::mt19937_64 rng(7);
    for (int i = 0; i < 10; ++i) {
        VectorField y = random_point_field(rng);
        ProlongedField p = prolong2(y);
        Expr expected = total_derivative(y.coeff(S.u), S.x) -
                        J(1, 0) * total_derivative(y.coeff(S.t), S.x) -
                        J(0, 1) * total_derivative(y.coeff(S.x), S.x);
        CHECK(p.jet_coeffs.at(S.jet(0, 1)) == expected);
    }
}

TEST_CASE("characteristic route equals the iterated rule at order two") {
    auto& S = syms();
    std::mt19937_64 rng(11);
    for (int i = 0; i < 10; ++i) {
        VectorField y = random_point_field(rng);
        ProlongedField p = prolong2(y);
        CHECK(p.jet_coeffs.at(S.jet(2, 0)) == char_route(y, 2, 0));
        CHECK(p.jet_coeffs.at(S.jet(1, 1)) == char_route(y, 1, 1));
        CHECK(p.jet_coeffs.at(S.jet(0, 2)) == char_route(y, 0, 2));
    }
}

TEST_CASE("prolongation is linear") {
    std::mt19937_64 rng(23);
    VectorField a = random_point_field(rng), b = random_point_field(rng);
    VectorField combo = VectorField::combine({{Rational(2, 3), a}, {Rational(-5), b}});
    ProlongedField pa = prolong2(a), pb = prolong2(b), pc = prolong2(combo);
    for (auto& [c, e] : pc.jet_coeffs)
        CHECK(e ==
              num(Rational(2, 3)) * pa.jet_coeffs.at(c) + num(Rational(-5)) * pb.jet_coeffs.at(c));
}

TEST_CASE("equivalence prolongation") {
    auto& S = syms();
    SUBCASE("E d/dE") {
        VectorField y = VectorField::equivalence(num(0), num(0), num(0), sym(S.E), num(0));
        ProlongedField p = prolong_equivalence(y);
        CHECK(p.jet_coeffs.at(S.E_x) == sym(S.E_x));
        CHECK(p.jet_coeffs.at(S.E_u) == sym(S.E_u));
        CHECK(p.jet_coeffs.at(S.E_t) == sym(S.E_t));
        CHECK(p.jet_coeffs.at(S.H_t).is_zero());
    }
    SUBCASE("translations prolong trivially") {
        VectorField y = VectorField::equivalence(num(1), num(0), num(0), num(0), num(0));
        ProlongedField p = prolong_equivalence(y);
        for (SymbolId c : {S.E_t, S.E_x, S.E_u, S.H_t}) CHECK(p.jet_coeffs.at(c).is_zero());
    }
    SUBCASE("canonical Y5 kills the t-conditions") {
        // Y5 = -t d/dt + E d/dE + H d/dH
        VectorField y = VectorField::equivalence(-T(), num(0), num(0), sym(S.E), sym(S.H));
        ProlongedField p = prolong_equivalence(y);
        Bindings zero;
        zero[sym(S.E_t)] = num(0);
        zero[sym(S.H_t)] = num(0);
        CHECK(substitute(p.jet_coeffs.at(S.E_t), zero).is_zero());
        CHECK(substitute(p.jet_coeffs.at(S.H_t), zero).is_zero());
    }
    SUBCASE("dependence invariants are enforced") {
        CHECK_THROWS_AS(
            prolong_equivalence(VectorField::equivalence(sym(S.E), num(0), num(0), num(0), num(0))),
            std::invalid_argument);
    }
}
