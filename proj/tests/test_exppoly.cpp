#include <doctest.h>

#include "hce/exppoly.hpp"

using namespace hce;

TEST_CASE("exppoly arithmetic and canonicalization") {
    ExpPoly a = ExpPoly::term(2, 1, 0);          // 2s
    ExpPoly b = ExpPoly::term(Rational(1), 0, 3);  // e^{3s}
    ExpPoly c = a * b;                           // 2 s e^{3s}
    CHECK(c == ExpPoly::term(2, 1, 3));
    CHECK((a + a.scaled(-1)).is_zero());
    // like terms merge
    CHECK(ExpPoly::term(1, 2, 5) + ExpPoly::term(2, 2, 5) == ExpPoly::term(3, 2, 5));
    CHECK((ExpPoly::term(1, 2, 5) + ExpPoly::term(-1, 2, 5)).is_zero());
}

TEST_CASE("derivative") {
    // d/ds [s^2 e^{3s}] = 2 s e^{3s} + 3 s^2 e^{3s}
    ExpPoly p = ExpPoly::term(1, 2, 3);
    CHECK(p.derivative() == ExpPoly::term(2, 1, 3) + ExpPoly::term(3, 2, 3));
    CHECK(ExpPoly::constant(5).derivative().is_zero());
}

TEST_CASE("evaluation at zero") {
    ExpPoly p = ExpPoly::term(2, 0, 3) + ExpPoly::term(7, 1, 0);
    CHECK(p.at_zero() == 2);
}

TEST_CASE("exact evaluation regimes") {
    // polynomial entries at rational parameters
    ExpPoly lin = ExpPoly::constant(1) + ExpPoly::term(-2, 1, 0);  // 1 - 2s
    CHECK(lin.eval(ExpParam::rational(Rational(3, 2))) == Rational(-2));
    // exponential entries at log parameters: e^{2 ln 3} = 9
    ExpPoly e2 = ExpPoly::term(1, 0, 2);
    CHECK(e2.eval(ExpParam::log(3)) == 9);
    // fractional exponents need exact roots: e^{(1/2) ln 9} = 3
    ExpPoly ehalf = ExpPoly::term(1, 0, Rational(1, 2));
    CHECK(ehalf.eval(ExpParam::log(9)) == 3);
    CHECK_THROWS_AS(ehalf.eval(ExpParam::log(2)), IrrationalResult);
    // e^{lambda s} at rational s != 0 leaves Q
    CHECK_THROWS_AS(e2.eval(ExpParam::rational(1)), IrrationalResult);
    // ln(r)^k is irrational for r != 1
    CHECK_THROWS_AS(lin.eval(ExpParam::log(2)), IrrationalResult);
    CHECK(lin.eval(ExpParam::log(1)) == 1);
}

TEST_CASE("log parameter validation") {
    CHECK_THROWS_AS(ExpParam::log(-2), std::domain_error);
    CHECK_THROWS_AS(ExpParam::log(0), std::domain_error);
}

TEST_CASE("to_expr") {
    auto& S = syms();
    ExpPoly p = ExpPoly::term(2, 1, -1);
    Expr e = p.to_expr(S.s_param);
    Expr expected = num(2) * sym(S.s_param) * exp_(-sym(S.s_param));
    CHECK(e == expected);
}
