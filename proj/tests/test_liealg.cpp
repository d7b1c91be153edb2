#include <doctest.h>

#include <random>

#include "hce/liealg.hpp"

using namespace hce;

namespace {

Vec6 e(int i, Rational q = 1) {
    Vec6 v{};
    v[i - 1] = q;
    return v;
}

Vec6 bracket(int i, int j) {
    return EquivalenceAlgebra::canonical().structure(i, j);
}

} // namespace

TEST_CASE("commutator table matches the printed table entry for entry") {
    const auto& alg = EquivalenceAlgebra::canonical();
    // nonzero entries: [Y1,Y4]=2Y1, [Y1,Y5]=-Y1, [Y2,Y4]=Y2, [Y3,Y6]=Y3
    CHECK(bracket(1, 4) == e(1, 2));
    CHECK(bracket(1, 5) == e(1, -1));
    CHECK(bracket(2, 4) == e(2));
    CHECK(bracket(3, 6) == e(3));
    CHECK(bracket(6, 3) == e(3, -1));
    CHECK(bracket(4, 1) == e(1, -2));
    CHECK(bracket(5, 1) == e(1));
    CHECK(bracket(4, 2) == e(2, -1));
    int nonzero = 0;
    for (int i = 1; i <= 6; ++i)
        for (int j = 1; j <= 6; ++j) {
            bool zero = true;
            for (auto& q : bracket(i, j)) zero = zero && q == 0;
            if (!zero) ++nonzero;
            if (i == j) CHECK(zero);
        }
    CHECK(nonzero == 8);
}

TEST_CASE("Jacobi identity and antisymmetry on random triples") {
    const auto& alg = EquivalenceAlgebra::canonical();
    std::mt19937_64 rng(4242);
    std::uniform_int_distribution<int> d(-9, 9);
    for (int trial = 0; trial < 100; ++trial) {
        Vec6 a{}, b{}, c{};
        for (int k = 0; k < 6; ++k) {
            a[k] = Rational(d(rng), 1 + (trial % 3));
            a[k].canonicalize();
            b[k] = d(rng);
            c[k] = d(rng);
        }
        Vec6 ab = alg.bracket_vec(a, b), ba = alg.bracket_vec(b, a);
        Vec6 t1 = alg.bracket_vec(a, alg.bracket_vec(b, c));
        Vec6 t2 = alg.bracket_vec(b, alg.bracket_vec(c, a));
        Vec6 t3 = alg.bracket_vec(c, alg.bracket_vec(a, b));
        for (int k = 0; k < 6; ++k) {
            CHECK(ab[k] == -ba[k]);
            CHECK(t1[k] + t2[k] + t3[k] == 0);
        }
    }
}

TEST_CASE("expansion outside the span reports NotClosed") {
    const auto& alg = EquivalenceAlgebra::canonical();
    auto& S = syms();
    VectorField bad = VectorField::equivalence(num(0), pow(sym(S.x), 2), num(0), num(0), num(0));
    CHECK_THROWS_AS(alg.expand(bad), NotClosed);
}

TEST_CASE("Killing form") {
    const auto& alg = EquivalenceAlgebra::canonical();
    CHECK(alg.killing_trace(e(4), e(4)) == 5);
    CHECK(alg.killing_trace(e(4), e(5)) == -2);
    CHECK(alg.killing_trace(e(5), e(5)) == 1);
    CHECK(alg.killing_trace(e(6), e(6)) == 1);
    for (int j = 1; j <= 6; ++j) CHECK(alg.killing_trace(e(1), e(j)) == 0);
    // trace route equals the closed bilinear formula on all 36 pairs
    for (int i = 1; i <= 6; ++i)
        for (int j = 1; j <= 6; ++j)
            CHECK(alg.killing_trace(e(i), e(j)) == EquivalenceAlgebra::killing_closed(e(i), e(j)));
    RatMatrix k = alg.killing_matrix();
    CHECK(rank(k) == 3);
}

TEST_CASE("derived series") {
    const auto& alg = EquivalenceAlgebra::canonical();
    auto series = alg.derived_series();
    REQUIRE(series.size() >= 2);
    CHECK(series[0].rows() == 3);  // span{Y1, Y2, Y3}
    RatMatrix expected = RatMatrix::zero(3, 6);
    for (int i = 0; i < 3; ++i) expected.m[i][i] = 1;
    CHECK(series[0].m == expected.m);
    CHECK(series[1].rows() == 0);

    // abelian toy algebra terminates immediately
    std::array<std::array<Vec6, 6>, 6> zero_table{};
    auto toy = EquivalenceAlgebra::derived_series_of(zero_table);
    REQUIRE(!toy.empty());
    CHECK(toy[0].rows() == 0);
}

TEST_CASE("adjoint actions reproduce the printed adjoint table") {
    const auto& alg = EquivalenceAlgebra::canonical();
    auto entry = [&](int i, int j) { return alg.adjoint_action(i, j); };
    auto expect_basis = [&](int i, int j) {
        auto col = entry(i, j);
        for (int k = 0; k < 6; ++k)
            CHECK(col[k] == (k == j - 1 ? ExpPoly::constant(1) : ExpPoly{}));
    };
    // Ad(exp(s Y1)): Y4 -> Y4 - 2s Y1, Y5 -> Y5 + s Y1
    auto c14 = entry(1, 4);
    CHECK(c14[0] == ExpPoly::term(-2, 1, 0));
    CHECK(c14[3] == ExpPoly::constant(1));
    auto c15 = entry(1, 5);
    CHECK(c15[0] == ExpPoly::term(1, 1, 0));
    // Ad(exp(s Y2)): Y4 -> Y4 - s Y2
    CHECK(entry(2, 4)[1] == ExpPoly::term(-1, 1, 0));
    // Ad(exp(s Y3)): Y6 -> Y6 - s Y3
    CHECK(entry(3, 6)[2] == ExpPoly::term(-1, 1, 0));
    // Ad(exp(s Y4)): e^{2s} Y1, e^{s} Y2
    CHECK(entry(4, 1)[0] == ExpPoly::term(1, 0, 2));
    CHECK(entry(4, 2)[1] == ExpPoly::term(1, 0, 1));
    // Ad(exp(s Y5)): e^{-s} Y1
    CHECK(entry(5, 1)[0] == ExpPoly::term(1, 0, -1));
    // Ad(exp(s Y6)): e^{s} Y3
    CHECK(entry(6, 3)[2] == ExpPoly::term(1, 0, 1));
    // untouched columns stay basis vectors
    expect_basis(1, 1);
    expect_basis(1, 6);
    expect_basis(4, 3);
    expect_basis(5, 4);
    expect_basis(6, 5);
}

TEST_CASE("adjoint action evaluates the Lie series at zero to the identity") {
    const auto& alg = EquivalenceAlgebra::canonical();
    for (int i = 1; i <= 6; ++i) {
        RatMatrix id = alg.adjoint_matrix(i).at_zero();
        for (int a = 0; a < 6; ++a)
            for (int b = 0; b < 6; ++b) CHECK(id.m[a][b] == (a == b ? 1 : 0));
        // d/ds at 0 equals -ad(Y_i)
        Vec6 ei{};
        ei[i - 1] = 1;
        RatMatrix d0 = alg.adjoint_matrix(i).derivative().at_zero();
        RatMatrix ad = alg.ad(ei);
        for (int a = 0; a < 6; ++a)
            for (int b = 0; b < 6; ++b) CHECK(d0.m[a][b] == -ad.m[a][b]);
    }
}

TEST_CASE("exact exponential on a nilpotent-plus-semisimple sample") {
    // block with eigenvalue 2 of multiplicity 2 and a nilpotent part
    RatMatrix a = RatMatrix::zero(6, 6);
    a.m[0][0] = 2;
    a.m[0][1] = 1;
    a.m[1][1] = 2;
    a.m[2][2] = -1;
    ExpPolyMatrix m = exp_neg_s(a);
    CHECK(m.m[0][0] == ExpPoly::term(1, 0, -2));
    CHECK(m.m[0][1] == ExpPoly::term(-1, 1, -2));  // -s e^{-2s}
    CHECK(m.m[1][1] == ExpPoly::term(1, 0, -2));
    CHECK(m.m[2][2] == ExpPoly::term(1, 0, 1));
    CHECK(m.m[3][3] == ExpPoly::constant(1));

    // irrational spectrum is rejected: x^2 - 2
    RatMatrix b = RatMatrix::zero(6, 6);
    b.m[0][1] = 1;
    b.m[1][0] = 2;
    CHECK_THROWS_AS(exp_neg_s(b), NonRationalSpectrum);
}

TEST_CASE("flows match the one-parameter groups") {
    const auto& alg = EquivalenceAlgebra::canonical();
    auto& S = syms();
    Expr s = sym(S.s_param), r = sym(S.r_param);
    for (int i = 1; i <= 6; ++i) {
        Flow g = flow(alg, i);
        Bindings zero;
        zero[s] = num(0);
        for (const FlowComponent& c : g.components) {
            // identity at s = 0 and generator recovery
            CHECK(substitute(c.map, zero) == sym(c.coord));
            CHECK(substitute(diff(c.map, S.s_param), zero) == alg.Y(i).coeff(c.coord));
            // additive composition in the parameter
            Bindings to_r, compose, to_sum;
            to_r[s] = r;
            compose[sym(c.coord)] = c.map;
            to_sum[s] = s + r;
            Expr composed = substitute(substitute(c.map, to_r), compose);
            CHECK(composed == substitute(c.map, to_sum));
        }
    }
    CHECK(flow(alg, 4).map_of(S.t) == sym(S.t) * exp_(num(2) * s));
    CHECK(flow(alg, 4).map_of(S.H) == sym(S.H) * exp_(num(-2) * s));
    CHECK(flow(alg, 1).map_of(S.t) == sym(S.t) + s);
    CHECK(flow(alg, 6).map_of(S.u) == sym(S.u) * exp_(s));
}

TEST_CASE("flow rejects unsupported coefficient shapes") {
    auto& S = syms();
    VectorField y = VectorField::equivalence(pow(sym(S.t), 2), num(0), num(0), num(0), num(0));
    CHECK_THROWS_AS(flow_of_field(y, 0, "bad"), UnsupportedCoefficientShape);
}

TEST_CASE("solution transformation rules verify symbolically") {
    const auto& alg = EquivalenceAlgebra::canonical();
    auto& S = syms();
    Expr s = sym(S.s_param);
    for (int i = 1; i <= 6; ++i) {
        SolutionRule rule = transform_solution(alg, i);
        CHECK(rule.verified);
        // at s = 0 the rule is the identity
        Bindings zero;
        zero[s] = num(0);
        Expr f0 = app(S.fSol, {sym(S.t), sym(S.x)});
        CHECK(substitute(rule.u_rule, zero) == f0);
        CHECK(substitute(rule.e_bar, zero) == app(S.fE, {sym(S.x), sym(S.u)}));
        CHECK(substitute(rule.h_bar, zero) == app(S.fH, {sym(S.x), sym(S.u)}));
    }
    // the printed argument forms of the solution rules
    SolutionRule r1 = transform_solution(alg, 1);
    CHECK(r1.u_rule == app(S.fSol, {sym(S.t) + s, sym(S.x)}));
    SolutionRule r4 = transform_solution(alg, 4);
    CHECK(r4.u_rule ==
          app(S.fSol, {sym(S.t) * exp_(num(2) * s), sym(S.x) * exp_(s)}));
    SolutionRule r6 = transform_solution(alg, 6);
    CHECK(r6.u_rule == exp_(-s) * app(S.fSol, {sym(S.t), sym(S.x)}));
}

TEST_CASE("reflections are involutive class maps acting by signs on the algebra") {
    const auto& alg = EquivalenceAlgebra::canonical();
    auto refl = reflections();
    REQUIRE(refl.size() == 4);
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> d(-5, 5);
    for (const Flow& r : refl) {
        // involution on coordinates
        for (const FlowComponent& c : r.components) {
            Bindings self;
            for (const FlowComponent& cc : r.components) self[sym(cc.coord)] = cc.map;
            CHECK(substitute(c.map, self) == sym(c.coord));
        }
        // conjugation maps the algebra to itself by slot signs
        for (int trial = 0; trial < 5; ++trial) {
            Vec6 v{};
            for (int k = 0; k < 6; ++k) v[k] = d(rng);
            Vec6 w = reflect_vec(r, v);
            for (int k = 0; k < 6; ++k) CHECK(abs(w[k]) == abs(v[k]));
            // applying twice restores the element
            Vec6 back = reflect_vec(r, w);
            CHECK(back == v);
        }
    }
    // the t-reflection flips exactly a1, the u-reflection a3, the x-reflection a2
    Vec6 v{1, 1, 1, 1, 1, 1};
    CHECK(reflect_vec(refl[0], v) == Vec6{-1, 1, 1, 1, 1, 1});
    CHECK(reflect_vec(refl[1], v) == Vec6{1, 1, -1, 1, 1, 1});
    CHECK(reflect_vec(refl[2], v) == Vec6{1, -1, 1, 1, 1, 1});
}
