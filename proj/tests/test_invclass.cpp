#include <doctest.h>

#include "hce/invclass.hpp"

using namespace hce;

namespace {

Expr X() { return sym(syms().x); }
Expr U() { return sym(syms().u); }

VectorField z_of(int z_index, const std::map<int, int>& signs = {},
                 const Bindings& bound = {}) {
    int a_first = z_to_a_map()[z_index - 1].front();
    VectorField proj = project_xueh(representative_field(a_first, signs));
    VectorField out({proj.coords(), {}});
    for (SymbolId c : proj.coords()) out.set_coeff(c, substitute(proj.coeff(c), bound));
    return out;
}

} // namespace

TEST_CASE("classify_coordinates shapes") {
    auto& S = syms();
    // Z4 = E d/dE + H d/dH
    auto odes4 = classify_coordinates(z_of(4));
    CHECK(odes4[0].shape == SlotShape::Zero);
    CHECK(odes4[1].shape == SlotShape::Zero);
    CHECK(odes4[2].shape == SlotShape::Scaling);
    CHECK(odes4[2].scale == num(1));
    CHECK(odes4[3].shape == SlotShape::Scaling);
    // Z1 = d/dx
    auto odes1 = classify_coordinates(z_of(1));
    CHECK(odes1[0].shape == SlotShape::Translation);
    CHECK(odes1[0].shift == num(1));
    CHECK(odes1[1].shape == SlotShape::Zero);
    // canonical Z13 = alpha2 x d/dx + u d/du - (2 alpha2 - 1) H d/dH
    auto odes13 = classify_coordinates(z_of(13));
    CHECK(odes13[0].shape == SlotShape::Scaling);
    CHECK(odes13[0].scale == sym(S.lookup("alpha2")));
    CHECK(odes13[1].shape == SlotShape::Scaling);
    CHECK(odes13[1].scale == num(1));
    CHECK(odes13[2].shape == SlotShape::Zero);
    CHECK(odes13[3].shape == SlotShape::Scaling);
    // canonical Z23 has an affine x slot
    auto odes23 = classify_coordinates(z_of(23));
    CHECK(odes23[0].shape == SlotShape::Affine);
    // unsupported shapes are rejected
    VectorField bad({{S.x, S.u, S.E, S.H}, {{S.x, pow(X(), 2)}}});
    CHECK_THROWS_AS(classify_coordinates(bad), UnsupportedCoefficientShape);
}

TEST_CASE("invariants examples") {
    auto& S = syms();
    // Z4: {x, u, ln H - ln E}
    InvariantSet inv4 = invariants_of(z_of(4));
    CHECK(inv4.I1 == X());
    CHECK(inv4.I2 == U());
    CHECK(inv4.I3 == log_(sym(S.H)) - log_(sym(S.E)));
    CHECK(!inv4.reconstructible);
    // Z6: lambda = u - x
    InvariantSet inv6 = invariants_of(z_of(6));
    REQUIRE(inv6.lambda.has_value());
    CHECK(*inv6.lambda == U() - X());
    // Z9: lambda = ln u - x
    InvariantSet inv9 = invariants_of(z_of(9));
    CHECK(*inv9.lambda == log_(U()) - X());
}

TEST_CASE("invariants are annihilated and functionally independent") {
    auto& S = syms();
    std::map<SymbolId, Rational> point{{S.x, Rational(2)},
                                       {S.u, Rational(3)},
                                       {S.E, Rational(5)},
                                       {S.H, Rational(7)}};
    Bindings generic;
    for (int i = 1; i <= 8; ++i) generic[sym(S.lookup("alpha" + std::to_string(i)))] = num(3);
    for (int i = 1; i <= 4; ++i) generic[sym(S.lookup("beta" + std::to_string(i)))] = num(7);
    for (int z = 1; z <= 23; ++z) {
        VectorField f = z_of(z, {}, generic);
        InvariantSet inv = invariants_of(f);
        for (const Expr& i : {inv.I1, inv.I2, inv.I3}) {
            CAPTURE(z);
            CHECK(f.apply(i).is_zero());
        }
        // 3x4 Jacobian has full rank at a generic rational point
        RatMatrix jac = RatMatrix::zero(3, 4);
        std::array<Expr, 3> invs{inv.I1, inv.I2, inv.I3};
        std::array<SymbolId, 4> coords{S.x, S.u, S.E, S.H};
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 4; ++c) jac.m[r][c] = eval(diff(invs[r], coords[c]), point);
        CHECK(rank(jac) == 3);
    }
}

TEST_CASE("reconstruction examples") {
    auto& S = syms();
    // Z4 has no invariant equation
    CHECK(std::holds_alternative<NoInvariantEquation>(reconstruct_equation(invariants_of(z_of(4)))));
    // Z1: E = Phi(u), H = Psi(u)
    auto rec1 = reconstruct_equation(invariants_of(z_of(1)));
    REQUIRE(std::holds_alternative<Family>(rec1));
    const Family& f1 = std::get<Family>(rec1);
    CHECK(f1.lambda == U());
    CHECK(f1.e_form == app(S.fPhi, {U()}));
    CHECK(f1.h_form == app(S.fPsi, {U()}));
    // Z5: H = u e^{Psi(x)}
    auto rec5 = reconstruct_equation(invariants_of(z_of(5)));
    const Family& f5 = std::get<Family>(rec5);
    CHECK(f5.lambda == X());
    CHECK(f5.h_form == U() * exp_(app(S.fPsi, {X()})));
}

TEST_CASE("additional operators") {
    auto& S = syms();
    // A5 projects to t d/dt (sign-normalized)
    auto ops5 = additional_operator(5);
    REQUIRE(ops5.size() == 1);
    CHECK(ops5[0] == VectorField::point(sym(S.t), num(0), num(0)));
    // A2 and A7 share Z1: d/dx and both signs of d/dt + d/dx
    auto ops1 = additional_operator(2);
    REQUIRE(ops1.size() == 3);
    CHECK(ops1[0] == VectorField::point(num(0), num(1), num(0)));
    CHECK(ops1[1] == VectorField::point(num(1), num(1), num(0)));
    CHECK(ops1[2] == VectorField::point(num(-1), num(1), num(0)));
    // A29's operator keeps its parameters
    auto ops29 = additional_operator(29);
    REQUIRE(ops29.size() == 1);
    Expr a8 = sym(S.lookup("alpha8"));
    Expr b4 = sym(S.lookup("beta4"));
    CHECK(ops29[0].coeff(S.t) == (num(2) * a8 - b4) * sym(S.t));
    CHECK(ops29[0].coeff(S.x) == a8 * sym(S.x) + num(1));
    CHECK(ops29[0].coeff(S.u) == U());
}

TEST_CASE("detected degeneracies match the printed degenerate rows") {
    auto degs = detected_degeneracies();
    REQUIRE(degs.size() == 10);
    std::map<int, std::string> by_z(degs.begin(), degs.end());
    CHECK(by_z.at(12) == "alpha1 = 1/2");
    CHECK(by_z.at(13) == "alpha2 = 1/2");
    CHECK(by_z.at(14) == "beta1 = -1");
    CHECK(by_z.at(17) == "alpha3 = 1/2");
    CHECK(by_z.at(18) == "alpha4 = 1/2");
    CHECK(by_z.at(19) == "beta2 = -1");
    CHECK(by_z.at(20) == "alpha5 = 1/2");
    CHECK(by_z.at(21) == "beta3 = -1 + 2*alpha6");
    CHECK(by_z.at(22) == "alpha7 = 1/2");
    CHECK(by_z.at(23) == "beta4 = -1 + 2*alpha8");
}

TEST_CASE("full classification regenerates and verifies") {
    auto rows = classify_all();
    REQUIRE(rows.size() == 38);
    int printed = 0, no_inv = 0;
    for (const auto& e : rows) {
        CAPTURE(e.printed_row);
        CHECK(e.verified);
        if (e.printed_row > 0) ++printed;
        if (e.no_invariant) {
            ++no_inv;
            CHECK(e.z_index == 4);
        }
    }
    CHECK(printed == 37);
    CHECK(no_inv == 1);
}

TEST_CASE("selected rows pin the canonical content") {
    auto& S = syms();
    auto rows = classify_all();
    auto row = [&](int n) -> const ClassificationEntry& {
        for (const auto& e : rows)
            if (e.printed_row == n) return e;
        throw std::out_of_range("row");
    };
    // row 1: lambda = u, both coefficients free functions of u
    CHECK(*row(1).lambda == U());
    CHECK(*row(1).e_form == app(S.fPhi, {U()}));
    // row 4: H = u e^{Psi(x)} with ops u d/du and +-d/dt + u d/du
    CHECK(*row(4).h_form == U() * exp_(app(S.fPsi, {X()})));
    REQUIRE(row(4).operators.size() == 3);
    CHECK(row(4).operators[0] == VectorField::point(num(0), num(0), U()));
    // row 14: lambda = ln u - 2 ln x, H free in lambda, op 2t dt + x dx + 2u du
    Expr lam14 = log_(U()) - num(2) * log_(X());
    CHECK(*row(14).lambda == lam14);
    CHECK(*row(14).h_form == app(S.fPsi, {lam14}));
    REQUIRE(row(14).operators.size() == 1);
    CHECK(row(14).operators[0] ==
          VectorField::point(num(2) * sym(S.t), sym(S.x), num(2) * U()));
    // row 16: E = e^{-Phi(x)}/u with X = t dt + u du
    CHECK(*row(16).e_form == exp_(-(app(S.fPhi, {X()}) + log_(U()))));
    CHECK(row(16).operators[0] == VectorField::point(sym(S.t), num(0), U()));
    // row 37: pinned alpha8 = -1, beta4 = -3, H free in lambda
    const auto& r37 = row(37);
    CHECK(r37.printed_special);
    CHECK(r37.degenerate_detected);
    Expr lam37 = log_(U()) + log_(num(1) - X());
    CHECK(*r37.lambda == lam37);
    CHECK(*r37.h_form == app(S.fPsi, {lam37}));
    // degenerate rows carry the machine-detected flag
    CHECK(row(12).degenerate_detected);
    CHECK(row(35).degenerate_detected);
    CHECK(!row(11).degenerate_detected);
    // printed-special rows are flagged
    CHECK(row(23).printed_special);
    CHECK(row(32).printed_special);
}

TEST_CASE("classification with bound parameters") {
    auto& S = syms();
    Bindings bound;
    bound[sym(S.lookup("alpha2"))] = num(Rational(1, 3));
    auto rows = classify_all(bound);
    for (const auto& e : rows) {
        CHECK(e.verified);
        if (e.printed_row == 13) {
            // lambda = ln u - 3 ln x at alpha2 = 1/3
            CHECK(*e.lambda == log_(U()) - num(3) * log_(X()));
        }
    }
}
