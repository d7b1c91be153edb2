#include "hce/report.hpp"

#include <fstream>
#include <random>
#include <sstream>

#include "hce/expr_io.hpp"

namespace hce {

namespace {

Expr T() { return sym(syms().t); }
Expr X() { return sym(syms().x); }
Expr U() { return sym(syms().u); }
Expr Ec() { return sym(syms().E); }
Expr Hc() { return sym(syms().H); }
Expr Sp() { return sym(syms().s_param); }

std::string vec_to_string(const Vec6& v) {
    std::string s;
    for (int i = 0; i < 6; ++i) {
        if (i) s += ",";
        s += to_string(v[i]);
    }
    return s;
}

} // namespace

std::vector<Deviation> known_deviations() {
    auto& S = syms();
    const auto& alg = EquivalenceAlgebra::canonical();
    std::vector<Deviation> out;

    {
        Deviation d;
        d.id = "y4-x-slot";
        d.where = "equivalence generator list, fourth generator";
        d.printed = "Y4 = 2t d/dt + d/dx - 2H d/dH";
        d.derived = "Y4 = 2t d/dt + x*d/dx - 2H d/dH";
        d.note = "the commutator table and the G4 flow force x d/dx; the printed form fails "
                 "the equivalence invariance condition";
        VectorField printed = VectorField::equivalence(num(2) * T(), num(1), num(0), num(0),
                                                       num(-2) * Hc());
        d.confirmed = !verify_generator(printed, FieldKind::Equivalence).valid &&
                      verify_generator(alg.Y(4), FieldKind::Equivalence).valid;
        out.push_back(d);
    }
    {
        Deviation d;
        d.id = "characteristic-leading-term";
        d.where = "characteristic definition";
        d.printed = "Q = u - xi u_t - tau u_x";
        d.derived = "Q = phi - xi u_t - tau u_x";
        d.note = "the printed leading term breaks the first-order prolongation identity; the "
                 "phi form reproduces it";
        // probe generator x d/du: phi = x, so the two variants differ
        VectorField y = VectorField::point(num(0), num(0), X());
        Expr u_t = sym(S.jet(1, 0)), u_x = sym(S.jet(0, 1));
        Expr q_print = U() - y.coeff(S.t) * u_t - y.coeff(S.x) * u_x;
        Expr phi_x_print = total_derivative(q_print, S.x) + y.coeff(S.t) * sym(S.jet(1, 1)) +
                           y.coeff(S.x) * sym(S.jet(0, 2));
        Expr phi_x_true = prolong2(y).jet_coeffs.at(S.jet(0, 1));
        Expr identity = total_derivative(y.coeff(S.u), S.x) -
                        u_t * total_derivative(y.coeff(S.t), S.x) -
                        u_x * total_derivative(y.coeff(S.x), S.x);
        d.confirmed = phi_x_print != identity && phi_x_true == identity;
        out.push_back(d);
    }
    {
        Deviation d;
        d.id = "z23-first-invariant";
        d.where = "printed invariant of the Z23 characteristic system";
        d.printed = "I1 = ln u - (alpha8 + 1) x";
        d.derived = "I1 = ln u - x/(alpha8 + 1)";
        d.note = "the printed characteristic system dx/(alpha8+1) = du/u annihilates only the "
                 "derived form";
        Expr a8 = sym(S.lookup("alpha8"));
        VectorField w({{S.x, S.u}, {{S.x, a8 + num(1)}, {S.u, U()}}});
        Expr printed_i1 = log_(U()) - (a8 + num(1)) * X();
        Expr derived_i1 = log_(U()) - X() * pow(a8 + num(1), -1);
        d.confirmed = !w.apply(printed_i1).is_zero() && w.apply(derived_i1).is_zero();
        out.push_back(d);
    }
    {
        Deviation d;
        d.id = "normalizer-y1-step";
        d.where = "normalizer reduction of the Y1 coefficient";
        d.printed = "act by Ad(exp((a1/a4) Y2)) to cancel the Y1 coefficient";
        d.derived = "act by Ad(exp((a1/(2a4-a5)) Y1)); no Y2 action reaches a1";
        d.note = "Ad(exp(p Y2)) only changes a2 by -p a4";
        Vec6 a{Rational(3), Rational(0), Rational(0), Rational(1), Rational(0), Rational(1)};
        AdjointWord printed_step;
        printed_step.steps.push_back({2, ExpParam::rational(a[0] / a[3])});
        Vec6 after_printed = apply_word(a, printed_step);
        AdjointWord working_step;
        working_step.steps.push_back({1, ExpParam::rational(a[0] / (2 * a[3] - a[4]))});
        Vec6 after_working = apply_word(a, working_step);
        d.confirmed = after_printed[0] == a[0] && after_working[0] == 0;
        out.push_back(d);
    }
    {
        Deviation d;
        d.id = "a11-expansion";
        d.where = "expansion of representative A11";
        d.printed = "A11 = 2t d/dt +- d/dx + d/dx - 2H d/dH";
        d.derived = "A11 = +-Y2 + Y4 = 2t d/dt + (x +- 1) d/dx - 2H d/dH";
        d.note = "the duplicated d/dx inherits the Y4 x-slot misprint; the printed expansion "
                 "is not an equivalence generator";
        VectorField printed = VectorField::equivalence(num(2) * T(), num(2), num(0), num(0),
                                                       num(-2) * Hc());
        VectorField canonical = representative_field(11, {{1, 1}});
        d.confirmed = !verify_generator(printed, FieldKind::Equivalence).valid &&
                      verify_generator(canonical, FieldKind::Equivalence).valid;
        out.push_back(d);
    }
    return out;
}

// ---------------------------------------------------------------------------
// JSON emitters
// ---------------------------------------------------------------------------

Json json_vector_field(const VectorField& f, const std::string& name) {
    Json coeffs = Json::object();
    for (SymbolId c : f.coords()) {
        Expr e = f.coeff(c);
        if (!e.is_zero()) coeffs[syms().name(c)] = to_text(e);
    }
    return Json{{"name", name}, {"coefficients", coeffs}};
}

namespace {

Json basis_json(const std::vector<VectorField>& fields, const std::string& prefix) {
    Json arr = Json::array();
    for (std::size_t i = 0; i < fields.size(); ++i)
        arr.push_back(json_vector_field(fields[i], prefix + std::to_string(i + 1)));
    return arr;
}

Json deviations_json_inner() {
    Json arr = Json::array();
    for (const Deviation& d : known_deviations())
        arr.push_back(Json{{"id", d.id},
                           {"where", d.where},
                           {"printed", d.printed},
                           {"derived", d.derived},
                           {"note", d.note},
                           {"confirmed", d.confirmed}});
    return arr;
}

} // namespace

Json json_symmetries(int degree) {
    AnsatzSolution sol = solve_symmetries(FieldKind::Point, degree);
    Json j;
    j["stage"] = "symmetries";
    j["degree"] = degree;
    j["basis"] = basis_json(sol.basis, "X");
    j["tables"] = {{"dimension", sol.basis.size()},
                   {"rank", sol.system_rank},
                   {"ansatz_coefficients", sol.unknown_count}};
    j["deviations"] = Json::array();
    return j;
}

Json json_equivalence_basis(int degree) {
    const auto& alg = EquivalenceAlgebra::canonical();
    AnsatzSolution sol = solve_symmetries(FieldKind::Equivalence, degree);
    Json j;
    j["stage"] = "equivalence-algebra";
    j["degree"] = degree;
    std::vector<VectorField> canonical(alg.basis().begin(), alg.basis().end());
    j["basis"] = basis_json(canonical, "Y");
    bool span_ok = sol.basis.size() == 6;
    Json cob = Json::array();
    for (const VectorField& f : sol.basis) {
        try {
            Vec6 v = alg.expand(f);
            cob.push_back(vec_to_string(v));
        } catch (const NotClosed&) {
            span_ok = false;
        }
    }
    j["tables"] = {{"dimension", sol.basis.size()},
                   {"rank", sol.system_rank},
                   {"ansatz_coefficients", sol.unknown_count},
                   {"span_matches_canonical", span_ok},
                   {"solver_basis_in_canonical_coordinates", cob}};
    j["deviations"] = Json::array();
    return j;
}

Json json_commutator_table() {
    const auto& alg = EquivalenceAlgebra::canonical();
    Json table = Json::array();
    for (int i = 1; i <= 6; ++i) {
        Json row = Json::array();
        for (int jdx = 1; jdx <= 6; ++jdx) row.push_back(vec_to_string(alg.structure(i, jdx)));
        table.push_back(row);
    }
    std::vector<VectorField> canonical(alg.basis().begin(), alg.basis().end());
    Json j;
    j["stage"] = "commutator-table";
    j["basis"] = basis_json(canonical, "Y");
    j["tables"] = {{"commutator", table}};
    j["deviations"] = Json::array();
    return j;
}

Json json_adjoint_table() {
    const auto& alg = EquivalenceAlgebra::canonical();
    Json table = Json::array();
    for (int i = 1; i <= 6; ++i) {
        Json row = Json::array();
        for (int jdx = 1; jdx <= 6; ++jdx) {
            auto col = alg.adjoint_action(i, jdx);
            Json entry = Json::array();
            for (int k = 0; k < 6; ++k) entry.push_back(to_text(col[k].to_expr(syms().s_param)));
            row.push_back(entry);
        }
        table.push_back(row);
    }
    Json j;
    j["stage"] = "adjoint-table";
    j["basis"] = Json::array();
    j["tables"] = {{"adjoint", table}};
    j["deviations"] = Json::array();
    return j;
}

Json json_killing() {
    const auto& alg = EquivalenceAlgebra::canonical();
    RatMatrix k = alg.killing_matrix();
    Json mat = Json::array();
    for (auto& row : k.m) {
        Json r = Json::array();
        for (auto& q : row) r.push_back(to_string(q));
        mat.push_back(r);
    }
    bool closed_ok = true;
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> d(-5, 5);
    for (int trial = 0; trial < 20; ++trial) {
        Vec6 a{}, b{};
        for (int i = 0; i < 6; ++i) {
            a[i] = d(rng);
            b[i] = d(rng);
        }
        closed_ok = closed_ok &&
                    alg.killing_trace(a, b) == EquivalenceAlgebra::killing_closed(a, b);
    }
    Json j;
    j["stage"] = "killing-form";
    j["basis"] = Json::array();
    j["tables"] = {{"killing", mat},
                   {"rank", rank(k)},
                   {"closed_formula_matches", closed_ok},
                   {"kernel_contains_Y1_Y2_Y3",
                    k.m[0] == std::vector<Rational>(6, Rational(0)) &&
                        k.m[1] == std::vector<Rational>(6, Rational(0)) &&
                        k.m[2] == std::vector<Rational>(6, Rational(0))}};
    j["deviations"] = Json::array();
    return j;
}

Json json_flows() {
    const auto& alg = EquivalenceAlgebra::canonical();
    Json flows = Json::array();
    for (int i = 1; i <= 6; ++i) {
        Flow g = flow(alg, i);
        Json maps = Json::object();
        for (auto& c : g.components) maps[syms().name(c.coord)] = to_text(c.map);
        flows.push_back(Json{{"generator", g.name}, {"maps", maps}});
    }
    Json refl = Json::array();
    for (const Flow& r : reflections()) {
        Json maps = Json::object();
        for (auto& c : r.components) maps[syms().name(c.coord)] = to_text(c.map);
        refl.push_back(Json{{"name", r.name}, {"maps", maps}});
    }
    Json rules = Json::array();
    for (int i = 1; i <= 6; ++i) {
        SolutionRule r = transform_solution(alg, i);
        rules.push_back(Json{{"generator", i},
                             {"u", to_text(r.u_rule)},
                             {"Ebar", to_text(r.e_bar)},
                             {"Hbar", to_text(r.h_bar)},
                             {"verified", r.verified}});
    }
    Json j;
    j["stage"] = "flows";
    j["basis"] = Json::array();
    j["tables"] = {{"flows", flows}, {"reflections", refl}, {"solution_rules", rules}};
    j["deviations"] = Json::array();
    return j;
}

Json json_optimal_system() {
    Json reps = Json::array();
    for (int i = 1; i <= 29; ++i) {
        VectorField f = representative_field(i, {});
        const Pattern& p = optimal_patterns()[i - 1];
        Json slots = Json::array();
        for (int k = 0; k < 6; ++k) {
            switch (p.slots[k]) {
                case Slot::Zero: slots.push_back("0"); break;
                case Slot::One: slots.push_back("1"); break;
                case Slot::Sign: slots.push_back(p.print_sign_gap[k] ? "+-(print 1)" : "+-1"); break;
                case Slot::Param: slots.push_back(p.param_names[k]); break;
            }
        }
        reps.push_back(Json{{"index", i},
                            {"pattern", slots},
                            {"field", json_vector_field(f, "A" + std::to_string(i))}});
    }
    Json projections = Json::array();
    const auto& ztoa = z_to_a_map();
    for (std::size_t z = 0; z < ztoa.size(); ++z) {
        VectorField f = project_xueh(representative_field(ztoa[z].front(), {}));
        projections.push_back(Json{{"z_index", z + 1},
                                   {"a_indices", ztoa[z]},
                                   {"field", json_vector_field(f, "Z" + std::to_string(z + 1))}});
    }
    Json j;
    j["stage"] = "optimal-system";
    j["basis"] = Json::array();
    j["tables"] = {{"representatives", reps},
                   {"projections", projections},
                   {"a1_projects_to_zero", project_xueh(representative_field(1, {})).is_zero()}};
    j["deviations"] = Json::array();
    return j;
}

Json json_classification(const Bindings& bound) {
    Json rows = Json::array();
    for (const ClassificationEntry& e : classify_all(bound)) {
        Json r;
        r["row"] = e.printed_row;
        r["z_index"] = e.z_index;
        r["regime"] = e.regime;
        r["verified"] = e.verified;
        r["degenerate_detected"] = e.degenerate_detected;
        r["printed_special"] = e.printed_special;
        r["note"] = e.note;
        if (e.no_invariant) {
            r["no_invariant_equation"] = true;
        } else {
            r["lambda"] = to_text(*e.lambda);
            r["E"] = to_text(*e.e_form);
            r["H"] = to_text(*e.h_form);
            Json ops = Json::array();
            for (const VectorField& op : e.operators) ops.push_back(op.to_text());
            r["operators"] = ops;
            r["operators_display"] = e.operators_display;
        }
        rows.push_back(r);
    }
    Json j;
    j["stage"] = "classification";
    j["basis"] = Json::array();
    j["tables"] = {{"rows", rows}};
    j["deviations"] = Json::array();
    return j;
}

Json json_deviations() {
    Json j;
    j["stage"] = "deviations";
    j["basis"] = Json::array();
    j["tables"] = Json::object();
    j["deviations"] = deviations_json_inner();
    return j;
}

// ---------------------------------------------------------------------------
// verify-all
// ---------------------------------------------------------------------------

namespace {

bool golden_matches(const Json& computed, const std::string& dir, const std::string& name,
                    std::string& detail) {
    if (dir.empty()) return true;
    std::ifstream in(dir + "/" + name);
    if (!in) {
        detail += " [golden file " + name + " missing]";
        return false;
    }
    Json expected = Json::parse(in, nullptr, false);
    if (expected.is_discarded()) {
        detail += " [golden file " + name + " unreadable]";
        return false;
    }
    if (expected != computed) {
        detail += " [mismatch against golden " + name + "]";
        return false;
    }
    return true;
}

// the printed adjoint table, transcribed as ExpPoly matrices
ExpPolyMatrix expected_adjoint(int i) {
    auto one = ExpPoly::constant(1);
    ExpPolyMatrix m;
    for (int k = 0; k < 6; ++k) m.m[k][k] = one;
    auto lin = [](const Rational& q) { return ExpPoly::term(q, 1, 0); };
    auto ex = [](const Rational& lam) { return ExpPoly::term(1, 0, lam); };
    switch (i) {
        case 1:
            m.m[0][3] = lin(-2);  // Y4 -> Y4 - 2s Y1
            m.m[0][4] = lin(1);   // Y5 -> Y5 + s Y1
            break;
        case 2:
            m.m[1][3] = lin(-1);  // Y4 -> Y4 - s Y2
            break;
        case 3:
            m.m[2][5] = lin(-1);  // Y6 -> Y6 - s Y3
            break;
        case 4:
            m.m[0][0] = ex(2);  // e^{2s} Y1
            m.m[1][1] = ex(1);  // e^{s} Y2
            break;
        case 5:
            m.m[0][0] = ex(-1);  // e^{-s} Y1
            break;
        case 6:
            m.m[2][2] = ex(1);  // e^{s} Y3
            break;
    }
    return m;
}

bool adjoint_group_law(int i) {
    auto& S = syms();
    const auto& m = EquivalenceAlgebra::canonical().adjoint_matrix(i);
    Expr s = sym(S.s_param), r = sym(S.r_param);
    Bindings to_r, to_sum;
    to_r[s] = r;
    to_sum[s] = s + r;
    for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b) {
            std::vector<Expr> parts;
            for (int k = 0; k < 6; ++k)
                parts.push_back(m.m[a][k].to_expr(S.s_param) *
                                substitute(m.m[k][b].to_expr(S.s_param), to_r));
            Expr lhs = add(parts);
            Expr rhs = substitute(m.m[a][b].to_expr(S.s_param), to_sum);
            if (lhs != rhs) return false;
        }
    return true;
}

// the characteristic-route oracle for criterion 12
Expr char_route_second(const VectorField& y, int jt, int jx) {
    auto& S = syms();
    Expr d = characteristic(y);
    for (int k = 0; k < jt; ++k) d = total_derivative(d, S.t, 3);
    for (int k = 0; k < jx; ++k) d = total_derivative(d, S.x, 3);
    return d + y.coeff(S.t) * sym(S.jet(jt + 1, jx)) + y.coeff(S.x) * sym(S.jet(jt, jx + 1));
}

VectorField random_polynomial_generator(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> coef(-3, 3);
    auto rnd_poly = [&]() {
        std::vector<Expr> monos = {num(1),     T(),       X(),       U(),       T() * T(),
                                   T() * X(),  T() * U(), X() * X(), X() * U(), U() * U()};
        std::vector<Expr> parts;
        for (const Expr& m : monos) parts.push_back(num(coef(rng)) * m);
        return add(parts);
    };
    return VectorField::point(rnd_poly(), rnd_poly(), rnd_poly());
}

} // namespace

std::string default_golden_dir() {
    return HCE_GOLDEN_DIR;
}

VerifyAllResult run_verify_all(std::uint64_t seed, bool strict, const std::string& golden_dir,
                               int random_count) {
    VerifyAllResult result;
    result.strict = strict;
    auto& S = syms();
    const auto& alg = EquivalenceAlgebra::canonical();
    auto stage = [&](const std::string& name, bool pass, const std::string& detail = "") {
        result.stages.push_back({name, pass, detail});
    };

    // 1. point-symmetry kernel at degrees 0, 1, 2
    {
        bool ok = true;
        VectorField dt = VectorField::point(num(1), num(0), num(0));
        for (int deg : {0, 1, 2}) {
            AnsatzSolution sol = solve_symmetries(FieldKind::Point, deg);
            ok = ok && sol.basis.size() == 1 && sol.basis[0] == dt;
        }
        stage("01-point-kernel", ok, "L = span{d/dt} at degrees 0,1,2");
    }
    // 2. equivalence algebra
    {
        AnsatzSolution sol = solve_symmetries(FieldKind::Equivalence, 2);
        bool ok = sol.basis.size() == 6;
        RatMatrix solver_rows, canon_rows;
        for (const VectorField& f : sol.basis) {
            ok = ok && verify_generator(f, FieldKind::Equivalence).valid;
            try {
                Vec6 v = alg.expand(f);
                solver_rows.m.push_back(std::vector<Rational>(v.begin(), v.end()));
            } catch (const NotClosed&) {
                ok = false;
            }
        }
        for (int i = 1; i <= 6; ++i) {
            Vec6 e{};
            e[i - 1] = 1;
            canon_rows.m.push_back(std::vector<Rational>(e.begin(), e.end()));
            ok = ok && verify_generator(alg.Y(i), FieldKind::Equivalence).valid;
        }
        ok = ok && !solver_rows.m.empty() && same_row_space(solver_rows, canon_rows);
        stage("02-equivalence-algebra", ok, "6-dimensional, span equals canonical Y1..Y6");
    }
    // 3. structure table + properties
    {
        bool ok = true;
        auto expect = [&](int i, int j, Vec6 v) { ok = ok && alg.structure(i, j) == v; };
        Vec6 z{};
        auto e = [](int k, const Rational& q) {
            Vec6 v{};
            v[k - 1] = q;
            return v;
        };
        for (int i = 1; i <= 6; ++i)
            for (int j = 1; j <= 6; ++j) {
                Vec6 v = z;
                if (i == 1 && j == 4) v = e(1, 2);
                if (i == 1 && j == 5) v = e(1, -1);
                if (i == 2 && j == 4) v = e(2, 1);
                if (i == 3 && j == 6) v = e(3, 1);
                if (i == 4 && j == 1) v = e(1, -2);
                if (i == 5 && j == 1) v = e(1, 1);
                if (i == 4 && j == 2) v = e(2, -1);
                if (i == 6 && j == 3) v = e(3, -1);
                expect(i, j, v);
            }
        std::mt19937_64 rng(seed ^ 0x7ab1e1);
        std::uniform_int_distribution<int> d(-9, 9);
        std::uniform_int_distribution<int> den(1, 4);
        for (int trial = 0; trial < 100 && ok; ++trial) {
            Vec6 a{}, b{}, c{};
            for (int k = 0; k < 6; ++k) {
                a[k] = Rational(d(rng), den(rng));
                a[k].canonicalize();
                b[k] = Rational(d(rng), den(rng));
                b[k].canonicalize();
                c[k] = d(rng);
            }
            Vec6 ab = alg.bracket_vec(a, b), ba = alg.bracket_vec(b, a);
            for (int k = 0; k < 6; ++k) ok = ok && ab[k] == -ba[k];
            Vec6 jac{};
            Vec6 t1 = alg.bracket_vec(a, alg.bracket_vec(b, c));
            Vec6 t2 = alg.bracket_vec(b, alg.bracket_vec(c, a));
            Vec6 t3 = alg.bracket_vec(c, alg.bracket_vec(a, b));
            for (int k = 0; k < 6; ++k) ok = ok && t1[k] + t2[k] + t3[k] == 0;
        }
        stage("03-commutator-table", ok, "all 36 entries match the printed structure table; Jacobi/antisymmetry hold");
    }
    // 4. Killing form
    {
        bool ok = true;
        std::vector<Vec6> es(6);
        for (int i = 0; i < 6; ++i) es[i][i] = 1;
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j)
                ok = ok && alg.killing_trace(es[i], es[j]) ==
                               EquivalenceAlgebra::killing_closed(es[i], es[j]);
        RatMatrix k = alg.killing_matrix();
        ok = ok && rank(k) == 3;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 6; ++j) ok = ok && k.m[i][j] == 0 && k.m[j][i] == 0;
        stage("04-killing-form", ok, "trace form equals 5a4b4-2(a4b5+a5b4)+a5b5+a6b6; kernel holds Y1,Y2,Y3");
    }
    // 5. derived series
    {
        auto series = alg.derived_series();
        bool ok = series.size() >= 2 && series[0].rows() == 3 && series[1].rows() == 0;
        RatMatrix expected = RatMatrix::zero(3, 6);
        for (int i = 0; i < 3; ++i) expected.m[i][i] = 1;
        ok = ok && series[0].m == expected.m;
        stage("05-derived-series", ok, "L(1) = span{Y1,Y2,Y3}, L(2) = 0");
    }
    // 6. adjoint table + properties
    {
        bool ok = true;
        for (int i = 1; i <= 6; ++i) {
            const ExpPolyMatrix& m = alg.adjoint_matrix(i);
            ExpPolyMatrix want = expected_adjoint(i);
            for (int a = 0; a < 6; ++a)
                for (int b = 0; b < 6; ++b) ok = ok && m.m[a][b] == want.m[a][b];
            // group law and derivative at zero
            ok = ok && adjoint_group_law(i);
            Vec6 ei{};
            ei[i - 1] = 1;
            RatMatrix ad = alg.ad(ei);
            RatMatrix d0 = m.derivative().at_zero();
            for (int a = 0; a < 6; ++a)
                for (int b = 0; b < 6; ++b) ok = ok && d0.m[a][b] == -ad.m[a][b];
        }
        stage("06-adjoint-table", ok, "all 36 entries match the printed adjoint table; group law and d/ds at 0 hold");
    }
    // 7. flows and solution rules
    {
        bool ok = true;
        Expr s = Sp();
        std::array<std::array<Expr, 5>, 6> want;
        auto set = [&](int i, Expr t, Expr x, Expr u, Expr E, Expr H) {
            want[i - 1] = {t, x, u, E, H};
        };
        set(1, T() + s, X(), U(), Ec(), Hc());
        set(2, T(), X() + s, U(), Ec(), Hc());
        set(3, T(), X(), U() + s, Ec(), Hc());
        set(4, T() * exp_(num(2) * s), X() * exp_(s), U(), Ec(), Hc() * exp_(num(-2) * s));
        set(5, T() * exp_(-s), X(), U(), Ec() * exp_(s), Hc() * exp_(s));
        set(6, T(), X(), U() * exp_(s), Ec(), Hc() * exp_(s));
        std::array<SymbolId, 5> coords{S.t, S.x, S.u, S.E, S.H};
        for (int i = 1; i <= 6; ++i) {
            Flow g = flow(alg, i);
            for (int c = 0; c < 5; ++c) ok = ok && g.map_of(coords[c]) == want[i - 1][c];
            // flow at 0 is the identity; d/ds at 0 recovers the generator
            Bindings zero;
            zero[s] = num(0);
            for (int c = 0; c < 5; ++c) {
                ok = ok && substitute(g.map_of(coords[c]), zero) == sym(coords[c]);
                ok = ok && substitute(diff(g.map_of(coords[c]), S.s_param), zero) ==
                               alg.Y(i).coeff(coords[c]);
            }
            SolutionRule rule = transform_solution(alg, i);
            ok = ok && rule.verified;
        }
        stage("07-flows", ok, "six flows match the printed maps; six rules verify");
    }
    // 8. optimal-system normalizer
    {
        OptimalListReport rep = verify_optimal_list(seed, random_count);
        bool ok = rep.ok() && rep.vectors_checked >= random_count + 58;
        for (int i = 1; i <= 29; ++i) ok = ok && rep.reached[i] > 0;
        stage("08-optimal-system", ok,
              std::to_string(rep.vectors_checked) + " vectors normalize with exact words");
    }
    // 9. projections
    {
        OptimalListReport rep = verify_optimal_list(seed, 0);
        stage("09-projections", rep.projections_ok,
              "printed A->Z correspondence reproduced; A1 projects to zero");
    }
    // 10. classification table
    {
        auto rows = classify_all();
        bool ok = rows.size() == 38;
        int printed_rows = 0, no_inv = 0;
        for (const auto& e : rows) {
            ok = ok && e.verified;
            if (e.printed_row > 0) ++printed_rows;
            if (e.no_invariant) ++no_inv;
        }
        ok = ok && printed_rows == 37 && no_inv == 1;
        // machine-detected degeneracies match the printed degenerate regimes
        auto degs = detected_degeneracies();
        ok = ok && degs.size() == 10;
        std::string detail = "37 rows regenerate and verify; Z4 yields no invariant equation";
        ok = ok && golden_matches(json_classification(), golden_dir, "classification.json", detail);
        stage("10-classification", ok, detail);
    }
    // 11. deviations ledger
    {
        result.deviations = known_deviations();
        bool ok = result.deviations.size() == 5;
        for (const Deviation& d : result.deviations) ok = ok && d.confirmed;
        std::string detail;
        ok = ok && golden_matches(json_deviations(), golden_dir, "deviations.json", detail);
        stage("11-deviations", ok,
              strict ? "strict mode: allowlist disabled, misprints count as failures"
                     : "exactly the five known misprints, all machine-confirmed" + detail);
    }
    // 12. oracle equivalence of the two prolongation routes
    {
        bool ok = true;
        std::mt19937_64 rng(seed ^ 0xabcde1);
        for (int trial = 0; trial < 50 && ok; ++trial) {
            VectorField y = random_polynomial_generator(rng);
            ProlongedField p = prolong2(y);
            ok = ok && p.jet_coeffs.at(S.jet(2, 0)) == char_route_second(y, 2, 0);
            ok = ok && p.jet_coeffs.at(S.jet(1, 1)) == char_route_second(y, 1, 1);
            ok = ok && p.jet_coeffs.at(S.jet(0, 2)) == char_route_second(y, 0, 2);
        }
        stage("12-prolongation-oracle", ok,
              "characteristic route agrees with the iterated rule on 50 random generators");
    }

    // golden pinning for the remaining stages
    {
        std::string detail;
        bool ok = true;
        ok = golden_matches(json_commutator_table(), golden_dir, "commutator_table.json", detail) && ok;
        ok = golden_matches(json_adjoint_table(), golden_dir, "adjoint_table.json", detail) && ok;
        ok = golden_matches(json_killing(), golden_dir, "killing.json", detail) && ok;
        ok = golden_matches(json_flows(), golden_dir, "flows.json", detail) && ok;
        ok = golden_matches(json_optimal_system(), golden_dir, "optimal_system.json", detail) && ok;
        ok = golden_matches(json_equivalence_basis(2), golden_dir, "equivalence_basis.json", detail) && ok;
        ok = golden_matches(json_symmetries(2), golden_dir, "symmetries.json", detail) && ok;
        stage("13-golden-files", ok, detail.empty() ? "all stage outputs match the golden files" : detail);
    }
    return result;
}

// ---------------------------------------------------------------------------
// text / latex rendering
// ---------------------------------------------------------------------------

std::string render_text(const Json& j) {
    std::ostringstream out;
    std::string stage = j.value("stage", "");
    out << "== " << stage << " ==\n";
    if (j.contains("basis") && j["basis"].is_array() && !j["basis"].empty()) {
        for (const auto& b : j["basis"]) {
            out << "  " << b["name"].get<std::string>() << " =";
            for (auto& [coord, expr] : b["coefficients"].items())
                out << "  (" << expr.get<std::string>() << ") d/d" << coord;
            out << "\n";
        }
    }
    if (stage == "commutator-table") {
        out << "  [Yi,Yj] coefficient vectors over Y1..Y6:\n";
        int i = 1;
        for (const auto& row : j["tables"]["commutator"]) {
            out << "  Y" << i++ << ": ";
            for (const auto& e : row) out << "(" << e.get<std::string>() << ") ";
            out << "\n";
        }
    } else if (stage == "adjoint-table") {
        int i = 1;
        for (const auto& row : j["tables"]["adjoint"]) {
            out << "  Ad(exp(s Y" << i << ")):\n";
            for (int col = 0; col < 6; ++col) {
                out << "    Y" << col + 1 << " -> ";
                bool first = true;
                for (int k = 0; k < 6; ++k) {
                    std::string c = row[col][k].get<std::string>();
                    if (c == "0") continue;
                    if (!first) out << " + ";
                    out << "[" << c << "] Y" << k + 1;
                    first = false;
                }
                out << "\n";
            }
            ++i;
        }
    } else if (stage == "killing-form") {
        for (const auto& row : j["tables"]["killing"]) {
            out << "  ";
            for (const auto& e : row) out << e.get<std::string>() << " ";
            out << "\n";
        }
        out << "  rank " << j["tables"]["rank"] << ", closed formula matches: "
            << j["tables"]["closed_formula_matches"] << "\n";
    } else if (stage == "flows") {
        for (const auto& f : j["tables"]["flows"]) {
            out << "  " << f["generator"].get<std::string>() << ": ";
            for (auto& [c, m] : f["maps"].items()) out << c << " -> " << m.get<std::string>() << "  ";
            out << "\n";
        }
        out << "  solution rules:\n";
        for (const auto& r : j["tables"]["solution_rules"])
            out << "    u" << r["generator"] << " = " << r["u"].get<std::string>()
                << "   Ebar = " << r["Ebar"].get<std::string>()
                << "   Hbar = " << r["Hbar"].get<std::string>()
                << "   verified=" << r["verified"] << "\n";
    } else if (stage == "optimal-system") {
        for (const auto& r : j["tables"]["representatives"]) {
            out << "  A" << r["index"] << ": pattern [";
            bool first = true;
            for (const auto& s : r["pattern"]) {
                if (!first) out << ", ";
                out << s.get<std::string>();
                first = false;
            }
            out << "]\n";
        }
    } else if (stage == "projections") {
        for (const auto& p : j["tables"]["projections"]) {
            out << "  Z" << p["z_index"] << " = proj(";
            for (const auto& a : p["a_indices"]) out << "A" << a << " ";
            out << ") =";
            for (auto& [coord, expr] : p["field"]["coefficients"].items())
                out << "  (" << expr.get<std::string>() << ") d/d" << coord;
            out << "\n";
        }
    } else if (stage == "classification") {
        for (const auto& r : j["tables"]["rows"]) {
            if (r["row"].get<int>() == 0)
                out << "  --  [Z" << r["z_index"] << "] no invariant equation\n";
            else {
                out << "  row " << r["row"] << " [Z" << r["z_index"] << ", "
                    << r["regime"].get<std::string>() << "]\n"
                    << "      lambda = " << r["lambda"].get<std::string>() << "\n"
                    << "      E = " << r["E"].get<std::string>() << "\n"
                    << "      H = " << r["H"].get<std::string>() << "\n"
                    << "      X(2) = " << r["operators_display"].get<std::string>() << "\n"
                    << "      verified: " << r["verified"] << "\n";
            }
        }
    } else if (stage == "deviations") {
        for (const auto& d : j["deviations"])
            out << "  " << d["id"].get<std::string>() << " (" << d["where"].get<std::string>()
                << ")\n    printed: " << d["printed"].get<std::string>()
                << "\n    derived: " << d["derived"].get<std::string>()
                << "\n    confirmed: " << d["confirmed"] << "\n";
    } else if (stage == "symmetries" || stage == "equivalence-algebra") {
        out << "  dimension " << j["tables"]["dimension"] << ", rank " << j["tables"]["rank"]
            << "/" << j["tables"]["ansatz_coefficients"] << "\n";
        if (j["tables"].contains("span_matches_canonical"))
            out << "  span matches canonical basis: " << j["tables"]["span_matches_canonical"]
                << "\n";
    }
    return out.str();
}

std::string render_latex(const Json& j) {
    std::ostringstream out;
    std::string stage = j.value("stage", "");
    if (stage == "classification") {
        out << "% N & Z & invariant & equation & additional operator\n";
        for (const auto& r : j["tables"]["rows"]) {
            if (r["row"].get<int>() == 0) continue;
            Expr lam = parse_expr(r["lambda"].get<std::string>());
            Expr e = parse_expr(r["E"].get<std::string>());
            Expr h = parse_expr(r["H"].get<std::string>());
            std::string ops = r["operators_display"].get<std::string>();
            auto replace_all = [](std::string s, const std::string& from, const std::string& to) {
                for (std::size_t p = 0; (p = s.find(from, p)) != std::string::npos; p += to.size())
                    s.replace(p, from.size(), to);
                return s;
            };
            ops = replace_all(ops, "+-", "\\pm ");
            for (const char* c : {"t", "x", "u"})
                ops = replace_all(ops, std::string("d/d") + c,
                                  std::string("\\partial_") + c);
            ops = replace_all(ops, "*", "\\,");
            out << r["row"] << " & Z^{" << r["z_index"] << "} & $" << to_latex(lam)
                << "$ & $u_t=[" << to_latex(e) << "\\,u_x]_x+" << to_latex(h) << "$ & $"
                << ops << "$ \\\\\n";
        }
        return out.str();
    }
    if (stage == "commutator-table") {
        for (const auto& row : j["tables"]["commutator"]) {
            bool first = true;
            for (const auto& e : row) {
                if (!first) out << " & ";
                out << e.get<std::string>();
                first = false;
            }
            out << " \\\\\n";
        }
        return out.str();
    }
    // default: pretty-printed JSON inside a verbatim block
    out << "\\begin{verbatim}\n" << j.dump(2) << "\n\\end{verbatim}\n";
    return out.str();
}

} // namespace hce
