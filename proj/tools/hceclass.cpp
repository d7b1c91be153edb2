// Command-line surface: group analysis of u_t = [E(x,u) u_x]_x + H(x,u).

#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "hce/expr_io.hpp"
#include "hce/report.hpp"

using namespace hce;

namespace {

int emit(const Json& j, const std::string& format) {
    if (format == "json")
        std::cout << j.dump(2) << "\n";
    else if (format == "latex")
        std::cout << render_latex(j);
    else
        std::cout << render_text(j);
    return 0;
}

std::uint64_t seed_from_env() {
    if (const char* env = std::getenv("HCECLASS_SEED")) {
        try {
            return std::stoull(env);
        } catch (...) {
            throw CLI::ValidationError("HCECLASS_SEED", "must be a decimal integer");
        }
    }
    return 20260809ULL;
}

Bindings parse_param_bindings(const std::vector<std::string>& assignments) {
    Bindings b;
    for (const std::string& a : assignments) {
        auto eq = a.find('=');
        if (eq == std::string::npos)
            throw CLI::ValidationError("--param", "expected name=p/q, got '" + a + "'");
        std::string name = a.substr(0, eq);
        if (!syms().has_symbol(name))
            throw CLI::ValidationError("--param", "unknown parameter '" + name + "'");
        b[sym(syms().lookup(name))] = num(parse_rational(a.substr(eq + 1)));
    }
    return b;
}

Vec6 parse_vector(const std::string& text) {
    Vec6 v{};
    std::size_t pos = 0;
    for (int i = 0; i < 6; ++i) {
        std::size_t comma = text.find(',', pos);
        std::string piece =
            comma == std::string::npos ? text.substr(pos) : text.substr(pos, comma - pos);
        v[i] = parse_rational(piece);
        if (comma == std::string::npos && i < 5)
            throw CLI::ValidationError("--vector", "expected six comma-separated rationals");
        pos = comma + 1;
    }
    return v;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lie symmetry group classification of u_t = [E(x,u) u_x]_x + H(x,u)"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string format = "text";
    app.add_option("--format", format, "output format")
        ->check(CLI::IsMember({"text", "json", "latex"}))
        ->capture_default_str();

    int degree = 2;
    std::vector<std::string> params;
    std::string vector_arg;
    int z_index = 4;
    bool strict = false;
    int random_count = 1000;
    std::string golden_dir = default_golden_dir();

    auto* sym_cmd = app.add_subcommand("symmetries", "point-symmetry kernel of the class");
    sym_cmd->add_option("--degree", degree, "polynomial ansatz degree")->capture_default_str();

    auto* equiv_cmd = app.add_subcommand("equivalence-algebra", "equivalence algebra basis");
    equiv_cmd->add_option("--degree", degree, "polynomial ansatz degree")->capture_default_str();

    app.add_subcommand("commutator-table", "structure table of the equivalence algebra");
    app.add_subcommand("adjoint-table", "adjoint actions Ad(exp(s Y_i))");
    app.add_subcommand("killing-form", "Killing form matrix and degeneracy");
    app.add_subcommand("flows", "one-parameter flows, reflections, solution rules");
    app.add_subcommand("optimal-system", "the 29 one-dimensional representatives");

    auto* norm_cmd = app.add_subcommand("normalize", "normalize an algebra element");
    norm_cmd->add_option("--vector", vector_arg, "six comma-separated rational coefficients")
        ->required();

    auto* inv_cmd = app.add_subcommand("invariants", "invariants of a projected generator");
    inv_cmd->add_option("--z", z_index, "projection index 1..23")
        ->check(CLI::Range(1, 23))
        ->capture_default_str();
    inv_cmd->add_option("--param", params, "bind a parameter, e.g. alpha2=1/2")->take_all();

    auto* cls_cmd = app.add_subcommand("classify", "regenerate the classification table");
    cls_cmd->add_option("--param", params, "bind a parameter, e.g. alpha2=1/2")->take_all();

    auto* ver_cmd = app.add_subcommand("verify-all", "run every acceptance criterion");
    ver_cmd->add_flag("--strict", strict, "disable the misprint allowlist");
    ver_cmd->add_option("--random", random_count, "random vectors for the optimal-system suite")
        ->capture_default_str();
    ver_cmd->add_option("--golden-dir", golden_dir, "golden file directory")
        ->capture_default_str();

    try {
        app.parse(argc, argv);

        if (sym_cmd->parsed()) return emit(json_symmetries(degree), format);
        if (equiv_cmd->parsed()) return emit(json_equivalence_basis(degree), format);
        if (app.got_subcommand("commutator-table")) return emit(json_commutator_table(), format);
        if (app.got_subcommand("adjoint-table")) return emit(json_adjoint_table(), format);
        if (app.got_subcommand("killing-form")) return emit(json_killing(), format);
        if (app.got_subcommand("flows")) return emit(json_flows(), format);
        if (app.got_subcommand("optimal-system")) return emit(json_optimal_system(), format);

        if (norm_cmd->parsed()) {
            Vec6 a = parse_vector(vector_arg);
            auto [rep, word] = normalize_element(a);
            Json steps = Json::array();
            for (const AdjointStep& st : word.steps)
                steps.push_back(Json{{"generator", st.generator},
                                     {"parameter", (st.param.is_log ? "ln(" : "") +
                                                       to_string(st.param.value) +
                                                       (st.param.is_log ? ")" : "")}});
            Json params_json = Json::object();
            for (auto& [k, v] : rep.params) params_json[k] = to_string(v);
            Json value = json_vector_field(EquivalenceAlgebra::canonical().field_of(rep.value),
                                           "A" + std::to_string(rep.index));
            Json j;
            j["stage"] = "normalize";
            j["basis"] = Json::array();
            j["tables"] = {{"input", vector_arg},
                           {"representative", rep.index},
                           {"value", value},
                           {"parameters", params_json},
                           {"scale", to_string(word.scale)},
                           {"steps", steps},
                           {"stratum_defect", rep.stratum_defect}};
            j["deviations"] = Json::array();
            if (format == "text") {
                std::cout << "representative A" << rep.index << "\n  field "
                          << EquivalenceAlgebra::canonical().field_of(rep.value).to_text()
                          << "\n  scale " << to_string(word.scale) << ", " << word.steps.size()
                          << " adjoint steps\n";
                for (auto& [k, v] : rep.params) std::cout << "  " << k << " = " << to_string(v) << "\n";
                if (rep.stratum_defect)
                    std::cout << "  NOTE: 2 a4 = a5 stratum; the printed list has no class for "
                                 "the residual Y1 component\n";
                return 0;
            }
            return emit(j, format);
        }

        if (inv_cmd->parsed()) {
            Bindings bound = parse_param_bindings(params);
            int a_first = z_to_a_map()[z_index - 1].front();
            VectorField proj = project_xueh(representative_field(a_first, {}));
            VectorField zf({proj.coords(), {}});
            for (SymbolId c : proj.coords()) zf.set_coeff(c, substitute(proj.coeff(c), bound));
            InvariantSet inv = invariants_of(zf);
            Json t;
            t["z_index"] = z_index;
            t["field"] = json_vector_field(zf, "Z" + std::to_string(z_index));
            t["I1"] = to_text(inv.I1);
            t["I2"] = to_text(inv.I2);
            t["I3"] = to_text(inv.I3);
            auto rec = reconstruct_equation(inv);
            if (std::holds_alternative<NoInvariantEquation>(rec)) {
                t["no_invariant_equation"] = true;
            } else {
                const Family& fam = std::get<Family>(rec);
                t["lambda"] = to_text(fam.lambda);
                t["E"] = to_text(fam.e_form);
                t["H"] = to_text(fam.h_form);
            }
            Json j;
            j["stage"] = "invariants";
            j["basis"] = Json::array();
            j["tables"] = t;
            j["deviations"] = Json::array();
            if (format == "text") {
                auto str = [&](const char* key) { return t[key].get<std::string>(); };
                std::cout << "Z" << z_index << " = " << zf.to_text() << "\n  I1 = " << str("I1")
                          << "\n  I2 = " << str("I2") << "\n  I3 = " << str("I3") << "\n";
                if (t.contains("no_invariant_equation"))
                    std::cout << "  no invariant equation (Z4 shape)\n";
                else
                    std::cout << "  lambda = " << str("lambda") << "\n  E = " << str("E")
                              << "\n  H = " << str("H") << "\n";
                return 0;
            }
            return emit(j, format);
        }

        if (cls_cmd->parsed())
            return emit(json_classification(parse_param_bindings(params)), format);

        if (ver_cmd->parsed()) {
            VerifyAllResult res = run_verify_all(seed_from_env(), strict, golden_dir, random_count);
            bool all_stages = true;
            for (const StageResult& st : res.stages) {
                all_stages = all_stages && st.pass;
                std::cout << (st.pass ? "PASS " : "FAIL ") << st.name;
                if (!st.detail.empty()) std::cout << "  -- " << st.detail;
                std::cout << "\n";
            }
            std::cout << "deviations (" << res.deviations.size() << "):\n";
            for (const Deviation& d : res.deviations)
                std::cout << "  " << (d.confirmed ? "confirmed " : "UNCONFIRMED ") << d.id
                          << ": printed \"" << d.printed << "\" vs derived \"" << d.derived
                          << "\"\n";
            if (strict) {
                std::cerr << "strict mode: known misprints are counted as failures\n";
                return 1;
            }
            return all_stages ? 0 : 1;
        }
        return 2;
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);  // prints the message
        return code == 0 ? 0 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
