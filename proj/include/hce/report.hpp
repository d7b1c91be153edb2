#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "hce/invclass.hpp"

namespace hce {

using Json = nlohmann::json;

// A divergence between the printed source tables and the derived results,
// re-detected by a machine check at runtime (never hardcoded as "trust me").
struct Deviation {
    std::string id;
    std::string where;
    std::string printed;
    std::string derived;
    std::string note;
    bool confirmed = false;  // the machine check fired as expected
};

// The five known misprints shipped in the allowlist.
std::vector<Deviation> known_deviations();

// --- JSON emitters (pinned schema: {stage, basis, tables, deviations}) ---
Json json_vector_field(const VectorField& f, const std::string& name);
Json json_symmetries(int degree);
Json json_equivalence_basis(int degree);
Json json_commutator_table();
Json json_adjoint_table();
Json json_killing();
Json json_flows();
Json json_optimal_system();
Json json_classification(const Bindings& bound = {});
Json json_deviations();

// --- verify-all ---
struct StageResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct VerifyAllResult {
    std::vector<StageResult> stages;
    std::vector<Deviation> deviations;
    bool strict = false;

    bool pass() const {
        for (const auto& s : stages)
            if (!s.pass) return false;
        if (strict) return false;  // strict mode refuses the allowlist
        return true;
    }
};

// Runs the twelve acceptance criteria; golden comparisons are made against
// the files in `golden_dir` when non-empty.
VerifyAllResult run_verify_all(std::uint64_t seed, bool strict,
                               const std::string& golden_dir = HCE_GOLDEN_DIR,
                               int random_count = 1000);

std::string default_golden_dir();

// --- text rendering helpers for the CLI ---
std::string render_text(const Json& stage_json);
std::string render_latex(const Json& stage_json);

} // namespace hce
