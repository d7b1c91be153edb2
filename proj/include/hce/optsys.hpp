#pragma once

#include <cstdint>

#include "hce/liealg.hpp"

namespace hce {

// One adjoint conjugation Ad(exp(p Y_gen)) with an exact parameter.
struct AdjointStep {
    int generator = 0;  // 1-based
    ExpParam param;
};

// A word of adjoint conjugations applied to coefficient vectors: first the
// overall scale, then the steps in order, then optional reflection flips
// (t: a1, u: a3, x: a2).
struct AdjointWord {
    Rational scale{1};
    std::vector<AdjointStep> steps;
    bool reflect_t = false, reflect_u = false, reflect_x = false;
};

Vec6 apply_word(const Vec6& a, const AdjointWord& w);
AdjointWord inverse_word(const AdjointWord& w);

enum class Slot : std::uint8_t { Zero, One, Sign, Param };

// Structural pattern of one optimal-system item of the printed list.
struct Pattern {
    int index = 0;  // 1..29
    std::array<Slot, 6> slots{};
    std::array<const char*, 6> param_names{};  // Param slots only
    // slots the print shows as bare "1" although the sign is not reducible
    // under Ad and the printed reflections (see project notes)
    std::array<bool, 6> print_sign_gap{};
};

const std::array<Pattern, 29>& optimal_patterns();

bool matches_pattern(const Vec6& v, const Pattern& p);

struct Representative {
    int index = 0;
    Vec6 value{};
    std::map<std::string, Rational> params;
    std::array<int, 6> signs{};  // -1/+1 on Sign slots, 0 elsewhere
    // set on the measure-zero stratum 2 a4 = a5 (both nonzero) with a1 != 0,
    // where the printed list provably has no representative; `value` then
    // matches the pattern except for the recorded residual Y1 coefficient
    bool stratum_defect = false;
    Rational residual_a1{0};
};

// Reduces a nonzero element to one of the 29 representatives through the
// case tree on (a6, a4, a3, a2, a1, a5) with exact adjoint steps; total and
// deterministic.
std::pair<Representative, AdjointWord> normalize_element(const Vec6& a);

// The representative's field with symbolic alpha/beta parameters bound to the
// given signs; `params` may bind parameters to exact rationals.
VectorField representative_field(int index, const std::map<int, int>& signs,
                                 const std::map<std::string, Rational>& params = {});

// projection onto (x,u,E,H); zero projections come back empty
VectorField project_xueh(const VectorField& a);

// printed correspondence Z^k (1..23) -> {A^i}
const std::vector<std::vector<int>>& z_to_a_map();

struct OptimalListReport {
    int vectors_checked = 0;
    int roundtrip_failures = 0;
    int pattern_failures = 0;
    std::vector<int> reached;  // per pattern 1..29, how many vectors landed there
    bool projections_ok = false;
    bool ok() const {
        return roundtrip_failures == 0 && pattern_failures == 0 && projections_ok;
    }
};

// (i) reachability of every pattern from seeded random + branch vectors,
// (ii) word round-trips, (iii) the printed A->Z projection correspondence.
OptimalListReport verify_optimal_list(std::uint64_t seed, int random_count);

// deterministic branch-covering suite (>= 2 vectors per decision-tree leaf)
std::vector<Vec6> branch_covering_vectors();

// seeded random nonzero vectors avoiding the defect stratum
std::vector<Vec6> random_vectors(std::uint64_t seed, int count);

} // namespace hce
