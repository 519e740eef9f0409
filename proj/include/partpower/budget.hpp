#pragma once

#include <cstdint>

#include "partpower/planning.hpp"

namespace partpower {

// A fixed honest-set budget together with every design parameter except the
// one being solved for (that field of `design` is ignored).
struct BudgetSpec {
    std::int64_t honest_budget = 0;
    PlanningSpec design;
};

struct InversionResult {
    double solved_value = 0.0;
    bool feasible = false;
    // Sufficient raw cell size at the solved value (at the first candidate
    // when infeasible).
    double binding_bound = 0.0;
};

// Largest K or L scanned before giving up with a ConfigError.
inline constexpr std::int64_t kSearchCeiling = 10'000;

// Equal-split cell budget floor(n_S / (K*L)).
std::int64_t cell_budget(std::int64_t honest_budget, std::int64_t arms, std::int64_t leaves);

// True when the equal-split cell budget meets the sufficient cell size.
bool fits_budget(std::int64_t honest_budget, const PlanningSpec& spec);

InversionResult max_arms(const BudgetSpec& budget);
InversionResult max_leaves(const BudgetSpec& budget);

// Largest confidence 1-alpha whose sufficient size fits the cell budget,
// rounded down and clamped at 1 - 1e-12.
InversionResult sup_confidence(const BudgetSpec& budget);

// Smallest epsilon whose sufficient size fits the cell budget, rounded up.
// Closed form for Clt and Hoeffding; bisection for Bennett.
InversionResult inf_epsilon(const BudgetSpec& budget);

inline constexpr double kConfidenceCeiling = 1.0 - 1e-12;
inline constexpr double kEpsilonTolerance = 1e-10;

}  // namespace partpower
