#include "partpower/budget.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "partpower/errors.hpp"
#include "partpower/math_kernel.hpp"

namespace partpower {

std::int64_t cell_budget(std::int64_t honest_budget, std::int64_t arms, std::int64_t leaves) {
    if (arms < 1 || leaves < 1) {
        throw ConfigError("cell budget needs at least one arm and one leaf");
    }
    if (honest_budget < 0) {
        throw ConfigError("honest budget must be nonnegative");
    }
    return honest_budget / arms / leaves;
}

bool fits_budget(std::int64_t honest_budget, const PlanningSpec& spec) {
    const std::int64_t per_cell = cell_budget(honest_budget, spec.arms, spec.leaves);
    if (per_cell < 1) {
        return false;
    }
    return ceil_with_slack(raw_cell_bound(spec)) <= per_cell;
}

namespace {

void check_budget(const BudgetSpec& budget) {
    if (budget.honest_budget < 1) {
        throw ConfigError("honest budget must be a positive integer");
    }
}

// Upward scan over a down-set; `set` writes the candidate into the spec.
template <typename Setter>
InversionResult scan_up(const BudgetSpec& budget, Setter set, const char* what) {
    check_budget(budget);
    PlanningSpec spec = budget.design;
    InversionResult result;
    for (std::int64_t candidate = 1; candidate <= kSearchCeiling; ++candidate) {
        set(spec, candidate);
        const double raw = raw_cell_bound(spec);
        if (!fits_budget(budget.honest_budget, spec)) {
            if (candidate == 1) {
                result.binding_bound = raw;
            }
            return result;
        }
        result.feasible = true;
        result.solved_value = static_cast<double>(candidate);
        result.binding_bound = raw;
    }
    std::ostringstream msg;
    msg << "max " << what << " exceeds the search ceiling of " << kSearchCeiling;
    throw ConfigError(msg.str());
}

std::int64_t require_cell_budget(const BudgetSpec& budget, const PlanningSpec& spec) {
    check_budget(budget);
    validate(spec);
    const std::int64_t per_cell = cell_budget(budget.honest_budget, spec.arms, spec.leaves);
    if (per_cell < 1) {
        throw ConfigError("cell budget n_S/(K*L) is below one observation");
    }
    return per_cell;
}

// Per-cell miss probability bound achieved with n observations per cell at
// the spec's epsilon; the joint confidence is (1 - alpha0)^(1/exponent).
// Returns the joint confidence directly.
double achieved_confidence(const PlanningSpec& spec, double n) {
    const double eps = spec.epsilon;
    const double cells = split_count(spec);
    double alpha0 = 0.0;
    switch (spec.method.kind) {
        case MethodKind::Clt: {
            const double t = eps * std::sqrt(n / *spec.sigma_sq);
            if (spec.method.clt_variant == CltVariant::OneSidedProposition) {
                // Phi(t)^cells; normal_cdf(-t) is the accurate tail.
                return std::exp(cells * std::log1p(-normal_cdf(-t)));
            }
            alpha0 = 2.0 * normal_cdf(-t);
            break;
        }
        case MethodKind::Hoeffding: {
            const double width = spec.bounds->hi - spec.bounds->lo;
            alpha0 = 2.0 * std::exp(-2.0 * n * eps * eps / (width * width));
            break;
        }
        case MethodKind::Bennett: {
            const double s2 = *spec.sigma_sq;
            const double magnitude = std::max(std::fabs(spec.bounds->lo), std::fabs(spec.bounds->hi));
            const double s = eps * magnitude / s2;
            alpha0 = 2.0 * std::exp(-n * s2 * bennett_h(s) / (magnitude * magnitude));
            break;
        }
    }
    if (alpha0 >= 1.0) {
        return 0.0;
    }
    return std::exp(cells * std::log1p(-alpha0));
}

}  // namespace

InversionResult max_arms(const BudgetSpec& budget) {
    return scan_up(budget, [](PlanningSpec& s, std::int64_t k) { s.arms = k; }, "arms");
}

InversionResult max_leaves(const BudgetSpec& budget) {
    if (budget.design.scope == GuaranteeScope::UniformOverLeaves) {
        return scan_up(budget, [](PlanningSpec& s, std::int64_t l) { s.leaves = l; }, "leaves");
    }
    // The sufficient size does not depend on L here, so solve directly.
    check_budget(budget);
    PlanningSpec spec = budget.design;
    spec.leaves = 1;
    const double raw = raw_cell_bound(spec);
    const std::int64_t needed = ceil_with_slack(raw);
    InversionResult result;
    result.binding_bound = raw;
    const std::int64_t leaves = budget.honest_budget / (spec.arms * needed);
    if (leaves >= 1) {
        result.feasible = true;
        result.solved_value = static_cast<double>(leaves);
    }
    return result;
}

InversionResult sup_confidence(const BudgetSpec& budget) {
    PlanningSpec spec = budget.design;
    spec.alpha = 0.5;  // solved for; placeholder passes validation
    const std::int64_t per_cell = require_cell_budget(budget, spec);
    InversionResult result;

    double confidence = achieved_confidence(spec, static_cast<double>(per_cell));
    confidence = std::min(confidence, kConfidenceCeiling);
    if (!(confidence > 0.0)) {
        return result;
    }
    // Round down until the sufficient size at this confidence fits.
    for (int nudge = 0; nudge < 64; ++nudge) {
        spec.alpha = 1.0 - confidence;
        if (spec.alpha > 0.0 && spec.alpha < 1.0 && fits_budget(budget.honest_budget, spec)) {
            result.feasible = true;
            result.solved_value = confidence;
            result.binding_bound = raw_cell_bound(spec);
            return result;
        }
        confidence -= 1e-12 * static_cast<double>(1 << std::min(nudge, 20));
        if (!(confidence > 0.0)) {
            break;
        }
    }
    return result;
}

InversionResult inf_epsilon(const BudgetSpec& budget) {
    PlanningSpec spec = budget.design;
    spec.epsilon = 1.0;  // solved for; placeholder passes validation
    const std::int64_t per_cell = require_cell_budget(budget, spec);
    const double n = static_cast<double>(per_cell);
    const double alpha0 = per_cell_alpha(spec);
    InversionResult result;

    double eps = 0.0;
    switch (spec.method.kind) {
        case MethodKind::Clt: {
            const double sigma = std::sqrt(*spec.sigma_sq);
            const double z = spec.method.clt_variant == CltVariant::TwoSidedLemma
                                 ? -normal_quantile(alpha0 / 2.0)
                                 : std::max(0.0, -normal_quantile(alpha0));
            eps = z * sigma / std::sqrt(n);
            break;
        }
        case MethodKind::Hoeffding: {
            const double width = spec.bounds->hi - spec.bounds->lo;
            eps = std::sqrt(std::log(2.0 / alpha0) * width * width / (2.0 * n));
            break;
        }
        case MethodKind::Bennett: {
            auto excess = [&](double e) {
                PlanningSpec trial = spec;
                trial.epsilon = e;
                return raw_cell_bound(trial) - n;
            };
            double hi = spec.bounds->hi - spec.bounds->lo;
            for (int grow = 0; grow < 64 && excess(hi) > 0.0; ++grow) {
                hi *= 2.0;
            }
            eps = bisect(excess, BracketedRoot{1e-12, hi, kEpsilonTolerance, 200});
            break;
        }
    }
    if (!(eps > 0.0)) {
        // Only reachable for the one-sided normal bound with confidence at or
        // below one half per cell: every positive margin already qualifies.
        result.feasible = true;
        result.solved_value = 0.0;
        result.binding_bound = 0.0;
        return result;
    }
    // Round up until the sufficient size at this margin fits.
    for (int nudge = 0; nudge < 64; ++nudge) {
        spec.epsilon = eps;
        if (fits_budget(budget.honest_budget, spec)) {
            result.feasible = true;
            result.solved_value = eps;
            result.binding_bound = raw_cell_bound(spec);
            return result;
        }
        eps += kEpsilonTolerance * static_cast<double>(1 << std::min(nudge, 20));
    }
    throw ConvergenceError("inf_epsilon: could not round the margin of error to a feasible value");
}

}  // namespace partpower
