#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "partpower/math_kernel.hpp"

namespace partpower {

// Which event the sample size must guarantee: accuracy at one random test
// point (confidence split over K arms) or accuracy simultaneously over every
// leaf (split over K*L cells).
enum class GuaranteeScope { RandomPoint, UniformOverLeaves };

enum class MethodKind { Clt, Hoeffding, Bennett };

// Two readings of the normal-approximation bound. TwoSidedLemma uses the
// (1 - alpha0/2) quantile, OneSidedProposition the (1-alpha)^(exponent)
// quantile. The former is the default and yields the 2374 design point.
enum class CltVariant { TwoSidedLemma, OneSidedProposition };

struct Method {
    MethodKind kind = MethodKind::Clt;
    CltVariant clt_variant = CltVariant::TwoSidedLemma;

    static Method clt(CltVariant v = CltVariant::TwoSidedLemma) { return {MethodKind::Clt, v}; }
    static Method hoeffding() { return {MethodKind::Hoeffding, CltVariant::TwoSidedLemma}; }
    static Method bennett() { return {MethodKind::Bennett, CltVariant::TwoSidedLemma}; }

    friend bool operator==(const Method&, const Method&) = default;
};

struct OutcomeBounds {
    double lo = 0.0;
    double hi = 1.0;

    friend bool operator==(const OutcomeBounds&, const OutcomeBounds&) = default;
};

struct PlanningSpec {
    std::int64_t arms = 2;
    std::int64_t leaves = 1;
    double alpha = 0.1;
    double epsilon = 0.1;
    std::optional<OutcomeBounds> bounds;
    std::optional<double> sigma_sq;
    GuaranteeScope scope = GuaranteeScope::RandomPoint;
    Method method;
    double honest_fraction = 0.5;
};

// Throws ConfigError naming the first violated requirement.
void validate(const PlanningSpec& spec);

struct CellRequirement {
    std::int64_t min_cell_size = 1;
    std::int64_t total_experiment_size = 1;
    double exponent_used = 1.0;
    double raw_bound = 0.0;
};

// Confidence-splitting exponent: 1/K or 1/(K*L).
double split_exponent(const PlanningSpec& spec);

// Number of independent cell means the confidence is split across (K or K*L).
double split_count(const PlanningSpec& spec);

// alpha0 = 1 - (1-alpha)^exponent, computed without cancellation.
// Throws PrecisionError if it underflows to zero.
double per_cell_alpha(const PlanningSpec& spec);

// Real-valued sufficient per-cell size for the spec's method and scope.
double raw_cell_bound(const PlanningSpec& spec);

// Smallest integer n >= 1 with n >= raw_bound, with a relative 1e-12 slack so
// that values a rounding error above an integer do not ceil upwards.
std::int64_t ceil_with_slack(double raw_bound);

// Total experiment size for K*L cells of the given size.
std::int64_t total_experiment_size(const PlanningSpec& spec, std::int64_t min_cell_size);

CellRequirement required_cell_size(const PlanningSpec& spec);

struct CurvePoint {
    double confidence = 0.0;
    std::int64_t total_experiment_size = 0;
};

// Total experiment size at each confidence level; spec_template.alpha is
// replaced by 1 - confidence.
std::vector<CurvePoint> power_curve(const PlanningSpec& spec_template, const std::vector<double>& confidence_grid);

std::string_view to_string(GuaranteeScope scope);
std::string_view to_string(MethodKind kind);
std::string_view to_string(CltVariant variant);

}  // namespace partpower
