#include "partpower/planning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "partpower/errors.hpp"

namespace partpower {

namespace {

bool needs_bounds(MethodKind kind) { return kind == MethodKind::Hoeffding || kind == MethodKind::Bennett; }
bool needs_sigma(MethodKind kind) { return kind == MethodKind::Clt || kind == MethodKind::Bennett; }

[[noreturn]] void config_error(const std::string& what) { throw ConfigError(what); }

}  // namespace

std::string_view to_string(GuaranteeScope scope) {
    return scope == GuaranteeScope::RandomPoint ? "random" : "uniform";
}

std::string_view to_string(MethodKind kind) {
    switch (kind) {
        case MethodKind::Clt: return "clt";
        case MethodKind::Hoeffding: return "hoeffding";
        case MethodKind::Bennett: return "bennett";
    }
    return "?";
}

std::string_view to_string(CltVariant variant) {
    return variant == CltVariant::TwoSidedLemma ? "two-sided" : "one-sided";
}

void validate(const PlanningSpec& spec) {
    if (spec.arms < 1) config_error("arms must be a positive integer");
    if (spec.leaves < 1) config_error("leaves must be a positive integer");
    if (!(spec.alpha > 0.0 && spec.alpha < 1.0)) config_error("alpha must lie strictly between 0 and 1");
    if (!(spec.epsilon > 0.0) || !std::isfinite(spec.epsilon)) config_error("epsilon must be a positive finite number");
    if (!(spec.honest_fraction > 0.0 && spec.honest_fraction <= 1.0)) {
        config_error("honest fraction must lie in (0, 1]");
    }
    const MethodKind kind = spec.method.kind;
    if (needs_bounds(kind) && !spec.bounds) {
        std::ostringstream msg;
        msg << "method " << to_string(kind) << " requires outcome bounds (lo, hi)";
        config_error(msg.str());
    }
    if (needs_sigma(kind) && !spec.sigma_sq) {
        std::ostringstream msg;
        msg << "method " << to_string(kind) << " requires a conditional variance bound sigma_sq";
        config_error(msg.str());
    }
    if (spec.bounds) {
        const auto [lo, hi] = *spec.bounds;
        if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) config_error("outcome bounds require lo < hi");
    }
    if (spec.sigma_sq) {
        const double s2 = *spec.sigma_sq;
        if (!(s2 > 0.0) || !std::isfinite(s2)) config_error("sigma_sq must be a positive finite number");
        if (spec.bounds) {
            const double width = spec.bounds->hi - spec.bounds->lo;
            const double worst = width * width / 4.0;
            if (s2 > worst * (1.0 + 1e-12)) {
                std::ostringstream msg;
                msg << "sigma_sq " << s2 << " exceeds the bounded-outcome maximum (hi-lo)^2/4 = " << worst;
                config_error(msg.str());
            }
        }
    }
}

double split_count(const PlanningSpec& spec) {
    const double k = static_cast<double>(spec.arms);
    return spec.scope == GuaranteeScope::RandomPoint ? k : k * static_cast<double>(spec.leaves);
}

double split_exponent(const PlanningSpec& spec) { return 1.0 / split_count(spec); }

double per_cell_alpha(const PlanningSpec& spec) {
    const double alpha0 = -std::expm1(std::log1p(-spec.alpha) * split_exponent(spec));
    if (!(alpha0 > 0.0)) {
        std::ostringstream msg;
        msg << "per-cell alpha underflows to zero (alpha=" << spec.alpha << ", cells=" << split_count(spec) << ")";
        throw PrecisionError(msg.str());
    }
    return alpha0;
}

double raw_cell_bound(const PlanningSpec& spec) {
    validate(spec);
    const double alpha0 = per_cell_alpha(spec);
    const double eps = spec.epsilon;
    switch (spec.method.kind) {
        case MethodKind::Clt: {
            const double sigma = std::sqrt(*spec.sigma_sq);
            double z;
            if (spec.method.clt_variant == CltVariant::TwoSidedLemma) {
                z = -normal_quantile(alpha0 / 2.0);
            } else {
                // Quantile at (1-alpha)^exponent = 1 - alpha0. A non-positive
                // quantile means the one-sided condition holds for any n.
                z = std::max(0.0, -normal_quantile(alpha0));
            }
            const double ratio = z * sigma / eps;
            return ratio * ratio;
        }
        case MethodKind::Hoeffding: {
            const double width = spec.bounds->hi - spec.bounds->lo;
            return std::log(2.0 / alpha0) * width * width / (2.0 * eps * eps);
        }
        case MethodKind::Bennett: {
            const double lo = spec.bounds->lo;
            const double hi = spec.bounds->hi;
            const double s2 = *spec.sigma_sq;
            const double magnitude = std::max(std::fabs(lo), std::fabs(hi));
            const double s = eps * magnitude / s2;
            return std::log(2.0 / alpha0) * magnitude * magnitude / (s2 * bennett_h(s));
        }
    }
    return std::numeric_limits<double>::quiet_NaN();
}

std::int64_t ceil_with_slack(double raw_bound) {
    if (!std::isfinite(raw_bound)) {
        throw PrecisionError("sufficient cell size is not finite");
    }
    const double slack = 1e-12 * std::max(1.0, std::fabs(raw_bound));
    const double c = std::ceil(raw_bound - slack);
    if (c >= static_cast<double>(std::numeric_limits<std::int64_t>::max())) {
        throw PrecisionError("sufficient cell size overflows a 64-bit integer");
    }
    return std::max<std::int64_t>(1, static_cast<std::int64_t>(c));
}

std::int64_t total_experiment_size(const PlanningSpec& spec, std::int64_t min_cell_size) {
    const double cells = static_cast<double>(spec.arms) * static_cast<double>(spec.leaves);
    return ceil_with_slack(cells * static_cast<double>(min_cell_size) / spec.honest_fraction);
}

CellRequirement required_cell_size(const PlanningSpec& spec) {
    CellRequirement req;
    req.raw_bound = raw_cell_bound(spec);
    req.exponent_used = split_exponent(spec);
    req.min_cell_size = ceil_with_slack(req.raw_bound);
    req.total_experiment_size = total_experiment_size(spec, req.min_cell_size);
    return req;
}

std::vector<CurvePoint> power_curve(const PlanningSpec& spec_template, const std::vector<double>& confidence_grid) {
    std::vector<CurvePoint> curve;
    curve.reserve(confidence_grid.size());
    for (double confidence : confidence_grid) {
        if (!(confidence > 0.0 && confidence < 1.0)) {
            std::ostringstream msg;
            msg << "confidence levels must lie strictly between 0 and 1, got " << confidence;
            throw ConfigError(msg.str());
        }
        PlanningSpec spec = spec_template;
        spec.alpha = 1.0 - confidence;
        curve.push_back({confidence, required_cell_size(spec).total_experiment_size});
    }
    return curve;
}

}  // namespace partpower
