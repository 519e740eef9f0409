#include "partpower/variance_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "partpower/errors.hpp"

namespace partpower {

namespace {

void check_rate(double rate) {
    // t(1-t) is only monotone on [0, 1/2], which the bound relies on.
    if (!(rate >= 0.0 && rate <= 0.5)) {
        std::ostringstream msg;
        msg << "deviation rate must lie in [0, 1/2], got " << rate;
        throw DomainError(msg.str());
    }
}

}  // namespace

double worst_case_variance(double lo, double hi) {
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
        std::ostringstream msg;
        msg << "outcome bounds require lo < hi, got [" << lo << ", " << hi << "]";
        throw DomainError(msg.str());
    }
    const double width = hi - lo;
    return width * width / 4.0;
}

double rare_deviation_variance(const RareDeviationKnowledge& k) {
    const double worst = worst_case_variance(k.lo, k.hi);
    check_rate(k.deviation_rate);
    if (!(k.anchor >= k.lo && k.anchor <= k.hi)) {
        std::ostringstream msg;
        msg << "anchor " << k.anchor << " lies outside [" << k.lo << ", " << k.hi << "]";
        throw DomainError(msg.str());
    }
    const double p = k.deviation_rate;
    const double reach = std::max((k.lo - k.anchor) * (k.lo - k.anchor), (k.hi - k.anchor) * (k.hi - k.anchor));
    const double bound = p * worst + p * (1.0 - p) * reach;
    return std::min(bound, worst);
}

double binary_outcome_variance(double rate) {
    check_rate(rate);
    return rate * (1.0 - rate);
}

}  // namespace partpower
