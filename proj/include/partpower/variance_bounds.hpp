#pragma once

namespace partpower {

// Domain knowledge that the outcome rarely leaves a fixed value: within every
// (arm, leaf) cell, P(Y != anchor) <= deviation_rate, with Y in [lo, hi].
struct RareDeviationKnowledge {
    double anchor = 0.0;
    double deviation_rate = 0.0;
    double lo = 0.0;
    double hi = 1.0;
};

// (hi - lo)^2 / 4, the largest variance of any law on [lo, hi].
double worst_case_variance(double lo, double hi);

// p(hi-lo)^2/4 + p(1-p) max{(lo-y)^2, (hi-y)^2}, clamped at the worst case.
// Throws DomainError if the rate exceeds 1/2 or the anchor lies outside the bounds.
double rare_deviation_variance(const RareDeviationKnowledge& k);

// p(1-p) for a {0,1} outcome that differs from its anchor with rate <= p <= 1/2.
double binary_outcome_variance(double rate);

}  // namespace partpower
