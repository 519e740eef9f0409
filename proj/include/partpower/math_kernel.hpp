#pragma once

#include <functional>

namespace partpower {

// A probability in the closed unit interval. Construction validates.
class Probability {
public:
    explicit Probability(double value);

    double value() const noexcept { return value_; }
    Probability complement() const noexcept;

    friend bool operator==(Probability, Probability) = default;

private:
    double value_;
};

// Standard normal CDF, accurate in both tails (erfc based).
double normal_cdf(double z);

double normal_pdf(double z);

// Inverse of the standard normal CDF.
//
// AS241 (Wichura, PPND16) rational approximation followed by one Newton step
// against normal_cdf. Absolute accuracy is better than 1e-9 over the whole
// open interval. Exactly antisymmetric: normal_quantile(1-p) == -normal_quantile(p)
// whenever 1-p is representable.
//
// Throws DomainError unless 0 < p < 1.
double normal_quantile(double p);
double normal_quantile(Probability p);

// Bennett rate function h(s) = (1+s) ln(1+s) - s, for s >= 0.
double bennett_h(double s);

struct BracketedRoot {
    double lo = 0.0;
    double hi = 0.0;
    double tolerance = 1e-10;
    int max_iterations = 200;
};

// Bisection for a sign change of f on [lo, hi]. Returns x with
// |x - root| <= tolerance. Deterministic: the sequence of evaluations depends
// only on the bracket.
//
// Throws BracketError if f(lo) and f(hi) share a sign (or the bracket is
// malformed) and ConvergenceError if max_iterations halvings do not reach the
// tolerance.
double bisect(const std::function<double(double)>& f, const BracketedRoot& bracket);

}  // namespace partpower
