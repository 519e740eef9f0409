#include <doctest.h>

#include <random>
#include <utility>
#include <vector>

#include "partpower/errors.hpp"
#include "partpower/variance_bounds.hpp"
#include "support.hpp"

using namespace partpower;

namespace {

// A finite law on [lo, hi] placing at least 1 - rate on the anchor.
std::vector<std::pair<oracle::ld, oracle::ld>> rare_law(std::mt19937_64& rng, const RareDeviationKnowledge& k) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> atoms(1, 6);
    const double off_mass = k.deviation_rate * u(rng);
    std::vector<std::pair<oracle::ld, oracle::ld>> law{{k.anchor, 1.0L - off_mass}};
    const int n = atoms(rng);
    std::vector<double> w(static_cast<std::size_t>(n));
    double total = 0.0;
    for (double& x : w) total += (x = u(rng) + 1e-3);
    for (int i = 0; i < n; ++i) {
        // Endpoints are the extremal choices; include them often.
        const double r = u(rng);
        const double v = r < 0.3 ? k.lo : r < 0.6 ? k.hi : k.lo + (k.hi - k.lo) * u(rng);
        law.emplace_back(v, off_mass * w[static_cast<std::size_t>(i)] / total);
    }
    return law;
}

}  // namespace

TEST_CASE("reference bounds") {
    CHECK(worst_case_variance(0.0, 1.0) == 0.25);
    CHECK(rare_deviation_variance({0.0, 0.1, 0.0, 1.0}) == doctest::Approx(0.115));
    CHECK(binary_outcome_variance(0.1) == doctest::Approx(0.09));
    CHECK(rare_deviation_variance({0.0, 0.5, 0.0, 1.0}) == 0.25);
}

TEST_CASE("rare-deviation bound dominates every admissible law") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const double lo = -3.0 + 3.0 * u(rng);
        const double hi = lo + 0.1 + 4.0 * u(rng);
        const RareDeviationKnowledge k{lo + (hi - lo) * u(rng), 0.5 * u(rng), lo, hi};
        const auto law = rare_law(rng, k);
        const double bound = rare_deviation_variance(k);
        CHECK(static_cast<double>(oracle::variance(law)) <= bound * (1.0 + 1e-12));
        CHECK(bound <= worst_case_variance(lo, hi));
    }
}

TEST_CASE("binary bound dominates every admissible 0/1 law") {
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const double rate = 0.5 * u(rng);
        const double q = rate * u(rng);
        const double anchor = i % 2 ? 1.0 : 0.0;
        const std::vector<std::pair<oracle::ld, oracle::ld>> law{{anchor, 1.0L - q}, {1.0 - anchor, q}};
        CHECK(static_cast<double>(oracle::variance(law)) <= binary_outcome_variance(rate) * (1.0 + 1e-12));
    }
}

TEST_CASE("variance bound errors") {
    CHECK_THROWS_AS(worst_case_variance(1.0, 1.0), DomainError);
    CHECK_THROWS_AS(rare_deviation_variance({0.0, 0.6, 0.0, 1.0}), DomainError);
    CHECK_THROWS_AS(rare_deviation_variance({2.0, 0.1, 0.0, 1.0}), DomainError);
    CHECK_THROWS_AS(binary_outcome_variance(0.7), DomainError);
}
