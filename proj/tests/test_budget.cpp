#include <doctest.h>

#include <cmath>
#include <random>

#include "partpower/budget.hpp"
#include "partpower/errors.hpp"
#include "partpower/math_kernel.hpp"
#include "support.hpp"

using namespace partpower;

namespace {

PlanningSpec design_point() {
    PlanningSpec s;
    s.arms = 2;
    s.leaves = 1;
    s.alpha = 0.1;
    s.epsilon = 0.04;
    s.sigma_sq = 1.0;
    return s;
}

// Largest value in 1..64 whose equal split fits the budget, or 0.
std::int64_t exhaustive(const BudgetSpec& b, bool arms) {
    std::int64_t best = 0;
    for (std::int64_t v = 1; v <= 64; ++v) {
        PlanningSpec s = b.design;
        (arms ? s.arms : s.leaves) = v;
        if (oracle::fits(s, b.honest_budget)) best = v;
    }
    return best;
}

}  // namespace

TEST_CASE("cell budget is the integer equal split") {
    CHECK(cell_budget(50000, 2, 5) == 5000);
    CHECK(cell_budget(49999, 2, 5) == 4999);
    CHECK(cell_budget(9, 2, 5) == 0);
}

TEST_CASE("max arms at the design point") {
    PlanningSpec s = design_point();
    s.leaves = 5;
    const InversionResult r = max_arms(BudgetSpec{50000, s});
    CHECK(r.feasible);
    CHECK(r.solved_value == 3.0);
    CHECK(r.binding_bound == doctest::Approx(2793.27).epsilon(1e-5));
}

TEST_CASE("design point inverts to its margin and confidence") {
    const BudgetSpec b{2 * 2374, design_point()};
    const InversionResult eps = inf_epsilon(b);
    CHECK(eps.feasible);
    CHECK(std::fabs(eps.solved_value - 0.04) <= 1e-4);
    const InversionResult conf = sup_confidence(b);
    CHECK(conf.feasible);
    CHECK(std::fabs(conf.solved_value - 0.9) <= 1e-3);
}

TEST_CASE("Bennett budget inverts to its margin") {
    PlanningSpec s;
    s.alpha = 0.1;
    s.bounds = OutcomeBounds{0.0, 1.0};
    s.sigma_sq = 0.09;
    s.method = Method::bennett();
    const InversionResult r = inf_epsilon(BudgetSpec{2 * 309, s});
    CHECK(r.feasible);
    CHECK(std::fabs(r.solved_value - 0.05) <= 1e-3);
}

TEST_CASE("max arms and max leaves agree with exhaustive search") {
    std::mt19937_64 rng(17);
    const Method methods[] = {Method::clt(), Method::hoeffding(), Method::bennett()};
    int checked = 0;
    while (checked < 120) {
        const Method m = methods[checked % 3];
        const auto scope = checked % 2 ? GuaranteeScope::UniformOverLeaves : GuaranteeScope::RandomPoint;
        PlanningSpec s = oracle::random_spec(rng, m, scope);
        s.arms = 1 + s.arms % 3;
        s.leaves = 1 + s.leaves % 4;
        const double need = oracle::threshold_size(s);
        std::uniform_int_distribution<std::int64_t> budget(1, static_cast<std::int64_t>(need * 40.0) + 1);
        BudgetSpec b{budget(rng), s};
        const bool solve_arms = checked % 4 < 2;
        // Keep the answer inside the searched domain.
        PlanningSpec edge = s;
        (solve_arms ? edge.arms : edge.leaves) = 65;
        if (oracle::fits(edge, b.honest_budget)) continue;
        const InversionResult r = solve_arms ? max_arms(b) : max_leaves(b);
        const std::int64_t expect = exhaustive(b, solve_arms);
        CHECK(r.feasible == (expect > 0));
        CHECK(static_cast<std::int64_t>(r.solved_value) == expect);
        ++checked;
    }
}

TEST_CASE("inf epsilon and sup confidence round-trip through the sizing") {
    std::mt19937_64 rng(23);
    const Method methods[] = {Method::clt(), Method::clt(CltVariant::OneSidedProposition), Method::hoeffding(),
                              Method::bennett()};
    for (int i = 0; i < 200; ++i) {
        const Method m = methods[i % 4];
        PlanningSpec s = oracle::random_spec(rng, m, i % 2 ? GuaranteeScope::UniformOverLeaves : GuaranteeScope::RandomPoint);
        std::uniform_int_distribution<std::int64_t> per_cell(1, 5000);
        const BudgetSpec b{per_cell(rng) * s.arms * s.leaves, s};

        const InversionResult eps = inf_epsilon(b);
        REQUIRE(eps.feasible);
        if (eps.solved_value > 0.0) {
            PlanningSpec at = s;
            at.epsilon = eps.solved_value;
            CHECK(fits_budget(b.honest_budget, at));
            at.epsilon = eps.solved_value * (1.0 - 1e-7);
            CHECK_FALSE(fits_budget(b.honest_budget, at));
        }

        const InversionResult conf = sup_confidence(b);
        if (!conf.feasible) continue;
        PlanningSpec at = s;
        at.alpha = 1.0 - conf.solved_value;
        CHECK(fits_budget(b.honest_budget, at));
        if (conf.solved_value < kConfidenceCeiling - 1e-6) {
            at.alpha = 1.0 - (conf.solved_value + 1e-7);
            CHECK_FALSE(fits_budget(b.honest_budget, at));
        }
    }
}

TEST_CASE("Hoeffding closed-form margin matches bisection") {
    std::mt19937_64 rng(31);
    for (int i = 0; i < 100; ++i) {
        const PlanningSpec s = oracle::random_spec(rng, Method::hoeffding(), GuaranteeScope::RandomPoint);
        std::uniform_int_distribution<std::int64_t> per_cell(1, 3000);
        const std::int64_t n = per_cell(rng);
        const BudgetSpec b{n * s.arms * s.leaves, s};
        auto slack = [&](double e) {
            PlanningSpec t = s;
            t.epsilon = e;
            return oracle::guarantee_holds(t, static_cast<oracle::ld>(n)) ? 1.0 : -1.0;
        };
        const double width = s.bounds->hi - s.bounds->lo;
        double lo = 1e-12;
        double hi = 4.0 * width;
        for (int k = 0; k < 200; ++k) {
            const double mid = 0.5 * (lo + hi);
            if (slack(mid) > 0) hi = mid; else lo = mid;
        }
        CHECK(std::fabs(inf_epsilon(b).solved_value - hi) <= 1e-8);
    }
}

TEST_CASE("infeasible budgets are reported, not thrown") {
    PlanningSpec s = design_point();
    s.leaves = 5;
    const InversionResult r = max_arms(BudgetSpec{1000, s});
    CHECK_FALSE(r.feasible);
    CHECK(r.binding_bound > 0.0);
    CHECK_FALSE(max_leaves(BudgetSpec{1000, s}).feasible);
    CHECK_THROWS_AS(inf_epsilon(BudgetSpec{3, s}), ConfigError);
    CHECK_THROWS_AS(max_arms(BudgetSpec{0, s}), ConfigError);
}

TEST_CASE("random-point max leaves is closed form") {
    PlanningSpec s = design_point();
    const InversionResult r = max_leaves(BudgetSpec{100000, s});
    CHECK(r.solved_value == static_cast<double>(100000 / (2 * 2374)));
}
