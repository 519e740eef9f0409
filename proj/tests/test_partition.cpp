#include <doctest.h>

#include <random>
#include <vector>

#include "partpower/errors.hpp"
#include "partpower/partition.hpp"
#include "support.hpp"

using namespace partpower;
using Node = Partition::Node;

TEST_CASE("leaf assignment matches the leaf boxes") {
    std::mt19937_64 rng(51);
    std::uniform_int_distribution<int> grid(0, 10);
    for (int t = 0; t < 50; ++t) {
        const Partition p = oracle::random_partition(rng, 3, 5);
        const auto boxes = oracle::leaf_boxes(p);
        REQUIRE(static_cast<int>(boxes.size()) == p.leaf_count());
        for (int i = 0; i < 200; ++i) {
            // Grid points hit thresholds exactly, exercising the <= rule.
            const std::vector<double> x{grid(rng) / 10.0, grid(rng) / 10.0, grid(rng) / 10.0};
            int hits = 0;
            for (const auto& [leaf, box] : boxes) {
                if (box.contains(x)) {
                    ++hits;
                    CHECK(p.assign_leaf(x) == leaf);
                }
            }
            CHECK(hits == 1);
        }
    }
}

TEST_CASE("interval partition places leaf l on (l/L, (l+1)/L]") {
    for (int leaves : {1, 2, 3, 5, 8, 13}) {
        const Partition p = make_interval_partition(leaves, 2);
        CHECK(p.leaf_count() == leaves);
        for (int l = 0; l < leaves; ++l) {
            const std::vector<double> center{(l + 0.5) / leaves, 0.3};
            CHECK(p.assign_leaf(center) == l);
            const std::vector<double> upper{(l + 1.0) / leaves, 0.9};
            CHECK(p.assign_leaf(upper) == l);
        }
    }
}

TEST_CASE("malformed trees are rejected") {
    CHECK_THROWS_AS(Partition(1, {}), ConfigError);
    CHECK_THROWS_AS(Partition(1, {Node::make_split(0, 0.5, 1, 1), Node::make_leaf(0)}), ConfigError);
    CHECK_THROWS_AS(Partition(1, {Node::make_split(1, 0.5, 1, 2), Node::make_leaf(0), Node::make_leaf(1)}), ConfigError);
    CHECK_THROWS_AS(Partition(1, {Node::make_split(0, 0.5, 1, 2), Node::make_leaf(0), Node::make_leaf(2)}), ConfigError);
    CHECK_THROWS_AS(Partition(1, {Node::make_split(0, INFINITY, 1, 2), Node::make_leaf(0), Node::make_leaf(1)}),
                    ConfigError);
    const Partition ok(1, {Node::make_split(0, 0.5, 1, 2), Node::make_leaf(1), Node::make_leaf(0)});
    CHECK(ok.leaf_count() == 2);
    CHECK_THROWS_AS(ok.assign_leaf(std::vector<double>{0.1, 0.2}), ShapeError);
}

TEST_CASE("honest means equal an explicit group-by") {
    std::mt19937_64 rng(53);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> arm(1, 3);
    for (int t = 0; t < 20; ++t) {
        const Partition p = oracle::random_partition(rng, 2, 4);
        Dataset d(2, DataRole::Honest);
        for (int i = 0; i < 500; ++i) {
            const std::vector<double> x{u(rng), u(rng)};
            d.add_row(x, arm(rng), u(rng) * 10.0 - 3.0);
        }
        const EstimatorTable table = fit_honest_means(p, d, 3);
        const auto groups = oracle::group_means(p, d);
        std::int64_t total = 0;
        for (int w = 1; w <= 3; ++w) {
            for (int l = 0; l < p.leaf_count(); ++l) {
                const auto it = groups.find({w, l});
                if (it == groups.end()) {
                    CHECK(table.count(w, l) == 0);
                    CHECK_FALSE(table.mean(w, l).has_value());
                    continue;
                }
                CHECK(table.count(w, l) == it->second.first);
                CHECK(*table.mean(w, l) == doctest::Approx(it->second.second).epsilon(1e-12));
                total += table.count(w, l);
            }
        }
        CHECK(total == 500);
        CHECK(table.total_count() == 500);
    }
}

TEST_CASE("three-row example") {
    const Partition p(1, {Node::make_split(0, 0.5, 1, 2), Node::make_leaf(0), Node::make_leaf(1)});
    Dataset d(1, DataRole::Honest);
    d.add_row(std::vector<double>{0.2}, 1, 1.0);
    d.add_row(std::vector<double>{0.3}, 1, 0.0);
    d.add_row(std::vector<double>{0.4}, 1, 1.0);
    d.add_row(std::vector<double>{0.1}, 2, 0.5);
    const EstimatorTable table = fit_honest_means(p, d, 2);
    const std::vector<double> x{0.25};
    CHECK(mu_hat(table, x, 1) == doctest::Approx(2.0 / 3.0));
    CHECK(tau_hat(table, x, 1, 2) == doctest::Approx(2.0 / 3.0 - 0.5));
    const BestArm best = best_arm(table, x);
    CHECK(best.arm == 1);
    CHECK(best.value == doctest::Approx(2.0 / 3.0));

    const std::vector<double> right{0.9};
    CHECK_THROWS_AS(mu_hat(table, right, 1), EstimationError);

    const MinCellCheck check = check_min_cell(table, 1);
    CHECK_FALSE(check.ok);
    CHECK(check.min_count == 0);
    CHECK(check.violating.size() == 2);
}

TEST_CASE("best arm ties go to the smallest arm") {
    const Partition p = Partition::single_leaf(1);
    Dataset d(1, DataRole::Honest);
    for (int w = 1; w <= 3; ++w) d.add_row(std::vector<double>{0.0}, w, w == 1 ? 0.2 : 0.7);
    const EstimatorTable table = fit_honest_means(p, d, 3);
    CHECK(best_arm(table, std::vector<double>{0.0}).arm == 2);
}

TEST_CASE("estimation input checks") {
    const Partition p = Partition::single_leaf(2);
    Dataset train(2, DataRole::Train);
    train.add_row(std::vector<double>{0.0, 0.0}, 1, 1.0);
    CHECK_THROWS_AS(fit_honest_means(p, train, 2), ConfigError);
    Dataset narrow(1, DataRole::Honest);
    narrow.add_row(std::vector<double>{0.0}, 1, 1.0);
    CHECK_THROWS_AS(fit_honest_means(p, narrow, 2), ShapeError);
    Dataset many(2, DataRole::Honest);
    many.add_row(std::vector<double>{0.0, 0.0}, 3, 1.0);
    CHECK_THROWS_AS(fit_honest_means(p, many, 2), ConfigError);
    CHECK_THROWS_AS(many.add_row(std::vector<double>{0.0}, 1, 1.0), ShapeError);
    CHECK_THROWS_AS(many.add_row(std::vector<double>{0.0, 0.0}, 0, 1.0), ConfigError);
}
