#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "partpower/partition.hpp"
#include "partpower/planning.hpp"

namespace partpower {

enum class OutcomeFamily { Bernoulli, Gaussian };

// Outcome law of one (arm, leaf) cell. A Gaussian may be truncated to
// [lo, hi]; true_mean/true_sd then refer to the truncated law.
struct CellLaw {
    OutcomeFamily family = OutcomeFamily::Bernoulli;
    double p = 0.5;
    double mean = 0.0;
    double sd = 1.0;
    std::optional<OutcomeBounds> truncation;

    static CellLaw bernoulli(double p);
    static CellLaw gaussian(double mean, double sd);
    static CellLaw truncated_gaussian(double mean, double sd, double lo, double hi);

    double true_mean() const;
    double true_sd() const;
};

// Synthetic experiment with known per-cell truths. Leaf l is embedded on
// feature 0 as the interval (l/L, (l+1)/L]; `noise_features` extra uniform
// features carry no signal.
struct DgpSpec {
    int arms = 2;
    int leaves = 1;
    std::vector<double> leaf_probs;
    std::vector<double> arm_probs;
    std::vector<CellLaw> cells;  // arm-major: (arm-1) * leaves + leaf
    int noise_features = 0;

    const CellLaw& cell(int arm, int leaf) const { return cells[static_cast<std::size_t>((arm - 1) * leaves + leaf)]; }
    std::size_t feature_count() const { return 1 + static_cast<std::size_t>(noise_features); }
};

enum class PartitionMode { Known, Learned };

struct SimulationPlan {
    DgpSpec dgp;
    PlanningSpec planning;
    int replicates = 500;
    int test_points = 200;  // per replicate, known-partition mode
    std::uint64_t seed = 0;
    PartitionMode mode = PartitionMode::Known;
    bool standardized = false;
    // Learned-partition mode only.
    std::int64_t test_rows_per_unit = 20'000;  // test set = K * L * this
    int max_depth = 8;
    int candidate_quantiles = 32;
};

// Throws ConfigError on any inconsistency, including a zero true standard
// deviation in standardized known-partition mode.
void validate(const SimulationPlan& plan);

// Accuracy events at one test point. Index w-1 holds arm w.
struct PointEvents {
    bool joint_mean = false;  // max_w |mu_hat - mu| / scale_w < eps
    bool best_arm = false;    // |max mu_hat - max mu| < eps * max_w scale_w
    bool cate = false;        // |tau_hat - tau| < eps * (scale_w + scale_w') for all w != w'
};

// `scale` is all ones on the raw scale, the per-arm sd when standardized.
PointEvents evaluate_point(std::span<const double> estimate, std::span<const double> truth,
                           std::span<const double> scale, double epsilon);

struct ReplicateRecord {
    int replicate = 0;
    double joint_mean = 0.0;
    double best_arm = 0.0;
    double cate = 0.0;
    double joint_mean_uniform = 0.0;
    double best_arm_uniform = 0.0;
    double cate_uniform = 0.0;
    // Points (plus the once-per-replicate uniform check) where the joint-mean
    // event held but a derived event did not. Always zero if the implication holds.
    std::int64_t implication_violations = 0;
    int leaf_count = 0;
    std::int64_t min_cell_size = 0;
    double max_cell_sd = 0.0;
    double median_cell_sd = 0.0;
    // Largest standard error of the test-set truth proxy (learned mode).
    double max_proxy_se = 0.0;

    friend bool operator==(const ReplicateRecord&, const ReplicateRecord&) = default;
};

struct CoverageSummary {
    int replicates = 0;
    double joint_mean = 0.0;
    double best_arm = 0.0;
    double cate = 0.0;
    double joint_mean_uniform = 0.0;
    double best_arm_uniform = 0.0;
    double cate_uniform = 0.0;
    std::int64_t implication_violations = 0;
    double mean_leaf_count = 0.0;
    std::int64_t min_cell_size = 0;

    friend bool operator==(const CoverageSummary&, const CoverageSummary&) = default;
};

struct CoverageReport {
    std::vector<ReplicateRecord> replicates;
    CoverageSummary summary;

    friend bool operator==(const CoverageReport&, const CoverageReport&) = default;
};

class ReplicateError : public std::runtime_error {
public:
    ReplicateError(int index, const std::string& what)
        : std::runtime_error("replicate " + std::to_string(index) + ": " + what), index_(index) {}
    int index() const noexcept { return index_; }

private:
    int index_;
};

// Per-replicate generator, a pure function of (seed, replicate index).
std::mt19937_64 replicate_rng(std::uint64_t seed, std::uint64_t replicate_index);

// Honest/train/test draws for learned mode; exposed for tests.
Dataset draw_dataset(const DgpSpec& dgp, std::int64_t rows, std::mt19937_64& rng, DataRole role);

ReplicateRecord run_replicate(const SimulationPlan& plan, int replicate_index);

// Aggregates replicates 0..R-1 in index order. `threads` == 0 picks the
// hardware concurrency. The result does not depend on the thread count.
CoverageReport run_simulation(const SimulationPlan& plan, unsigned threads = 1);

CoverageSummary summarize(const std::vector<ReplicateRecord>& records);

// Named presets.
//   known-bernoulli  K=2, L=5 Bernoulli cells, Hoeffding plan at alpha=0.1, eps=0.1
//   paper-desk       learned partition, binary outcome, K=2, L=5, eps=1/25,
//                    standardized normal plan at 0.9 (cell size 2374), R=50
//   paper-full       as paper-desk with R=500
SimulationPlan make_preset(const std::string& name, std::uint64_t seed);

}  // namespace partpower
