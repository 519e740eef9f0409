#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace partpower {

// Axis-aligned binary partition of R^d. Internal nodes route
// x[feature] <= threshold to the left child; leaves carry ids 0..L-1.
// Node 0 is the root. Immutable after construction.
class Partition {
public:
    struct Node {
        int feature = -1;
        double threshold = 0.0;
        int left = -1;
        int right = -1;
        int leaf = -1;

        bool is_leaf() const noexcept { return leaf >= 0; }

        static Node make_leaf(int id) { return Node{-1, 0.0, -1, -1, id}; }
        static Node make_split(int feature, double threshold, int left, int right) {
            return Node{feature, threshold, left, right, -1};
        }

        friend bool operator==(const Node&, const Node&) = default;
    };

    // Validates the tree shape: every node reachable exactly once from the
    // root, feature indices below feature_count, finite thresholds, leaf ids
    // exactly {0..L-1}. Throws ConfigError otherwise.
    Partition(std::size_t feature_count, std::vector<Node> nodes);

    static Partition single_leaf(std::size_t feature_count);

    std::size_t feature_count() const noexcept { return feature_count_; }
    int leaf_count() const noexcept { return leaf_count_; }
    const std::vector<Node>& nodes() const noexcept { return nodes_; }

    // Throws ShapeError if x.size() != feature_count().
    int assign_leaf(std::span<const double> x) const;

    friend bool operator==(const Partition&, const Partition&) = default;

private:
    std::size_t feature_count_;
    std::vector<Node> nodes_;
    int leaf_count_ = 0;
};

// Balanced tree on feature 0 whose leaf l covers (l/L, (l+1)/L].
Partition make_interval_partition(int leaves, std::size_t feature_count = 1);

enum class DataRole { Unspecified, Train, Honest, Test };

// Row-major (features, arm, outcome) records. Arms are 1-based.
class Dataset {
public:
    explicit Dataset(std::size_t width, DataRole role = DataRole::Unspecified) : width_(width), role_(role) {}

    void add_row(std::span<const double> x, int arm, double y);
    void reserve(std::size_t rows);

    std::size_t width() const noexcept { return width_; }
    std::size_t size() const noexcept { return arms_.size(); }
    bool empty() const noexcept { return arms_.empty(); }
    DataRole role() const noexcept { return role_; }
    void set_role(DataRole role) noexcept { role_ = role; }

    std::span<const double> row(std::size_t i) const { return {features_.data() + i * width_, width_}; }
    int arm(std::size_t i) const { return arms_[i]; }
    double outcome(std::size_t i) const { return outcomes_[i]; }
    const std::vector<double>& outcomes() const noexcept { return outcomes_; }
    std::vector<double>& mutable_outcomes() noexcept { return outcomes_; }

    int max_arm() const noexcept;

    friend bool operator==(const Dataset&, const Dataset&) = default;

private:
    std::size_t width_;
    DataRole role_;
    std::vector<double> features_;
    std::vector<int> arms_;
    std::vector<double> outcomes_;
};

struct Cell {
    int arm = 1;  // 1-based
    int leaf = 0;

    friend bool operator==(const Cell&, const Cell&) = default;
};

// Honest per-(arm, leaf) counts and sample means on a fixed partition.
class EstimatorTable {
public:
    EstimatorTable(Partition partition, int arms);

    int arms() const noexcept { return arms_; }
    int leaves() const noexcept { return partition_.leaf_count(); }
    const Partition& partition() const noexcept { return partition_; }

    std::int64_t count(int arm, int leaf) const { return counts_[index(arm, leaf)]; }
    // Empty when the cell has no rows.
    std::optional<double> mean(int arm, int leaf) const;
    std::int64_t total_count() const noexcept;

    // Adds one observation; rows must be added in dataset order so that sums
    // accumulate left to right.
    void add(int arm, int leaf, double y);

private:
    std::size_t index(int arm, int leaf) const;

    Partition partition_;
    int arms_;
    std::vector<std::int64_t> counts_;
    std::vector<double> sums_;
};

// Counts and means over I(w,l) on honest rows. Throws ShapeError on width
// mismatch, ConfigError if an arm lies outside 1..arms or the data is tagged
// as training data.
EstimatorTable fit_honest_means(const Partition& partition, const Dataset& honest, int arms);

// Throws EstimationError naming the cell when it is empty.
double mu_hat(const EstimatorTable& table, std::span<const double> x, int arm);
double tau_hat(const EstimatorTable& table, std::span<const double> x, int arm, int other_arm);

struct BestArm {
    int arm = 1;
    double value = 0.0;
};

// Argmax over arms at x's leaf; ties go to the smallest arm.
BestArm best_arm(const EstimatorTable& table, std::span<const double> x);

struct MinCellCheck {
    bool ok = true;
    std::int64_t min_count = 0;
    std::vector<Cell> violating;
};

MinCellCheck check_min_cell(const EstimatorTable& table, std::int64_t required);

}  // namespace partpower
