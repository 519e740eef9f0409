#include "partpower/partition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "partpower/errors.hpp"

namespace partpower {

Partition::Partition(std::size_t feature_count, std::vector<Node> nodes)
    : feature_count_(feature_count), nodes_(std::move(nodes)) {
    if (nodes_.empty()) {
        throw ConfigError("partition has no nodes");
    }
    const int n = static_cast<int>(nodes_.size());
    std::vector<char> visited(nodes_.size(), 0);
    std::vector<int> leaf_ids;
    std::vector<int> stack{0};
    while (!stack.empty()) {
        const int id = stack.back();
        stack.pop_back();
        if (id < 0 || id >= n) {
            throw ConfigError("partition child index out of range");
        }
        if (visited[id]) {
            throw ConfigError("partition node reachable more than once");
        }
        visited[id] = 1;
        const Node& node = nodes_[id];
        if (node.is_leaf()) {
            leaf_ids.push_back(node.leaf);
            continue;
        }
        if (node.feature < 0 || static_cast<std::size_t>(node.feature) >= feature_count_) {
            std::ostringstream msg;
            msg << "split feature " << node.feature << " outside [0, " << feature_count_ << ")";
            throw ConfigError(msg.str());
        }
        if (!std::isfinite(node.threshold)) {
            throw ConfigError("split threshold must be finite");
        }
        stack.push_back(node.right);
        stack.push_back(node.left);
    }
    if (std::find(visited.begin(), visited.end(), 0) != visited.end()) {
        throw ConfigError("partition contains unreachable nodes");
    }
    std::sort(leaf_ids.begin(), leaf_ids.end());
    for (std::size_t i = 0; i < leaf_ids.size(); ++i) {
        if (leaf_ids[i] != static_cast<int>(i)) {
            throw ConfigError("leaf ids must be exactly 0..L-1, each once");
        }
    }
    leaf_count_ = static_cast<int>(leaf_ids.size());
}

Partition Partition::single_leaf(std::size_t feature_count) {
    return Partition(feature_count, {Node::make_leaf(0)});
}

int Partition::assign_leaf(std::span<const double> x) const {
    if (x.size() != feature_count_) {
        std::ostringstream msg;
        msg << "feature vector has width " << x.size() << ", partition expects " << feature_count_;
        throw ShapeError(msg.str());
    }
    const Node* node = &nodes_[0];
    while (!node->is_leaf()) {
        node = &nodes_[x[node->feature] <= node->threshold ? node->left : node->right];
    }
    return node->leaf;
}

namespace {

int build_interval(std::vector<Partition::Node>& nodes, int first, int last, int leaves) {
    const int id = static_cast<int>(nodes.size());
    if (first == last) {
        nodes.push_back(Partition::Node::make_leaf(first));
        return id;
    }
    nodes.emplace_back();
    const int mid = first + (last - first) / 2;
    const int left = build_interval(nodes, first, mid, leaves);
    const int right = build_interval(nodes, mid + 1, last, leaves);
    nodes[id] = Partition::Node::make_split(0, static_cast<double>(mid + 1) / leaves, left, right);
    return id;
}

}  // namespace

Partition make_interval_partition(int leaves, std::size_t feature_count) {
    if (leaves < 1 || feature_count < 1) {
        throw ConfigError("interval partition needs at least one leaf and one feature");
    }
    std::vector<Partition::Node> nodes;
    nodes.reserve(2 * static_cast<std::size_t>(leaves));
    build_interval(nodes, 0, leaves - 1, leaves);
    return Partition(feature_count, std::move(nodes));
}

void Dataset::add_row(std::span<const double> x, int arm, double y) {
    if (x.size() != width_) {
        std::ostringstream msg;
        msg << "row has width " << x.size() << ", dataset expects " << width_;
        throw ShapeError(msg.str());
    }
    if (arm < 1) {
        throw ConfigError("arms are 1-based");
    }
    features_.insert(features_.end(), x.begin(), x.end());
    arms_.push_back(arm);
    outcomes_.push_back(y);
}

void Dataset::reserve(std::size_t rows) {
    features_.reserve(rows * width_);
    arms_.reserve(rows);
    outcomes_.reserve(rows);
}

int Dataset::max_arm() const noexcept {
    return arms_.empty() ? 0 : *std::max_element(arms_.begin(), arms_.end());
}

EstimatorTable::EstimatorTable(Partition partition, int arms)
    : partition_(std::move(partition)), arms_(arms) {
    if (arms < 1) {
        throw ConfigError("estimator table needs at least one arm");
    }
    const std::size_t cells = static_cast<std::size_t>(arms_) * static_cast<std::size_t>(partition_.leaf_count());
    counts_.assign(cells, 0);
    sums_.assign(cells, 0.0);
}

std::size_t EstimatorTable::index(int arm, int leaf) const {
    if (arm < 1 || arm > arms_ || leaf < 0 || leaf >= leaves()) {
        std::ostringstream msg;
        msg << "cell (arm " << arm << ", leaf " << leaf << ") outside the " << arms_ << "x" << leaves() << " table";
        throw ConfigError(msg.str());
    }
    return static_cast<std::size_t>(arm - 1) * static_cast<std::size_t>(leaves()) + static_cast<std::size_t>(leaf);
}

std::optional<double> EstimatorTable::mean(int arm, int leaf) const {
    const std::size_t i = index(arm, leaf);
    if (counts_[i] == 0) {
        return std::nullopt;
    }
    return sums_[i] / static_cast<double>(counts_[i]);
}

std::int64_t EstimatorTable::total_count() const noexcept {
    std::int64_t total = 0;
    for (std::int64_t c : counts_) total += c;
    return total;
}

void EstimatorTable::add(int arm, int leaf, double y) {
    const std::size_t i = index(arm, leaf);
    counts_[i] += 1;
    sums_[i] += y;
}

EstimatorTable fit_honest_means(const Partition& partition, const Dataset& honest, int arms) {
    if (honest.role() == DataRole::Train) {
        throw ConfigError("honest means must not be fitted on the training split");
    }
    if (honest.width() != partition.feature_count()) {
        std::ostringstream msg;
        msg << "dataset width " << honest.width() << " does not match partition width " << partition.feature_count();
        throw ShapeError(msg.str());
    }
    EstimatorTable table(partition, arms);
    for (std::size_t i = 0; i < honest.size(); ++i) {
        const int arm = honest.arm(i);
        if (arm > arms) {
            std::ostringstream msg;
            msg << "row " << i << " has arm " << arm << " outside 1.." << arms;
            throw ConfigError(msg.str());
        }
        table.add(arm, partition.assign_leaf(honest.row(i)), honest.outcome(i));
    }
    return table;
}

namespace {

double cell_mean(const EstimatorTable& table, int arm, int leaf) {
    if (auto m = table.mean(arm, leaf)) {
        return *m;
    }
    std::ostringstream msg;
    msg << "no honest observations in cell (arm " << arm << ", leaf " << leaf << ")";
    throw EstimationError(msg.str(), arm, leaf);
}

}  // namespace

double mu_hat(const EstimatorTable& table, std::span<const double> x, int arm) {
    return cell_mean(table, arm, table.partition().assign_leaf(x));
}

double tau_hat(const EstimatorTable& table, std::span<const double> x, int arm, int other_arm) {
    const int leaf = table.partition().assign_leaf(x);
    return cell_mean(table, arm, leaf) - cell_mean(table, other_arm, leaf);
}

BestArm best_arm(const EstimatorTable& table, std::span<const double> x) {
    const int leaf = table.partition().assign_leaf(x);
    BestArm best{1, cell_mean(table, 1, leaf)};
    for (int w = 2; w <= table.arms(); ++w) {
        const double m = cell_mean(table, w, leaf);
        if (m > best.value) {
            best = {w, m};
        }
    }
    return best;
}

MinCellCheck check_min_cell(const EstimatorTable& table, std::int64_t required) {
    MinCellCheck check;
    check.min_count = std::numeric_limits<std::int64_t>::max();
    for (int w = 1; w <= table.arms(); ++w) {
        for (int l = 0; l < table.leaves(); ++l) {
            const std::int64_t c = table.count(w, l);
            check.min_count = std::min(check.min_count, c);
            if (c < required) {
                check.violating.push_back({w, l});
            }
        }
    }
    check.ok = check.violating.empty();
    return check;
}

}  // namespace partpower
