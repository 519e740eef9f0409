#include "partpower/learner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>

#include "partpower/errors.hpp"

namespace partpower {

namespace {

constexpr double kNoValue = -std::numeric_limits<double>::infinity();

struct Split {
    int feature = -1;
    double threshold = 0.0;
    double objective = kNoValue;
    double gain = kNoValue;
};

struct Frontier {
    std::vector<std::size_t> train_rows;
    std::vector<std::size_t> honest_rows;
    int depth = 0;
    int node = 0;  // index into the growing node list
    std::optional<Split> best;
};

struct ArmTally {
    std::vector<double> train_sum;
    std::vector<std::int64_t> train_count;
    std::vector<std::int64_t> honest_count;

    explicit ArmTally(int arms) : train_sum(arms, 0.0), train_count(arms, 0), honest_count(arms, 0) {}

    std::int64_t honest_total() const {
        return std::accumulate(honest_count.begin(), honest_count.end(), std::int64_t{0});
    }

    // max_w over arms with training data; kNoValue if none.
    double best_train_mean() const {
        double best = kNoValue;
        for (std::size_t w = 0; w < train_sum.size(); ++w) {
            if (train_count[w] > 0) {
                best = std::max(best, train_sum[w] / static_cast<double>(train_count[w]));
            }
        }
        return best;
    }

    double objective() const {
        const double best = best_train_mean();
        return best == kNoValue ? kNoValue : static_cast<double>(honest_total()) * best;
    }

    bool admissible(std::int64_t min_cell) const {
        for (std::size_t w = 0; w < train_sum.size(); ++w) {
            if (honest_count[w] < min_cell || train_count[w] < 1) {
                return false;
            }
        }
        return true;
    }
};

std::vector<double> candidate_thresholds(std::vector<double> values, int cap) {
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    std::vector<double> mids;
    if (values.size() < 2) {
        return mids;
    }
    mids.reserve(values.size() - 1);
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
        mids.push_back(values[i] + 0.5 * (values[i + 1] - values[i]));
    }
    const std::size_t m = mids.size();
    const std::size_t q = static_cast<std::size_t>(std::max(cap, 1));
    if (m <= q) {
        return mids;
    }
    std::vector<double> picked;
    picked.reserve(q);
    if (q == 1) {
        picked.push_back(mids[(m - 1) / 2]);
        return picked;
    }
    // Evenly spaced order statistics including both extremes.
    for (std::size_t i = 0; i < q; ++i) {
        const std::size_t idx = (i * (m - 1) + (q - 1) / 2) / (q - 1);
        if (picked.empty() || mids[idx] != picked.back()) {
            picked.push_back(mids[idx]);
        }
    }
    return picked;
}

class Grower {
public:
    Grower(const Dataset& train, const Dataset& honest, int arms, const LearnerConfig& config)
        : train_(train), honest_(honest), arms_(arms), config_(config) {}

    std::optional<Split> best_split(const Frontier& leaf) const {
        ArmTally parent(arms_);
        tally(leaf.train_rows, leaf.honest_rows, parent);
        const double parent_objective = parent.objective();

        std::optional<Split> best;
        for (std::size_t j = 0; j < train_.width(); ++j) {
            std::vector<double> values;
            values.reserve(leaf.train_rows.size());
            for (std::size_t r : leaf.train_rows) values.push_back(train_.row(r)[j]);
            const std::vector<double> thresholds = candidate_thresholds(std::move(values), config_.candidate_quantiles);
            if (thresholds.empty()) continue;

            auto by_feature = [j](const Dataset& d) {
                return [&d, j](std::size_t a, std::size_t b) {
                    const double xa = d.row(a)[j];
                    const double xb = d.row(b)[j];
                    return xa < xb || (xa == xb && a < b);
                };
            };
            std::vector<std::size_t> train_sorted = leaf.train_rows;
            std::sort(train_sorted.begin(), train_sorted.end(), by_feature(train_));
            std::vector<std::size_t> honest_sorted = leaf.honest_rows;
            std::sort(honest_sorted.begin(), honest_sorted.end(), by_feature(honest_));

            ArmTally left(arms_);
            std::size_t ti = 0;
            std::size_t hi = 0;
            for (double t : thresholds) {
                while (ti < train_sorted.size() && train_.row(train_sorted[ti])[j] <= t) {
                    const std::size_t r = train_sorted[ti++];
                    const int w = train_.arm(r) - 1;
                    left.train_sum[w] += train_.outcome(r);
                    left.train_count[w] += 1;
                }
                while (hi < honest_sorted.size() && honest_.row(honest_sorted[hi])[j] <= t) {
                    left.honest_count[honest_.arm(honest_sorted[hi++]) - 1] += 1;
                }
                ArmTally right(arms_);
                for (int w = 0; w < arms_; ++w) {
                    right.train_sum[w] = parent.train_sum[w] - left.train_sum[w];
                    right.train_count[w] = parent.train_count[w] - left.train_count[w];
                    right.honest_count[w] = parent.honest_count[w] - left.honest_count[w];
                }
                if (!left.admissible(config_.min_cell_size) || !right.admissible(config_.min_cell_size)) {
                    continue;
                }
                const double objective = left.objective() + right.objective();
                if (!best || objective > best->objective) {
                    best = Split{static_cast<int>(j), t, objective, objective - parent_objective};
                }
            }
        }
        return best;
    }

    void tally(const std::vector<std::size_t>& train_rows, const std::vector<std::size_t>& honest_rows,
               ArmTally& out) const {
        for (std::size_t r : train_rows) {
            const int w = train_.arm(r) - 1;
            out.train_sum[w] += train_.outcome(r);
            out.train_count[w] += 1;
        }
        for (std::size_t r : honest_rows) {
            out.honest_count[honest_.arm(r) - 1] += 1;
        }
    }

private:
    const Dataset& train_;
    const Dataset& honest_;
    int arms_;
    const LearnerConfig& config_;
};

void check_inputs(const Dataset& train, const Dataset& honest, int arms, const LearnerConfig& config) {
    if (arms < 1) throw ConfigError("learner needs at least one arm");
    if (config.max_leaves < 1 || config.max_depth < 0 || config.min_cell_size < 1 || config.candidate_quantiles < 1) {
        throw ConfigError("learner config requires max_leaves >= 1, max_depth >= 0, min_cell_size >= 1, candidates >= 1");
    }
    if (train.width() != honest.width()) {
        throw ShapeError("training and honest datasets have different widths");
    }
    if (train.role() == DataRole::Honest || honest.role() == DataRole::Train) {
        throw ConfigError("training and honest splits are swapped");
    }
    if (train.max_arm() > arms || honest.max_arm() > arms) {
        throw ConfigError("dataset contains an arm beyond the configured arm count");
    }
    std::vector<std::int64_t> per_arm(arms, 0);
    for (std::size_t i = 0; i < honest.size(); ++i) per_arm[honest.arm(i) - 1] += 1;
    for (int w = 0; w < arms; ++w) {
        if (per_arm[w] < config.min_cell_size) {
            std::ostringstream msg;
            msg << "honest data cannot support one leaf: arm " << (w + 1) << " has " << per_arm[w]
                << " rows, fewer than the minimum cell size " << config.min_cell_size;
            throw LearnerError(msg.str());
        }
    }
}

struct Draft {
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
};

// Emits nodes in preorder (left subtree first) and numbers leaves left to right.
int emit_preorder(const std::vector<Draft>& drafts, int id, std::vector<Partition::Node>& out, int& next_leaf) {
    const Draft& d = drafts[id];
    const int at = static_cast<int>(out.size());
    if (d.left < 0) {
        out.push_back(Partition::Node::make_leaf(next_leaf++));
        return at;
    }
    out.emplace_back();
    const int left = emit_preorder(drafts, d.left, out, next_leaf);
    const int right = emit_preorder(drafts, d.right, out, next_leaf);
    out[at] = Partition::Node::make_split(d.feature, d.threshold, left, right);
    return at;
}

}  // namespace

Partition learn_tree(const Dataset& train, const Dataset& honest, int arms, const LearnerConfig& config) {
    check_inputs(train, honest, arms, config);
    Grower grower(train, honest, arms, config);

    std::vector<Draft> drafts(1);
    std::vector<Frontier> frontier(1);
    frontier[0].train_rows.resize(train.size());
    std::iota(frontier[0].train_rows.begin(), frontier[0].train_rows.end(), std::size_t{0});
    frontier[0].honest_rows.resize(honest.size());
    std::iota(frontier[0].honest_rows.begin(), frontier[0].honest_rows.end(), std::size_t{0});

    auto refresh = [&](Frontier& f) {
        f.best = f.depth < config.max_depth ? grower.best_split(f) : std::nullopt;
    };
    refresh(frontier[0]);

    int leaves = 1;
    while (leaves < config.max_leaves) {
        // Frontier entries are in creation order, so strict > keeps the earliest.
        int pick = -1;
        for (std::size_t i = 0; i < frontier.size(); ++i) {
            if (frontier[i].best && (pick < 0 || frontier[i].best->gain > frontier[pick].best->gain)) {
                pick = static_cast<int>(i);
            }
        }
        if (pick < 0) break;

        Frontier parent = std::move(frontier[pick]);
        frontier.erase(frontier.begin() + pick);
        const Split split = *parent.best;

        Frontier left;
        Frontier right;
        for (std::size_t r : parent.train_rows) {
            (train.row(r)[split.feature] <= split.threshold ? left : right).train_rows.push_back(r);
        }
        for (std::size_t r : parent.honest_rows) {
            (honest.row(r)[split.feature] <= split.threshold ? left : right).honest_rows.push_back(r);
        }
        left.depth = right.depth = parent.depth + 1;
        left.node = static_cast<int>(drafts.size());
        right.node = left.node + 1;
        drafts.emplace_back();
        drafts.emplace_back();
        drafts[parent.node] = Draft{split.feature, split.threshold, left.node, right.node};
        refresh(left);
        refresh(right);
        frontier.push_back(std::move(left));
        frontier.push_back(std::move(right));
        ++leaves;
    }

    std::vector<Partition::Node> nodes;
    nodes.reserve(drafts.size());
    int next_leaf = 0;
    emit_preorder(drafts, 0, nodes, next_leaf);
    return Partition(train.width(), std::move(nodes));
}

}  // namespace partpower
