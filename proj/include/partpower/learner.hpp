#pragma once

#include <cstdint>

#include "partpower/partition.hpp"

namespace partpower {

struct LearnerConfig {
    int max_leaves = 8;
    int max_depth = 8;
    // Per arm per leaf, counted on the honest split.
    std::int64_t min_cell_size = 1;
    // Cap on candidate thresholds evaluated per feature per node.
    int candidate_quantiles = 32;
};

// Greedy best-first policy tree.
//
// Every node split maximizes the policy objective
//     sum over children c of  n_honest(c) * max_w mean_train(w, c)
// where mean_train(w, c) is the mean training outcome of arm w in c (a
// plug-in reward imputer). A split is admissible only if each (arm, child)
// cell holds at least min_cell_size honest rows and one training row.
// Honest outcomes are never read, so the partition is independent of them
// given honest features and arms.
//
// Growth stops at max_leaves, at max_depth, or when no leaf has an admissible
// split. Among leaves the largest objective gain is split first; ties go to
// the earliest created leaf. Within a node ties go to the lower feature index,
// then the smaller threshold. Leaf ids are assigned in left-to-right order.
//
// Throws LearnerError if some arm has fewer than min_cell_size honest rows in
// total, ShapeError on width mismatch.
Partition learn_tree(const Dataset& train, const Dataset& honest, int arms, const LearnerConfig& config);

}  // namespace partpower
