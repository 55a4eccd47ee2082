#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace ocf {

// One train/validation/test split, as ascending row indices.
struct FoldTriple {
    std::vector<std::size_t> train;
    std::vector<std::size_t> validation;
    std::vector<std::size_t> test;
};

// Repeated cross-validation layout: each repeat shuffles all observations
// into `fold_count` near-equal folds, and each rotation assigns fold k to
// testing, fold k+1 to validation, and the rest to training.
struct FoldPlan {
    std::uint64_t seed = 0;
    int repeat_count = 5;
    int fold_count = 4;
    std::size_t observation_count = 0;
    // folds[repeat][fold] = ascending observation indices
    std::vector<std::vector<std::vector<std::size_t>>> folds;

    int rotation_count() const { return fold_count; }
    FoldTriple triple(int repeat, int rotation) const;

    // Throws InternalError unless every repeat partitions all observations
    // into folds whose sizes differ by at most one.
    void validate() const;
};

// Deterministic plan over n observations: 5 repeats x 4 folds. Needs at
// least 8 observations so every fold holds 2 or more.
FoldPlan make_folds(std::size_t n, std::uint64_t seed);

// Stable text rendering for auditing which observation went where.
std::string fold_plan_to_text(const FoldPlan& plan);

}  // namespace ocf
