#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ocf/dataset.hpp"
#include "ocf/svm.hpp"

namespace ocf {

// Best-of-K random downsampling: draw K seeded subsets of the training fold,
// score each with a cheap classifier on the validation fold, keep the most
// accurate subset (earliest draw wins ties).
struct SubsetSearchConfig {
    std::size_t subset_size = 75;
    int iterations = 100;
    std::uint64_t seed = 0;

    enum class Scorer {
        Svm,               // kernel classifier trained on the candidate subset
        MajorityBaseline,  // constant classifier at the subset's majority class
    };
    Scorer scorer = Scorer::Svm;

    // Scorer hyperparameters (used by the Svm scorer only). gamma <= 0 picks
    // the 1/feature_count default.
    SvmKernel kernel = SvmKernel::Radial;
    double gamma = 0.0;
    double regularization = 1.0;

    void validate() const;
};

struct SubsetSelection {
    std::vector<std::size_t> indices;  // ascending positions into the training fold
    double validation_accuracy = 0.0;
    int iteration = 0;  // which draw won (0-based)
};

// Draw `iterations` independent subsets of the training fold and return the
// one whose scorer predicts the validation fold best. Draw k depends only on
// (seed, k), so raising the iteration count keeps every earlier candidate and
// can only improve the winner.
SubsetSelection select_training_subset(const Dataset& train, const Dataset& validation,
                                       const SubsetSearchConfig& config);

}  // namespace ocf
