#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ocf/dataset.hpp"

namespace ocf {

enum class SvmKernel {
    Radial,     // exp(-gamma * squared distance)
    Laplacian,  // exp(-gamma * L1 distance)
};

// Soft-margin kernel classifier used to score candidate training subsets.
// Labels are mapped to -1/+1 internally; predictions return the 0/1 class.
struct SvmModel {
    SvmKernel kernel = SvmKernel::Radial;
    double gamma = 1.0;
    double bias = 0.0;
    std::size_t feature_count = 0;
    // One support vector per row (row-major), with its dual weight already
    // multiplied by the mapped label, so each weight lies in [-C, C].
    std::vector<double> support_features;
    std::vector<double> weights;
    // Degenerate training sets with a single class collapse to a constant
    // classifier; the flag records that no margin was actually optimized.
    bool constant = false;
    int constant_class = 0;

    std::size_t support_count() const { return weights.size(); }
    double decision_value(std::span<const double> x) const;
    int predict(std::span<const double> x) const;
};

// Fits the soft-margin dual by sequential pairwise coordinate optimization
// until no pair violates the KKT conditions beyond tolerance 1e-3 (with a
// hard bound on full passes). gamma <= 0 selects the default 1/feature_count.
SvmModel train_svm(const Dataset& data, double gamma, double regularization,
                   SvmKernel kernel = SvmKernel::Radial);

// Fraction of rows whose predicted class matches the label.
double svm_accuracy(const SvmModel& model, const Dataset& data);

}  // namespace ocf
