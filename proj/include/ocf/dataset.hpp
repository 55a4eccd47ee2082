#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace ocf {

// Per-feature affine scaling fitted on some reference matrix (normally the
// training fold). Constant columns get span 0 and map to all-zeros.
struct ScalingParams {
    std::vector<double> min_value;
    std::vector<double> span;  // max - min; 0 marks a constant column

    std::size_t feature_count() const { return min_value.size(); }
};

struct DatasetProvenance {
    std::string source;             // file path or synthetic tag
    std::size_t raw_rows = 0;       // before N/A filtering
    std::size_t raw_columns = 0;    // before encoding
    std::size_t dropped_rows = 0;   // rows removed by the N/A policy
    ScalingParams scaling;          // applied normalization, empty if none
    std::string notes;
};

// Normalized observations in [0,1]^p with binary labels. Row-major features.
struct Dataset {
    std::vector<double> features;  // n * p, row-major
    std::vector<int> labels;       // length n, values in {0,1}
    std::vector<std::string> feature_names;
    DatasetProvenance provenance;

    std::size_t size() const { return labels.size(); }
    std::size_t feature_count() const { return feature_names.size(); }

    const double* row(std::size_t i) const { return features.data() + i * feature_count(); }
    double at(std::size_t i, std::size_t q) const { return features[i * feature_count() + q]; }

    // Majority training class; ties resolve to 0.
    int majority_class() const;

    // Subset by row indices, preserving names and provenance.
    Dataset select(const std::vector<std::size_t>& rows) const;

    // Throws unless every value is in [0,1], labels are 0/1 and shapes agree.
    void validate() const;
};

// Fit min-max parameters on the given matrix (n rows, p columns, row-major).
ScalingParams fit_scaling(const std::vector<double>& matrix, std::size_t n, std::size_t p);

// Apply previously fitted parameters; outputs clipped to [0,1].
std::vector<double> normalize_with(const ScalingParams& params, const std::vector<double>& matrix,
                                   std::size_t n, std::size_t p);

}  // namespace ocf
