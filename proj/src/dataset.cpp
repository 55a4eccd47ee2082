#include "ocf/dataset.hpp"

#include "ocf/errors.hpp"

#include <algorithm>
#include <string>

namespace ocf {

int Dataset::majority_class() const {
    std::size_t ones = 0;
    for (int y : labels) ones += static_cast<std::size_t>(y);
    return 2 * ones > labels.size() ? 1 : 0;
}

Dataset Dataset::select(const std::vector<std::size_t>& rows) const {
    const std::size_t p = feature_count();
    Dataset out;
    out.feature_names = feature_names;
    out.provenance = provenance;
    out.features.reserve(rows.size() * p);
    out.labels.reserve(rows.size());
    for (std::size_t r : rows) {
        if (r >= size()) throw DataError("Dataset::select: row index out of range");
        out.features.insert(out.features.end(), row(r), row(r) + p);
        out.labels.push_back(labels[r]);
    }
    return out;
}

void Dataset::validate() const {
    const std::size_t n = labels.size();
    const std::size_t p = feature_names.size();
    if (n == 0 || p == 0) throw DataError("dataset must have at least one row and one feature");
    if (features.size() != n * p) throw DataError("dataset feature matrix shape mismatch");
    for (double v : features)
        if (!(v >= 0.0 && v <= 1.0)) throw DataError("dataset feature value outside [0,1]: " + std::to_string(v));
    for (int y : labels)
        if (y != 0 && y != 1) throw DataError("dataset label outside {0,1}");
}

ScalingParams fit_scaling(const std::vector<double>& matrix, std::size_t n, std::size_t p) {
    if (matrix.size() != n * p) throw DataError("fit_scaling: matrix shape mismatch");
    if (n == 0) throw DataError("fit_scaling: empty matrix");
    ScalingParams params;
    params.min_value.resize(p);
    params.span.resize(p);
    for (std::size_t q = 0; q < p; ++q) {
        double lo = matrix[q], hi = matrix[q];
        for (std::size_t i = 1; i < n; ++i) {
            lo = std::min(lo, matrix[i * p + q]);
            hi = std::max(hi, matrix[i * p + q]);
        }
        params.min_value[q] = lo;
        params.span[q] = hi - lo;
    }
    return params;
}

std::vector<double> normalize_with(const ScalingParams& params, const std::vector<double>& matrix,
                                   std::size_t n, std::size_t p) {
    if (params.feature_count() != p) throw DataError("normalize_with: parameter dimension mismatch");
    if (matrix.size() != n * p) throw DataError("normalize_with: matrix shape mismatch");
    std::vector<double> out(matrix.size());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t q = 0; q < p; ++q) {
            double v = matrix[i * p + q];
            double scaled = params.span[q] == 0.0 ? 0.0 : (v - params.min_value[q]) / params.span[q];
            out[i * p + q] = std::clamp(scaled, 0.0, 1.0);
        }
    }
    return out;
}

}  // namespace ocf
