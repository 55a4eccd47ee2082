#include "ocf/splits.hpp"

#include "ocf/errors.hpp"

#include <algorithm>
#include <limits>

namespace ocf {

std::vector<double> candidate_midpoints(const std::vector<double>& values) {
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> mids;
    for (std::size_t k = 1; k < sorted.size(); ++k) {
        if (sorted[k] > sorted[k - 1]) {
            double mid = 0.5 * (sorted[k - 1] + sorted[k]);
            // Guard against a midpoint collapsing onto a data value when the
            // gap is below double resolution; such a split cannot separate
            // the pair anyway.
            if (mid > sorted[k - 1] && mid < sorted[k]) mids.push_back(mid);
        }
    }
    return mids;
}

std::vector<double> candidate_midpoints(const Dataset& data, std::size_t feature) {
    if (feature >= data.feature_count())
        throw ConfigError("candidate_midpoints: feature index out of range");
    std::vector<double> column(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) column[i] = data.at(i, feature);
    return candidate_midpoints(column);
}

int default_min_leaf_size(std::size_t train_size) {
    if (train_size == 0) throw ConfigError("default_min_leaf_size: empty training set");
    return static_cast<int>((train_size * 25 + 999) / 1000);
}

double minimum_feature_gap(const Dataset& data) {
    data.validate();
    double gap = std::numeric_limits<double>::infinity();
    std::vector<double> column(data.size());
    for (std::size_t q = 0; q < data.feature_count(); ++q) {
        for (std::size_t i = 0; i < data.size(); ++i) column[i] = data.at(i, q);
        std::sort(column.begin(), column.end());
        for (std::size_t k = 1; k < column.size(); ++k)
            if (column[k] > column[k - 1]) gap = std::min(gap, column[k] - column[k - 1]);
    }
    return gap;
}

}  // namespace ocf
