#pragma once

#include "ocf/dataset.hpp"
#include "ocf/rng.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace ocf::testing {

// Dataset from explicit rows; feature names are synthesized.
inline Dataset make_dataset(const std::vector<std::vector<double>>& rows,
                            const std::vector<int>& labels) {
    Dataset d;
    const std::size_t p = rows.empty() ? 0 : rows.front().size();
    for (std::size_t q = 0; q < p; ++q) d.feature_names.push_back("f" + std::to_string(q));
    for (const auto& row : rows)
        d.features.insert(d.features.end(), row.begin(), row.end());
    d.labels = labels;
    d.provenance.source = "synthetic:test";
    d.provenance.raw_rows = labels.size();
    d.provenance.raw_columns = p;
    return d;
}

// Random instance on the 1/8 grid: feature values are multiples of 0.125, so
// neighbouring distinct values are at least 0.125 apart and any epsilon below
// 0.0625 routes identically to the exact combinatorial search.
inline Dataset random_grid_dataset(std::size_t n, std::size_t p, Rng& rng) {
    std::vector<std::vector<double>> rows(n, std::vector<double>(p));
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t q = 0; q < p; ++q)
            rows[i][q] = 0.125 * static_cast<double>(rng.below(9));
        labels[i] = static_cast<int>(rng.below(2));
    }
    return make_dataset(rows, labels);
}

// All eight corners of the unit cube over three binary features, labeled by
// the majority of the three coordinates. Any single-feature stump errs on
// two corners, while three stumps voting together classify perfectly - the
// smallest instance where an ensemble strictly beats every tree.
inline Dataset majority_cube_dataset() {
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    for (int bits = 0; bits < 8; ++bits) {
        const int b0 = bits & 1, b1 = (bits >> 1) & 1, b2 = (bits >> 2) & 1;
        rows.push_back({static_cast<double>(b0), static_cast<double>(b1),
                        static_cast<double>(b2)});
        labels.push_back(b0 + b1 + b2 >= 2 ? 1 : 0);
    }
    return make_dataset(rows, labels);
}

}  // namespace ocf::testing
