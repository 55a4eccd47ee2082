#pragma once

#include "ocf/dataset.hpp"

#include <cstddef>
#include <vector>

namespace ocf {

// Sorted canonical thresholds for axis-aligned splits on one feature: the
// midpoints between consecutive distinct observed values. Any threshold
// strictly between the same two data values routes identically, so these
// midpoints cover every achievable partition. Constant features yield an
// empty set.
std::vector<double> candidate_midpoints(const std::vector<double>& values);
std::vector<double> candidate_midpoints(const Dataset& data, std::size_t feature);

// Default minimum leaf occupancy: 2.5% of the training rows, rounded up,
// never below one. Exact integer arithmetic so every platform agrees.
int default_min_leaf_size(std::size_t train_size);

// Smallest gap between consecutive distinct values of any single feature;
// +infinity when every feature is constant. A routing margin below half this
// gap cannot exclude any midpoint threshold, which keeps margin-based and
// margin-free learners searching the same effective split space.
double minimum_feature_gap(const Dataset& data);

}  // namespace ocf
