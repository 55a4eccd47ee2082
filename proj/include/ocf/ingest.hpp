#pragma once

#include "ocf/csv.hpp"
#include "ocf/dataset.hpp"
#include "ocf/manifest.hpp"

namespace ocf {

// Turn a parsed table into a modeling dataset per the manifest: rows with
// missing cells in used columns are removed, categoricals one-hot expand,
// ordinals map to their rank, every feature is min-max scaled to [0,1]
// (constant columns become all-zeros), and labels become 1 exactly where the
// raw label equals the manifest's positive value. Provenance records the raw
// shape, the number of removed rows, and the fitted scaling.
Dataset build_dataset(const CsvTable& table, const DatasetManifest& manifest);

// Read manifest.path and build.
Dataset load_dataset(const DatasetManifest& manifest);

}  // namespace ocf
