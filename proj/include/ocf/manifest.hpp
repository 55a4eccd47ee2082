#pragma once

#include <string>
#include <utility>
#include <vector>

namespace ocf {

// How one raw column becomes features (or disappears).
struct ColumnSpec {
    enum class Kind {
        Numeric,      // parsed as a real number
        Categorical,  // one-hot over the listed categories
        Ordinal,      // mapped to its 0-based rank in the listed order
        Drop,         // excluded entirely
    };
    Kind kind = Kind::Numeric;
    std::vector<std::string> values;  // categories or ordered levels

    static const char* kind_name(Kind kind);
};

// Flat description of how to turn one CSV file into a modeling dataset.
// Columns not listed are treated as numeric. Cells reading as empty, "na",
// "n/a", or "?" (case-insensitive) mark the whole row for removal.
struct DatasetManifest {
    std::string path;            // CSV location; relative to the manifest file
    std::string label_column;
    std::string positive_label;  // raw label value mapped to class 1
    std::vector<std::pair<std::string, ColumnSpec>> columns;

    const ColumnSpec* find(const std::string& name) const;
    void validate() const;
};

// Parse the flat key-value format:
//
//   # comment
//   path = heart.csv
//   label = class
//   positive = 2
//   column = thal : categorical(3, 6, 7)
//   column = slope : ordinal(1, 2, 3)
//   column = id : drop
//
// Unknown keys, malformed column specs, and duplicate settings throw
// ParseError naming the line. The result is validated before returning.
DatasetManifest parse_manifest(const std::string& text);

// Reads a manifest file; a relative csv path is resolved against the
// manifest's own directory.
DatasetManifest read_manifest_file(const std::string& path);

}  // namespace ocf
