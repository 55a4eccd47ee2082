#include "ocf/ingest.hpp"

#include <charconv>
#include <cstddef>
#include <string>
#include <vector>

#include "ocf/errors.hpp"

namespace ocf {

namespace {

bool is_missing(const std::string& cell) {
    if (cell.empty() || cell == "?") return true;
    std::string lower;
    lower.reserve(cell.size());
    for (char c : cell) lower.push_back(c >= 'A' && c <= 'Z' ? char(c - 'A' + 'a') : c);
    return lower == "na" || lower == "n/a";
}

double parse_number(const std::string& cell, std::size_t line, const std::string& column) {
    double value = 0.0;
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) {
        throw ParseError("csv line " + std::to_string(line) + ", column '" + column +
                         "': cannot read '" + cell + "' as a number");
    }
    return value;
}

std::size_t value_rank(const ColumnSpec& spec, const std::string& cell, std::size_t line,
                       const std::string& column) {
    for (std::size_t k = 0; k < spec.values.size(); ++k) {
        if (spec.values[k] == cell) return k;
    }
    throw DataError("csv line " + std::to_string(line) + ", column '" + column + "': value '" +
                    cell + "' is not one of the declared " +
                    ColumnSpec::kind_name(spec.kind) + " values");
}

}  // namespace

Dataset build_dataset(const CsvTable& table, const DatasetManifest& manifest) {
    manifest.validate();
    const std::size_t label_col = table.column_index(manifest.label_column);
    for (const auto& [name, spec] : manifest.columns) {
        table.column_index(name);  // throws when the manifest names a ghost column
    }

    // Which raw columns become features, in header order.
    struct UsedColumn {
        std::size_t index;
        std::string name;
        const ColumnSpec* spec;  // null = default numeric
    };
    static const ColumnSpec kNumeric{};
    std::vector<UsedColumn> used;
    for (std::size_t q = 0; q < table.column_count(); ++q) {
        if (q == label_col) continue;
        const ColumnSpec* spec = manifest.find(table.header[q]);
        if (spec != nullptr && spec->kind == ColumnSpec::Kind::Drop) continue;
        used.push_back({q, table.header[q], spec == nullptr ? &kNumeric : spec});
    }
    if (used.empty()) throw DataError("manifest leaves no feature columns");

    Dataset data;
    for (const UsedColumn& column : used) {
        if (column.spec->kind == ColumnSpec::Kind::Categorical) {
            for (const std::string& value : column.spec->values) {
                data.feature_names.push_back(column.name + "=" + value);
            }
        } else {
            data.feature_names.push_back(column.name);
        }
    }
    const std::size_t p = data.feature_names.size();

    std::vector<double> raw;
    std::size_t kept = 0;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const std::vector<std::string>& row = table.rows[r];
        const std::size_t line = table.row_lines[r];

        bool missing = is_missing(row[label_col]);
        for (const UsedColumn& column : used) {
            if (missing) break;
            missing = is_missing(row[column.index]);
        }
        if (missing) continue;

        for (const UsedColumn& column : used) {
            const std::string& cell = row[column.index];
            switch (column.spec->kind) {
                case ColumnSpec::Kind::Numeric:
                    raw.push_back(parse_number(cell, line, column.name));
                    break;
                case ColumnSpec::Kind::Ordinal:
                    raw.push_back(static_cast<double>(
                        value_rank(*column.spec, cell, line, column.name)));
                    break;
                case ColumnSpec::Kind::Categorical: {
                    const std::size_t rank = value_rank(*column.spec, cell, line, column.name);
                    for (std::size_t k = 0; k < column.spec->values.size(); ++k) {
                        raw.push_back(k == rank ? 1.0 : 0.0);
                    }
                    break;
                }
                case ColumnSpec::Kind::Drop:
                    break;  // filtered out above
            }
        }
        data.labels.push_back(row[label_col] == manifest.positive_label ? 1 : 0);
        ++kept;
    }

    if (kept == 0) {
        throw DataError("every row was removed by the missing-value policy (" +
                        std::to_string(table.rows.size()) + " raw rows)");
    }

    data.provenance.source = manifest.path.empty() ? "inline-csv" : manifest.path;
    data.provenance.raw_rows = table.rows.size();
    data.provenance.raw_columns = table.column_count();
    data.provenance.dropped_rows = table.rows.size() - kept;
    data.provenance.scaling = fit_scaling(raw, kept, p);
    data.features = normalize_with(data.provenance.scaling, raw, kept, p);

    bool has_positive = false;
    bool has_negative = false;
    for (int label : data.labels) (label == 1 ? has_positive : has_negative) = true;
    if (!has_positive || !has_negative) {
        data.provenance.notes = "single-class labels: no row matched '" +
                                manifest.positive_label + "'";
        if (has_positive) {
            data.provenance.notes = "single-class labels: every row matched '" +
                                    manifest.positive_label + "'";
        }
    }

    data.validate();
    return data;
}

Dataset load_dataset(const DatasetManifest& manifest) {
    manifest.validate();
    if (manifest.path.empty()) throw ConfigError("manifest has no csv path to load");
    return build_dataset(read_csv_file(manifest.path), manifest);
}

}  // namespace ocf
