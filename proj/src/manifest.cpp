#include "ocf/manifest.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "ocf/errors.hpp"

namespace ocf {

namespace {

std::string trim(const std::string& s) {
    std::size_t begin = 0;
    std::size_t end = s.size();
    while (begin < end && (s[begin] == ' ' || s[begin] == '\t')) ++begin;
    while (end > begin && (s[end - 1] == ' ' || s[end - 1] == '\t' || s[end - 1] == '\r')) --end;
    return s.substr(begin, end - begin);
}

[[noreturn]] void fail(std::size_t line, const std::string& what) {
    throw ParseError("manifest line " + std::to_string(line) + ": " + what);
}

std::vector<std::string> split_list(const std::string& body, std::size_t line) {
    std::vector<std::string> items;
    std::string current;
    for (char c : body) {
        if (c == ',') {
            items.push_back(trim(current));
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    items.push_back(trim(current));
    for (const std::string& item : items) {
        if (item.empty()) fail(line, "empty value in list '" + body + "'");
    }
    return items;
}

ColumnSpec parse_column_kind(const std::string& text, std::size_t line) {
    ColumnSpec spec;
    const std::size_t paren = text.find('(');
    std::string kind = trim(paren == std::string::npos ? text : text.substr(0, paren));
    if (paren != std::string::npos) {
        if (text.back() != ')') fail(line, "missing ')' in '" + text + "'");
        spec.values = split_list(text.substr(paren + 1, text.size() - paren - 2), line);
    }
    if (kind == "numeric") {
        spec.kind = ColumnSpec::Kind::Numeric;
    } else if (kind == "categorical") {
        spec.kind = ColumnSpec::Kind::Categorical;
    } else if (kind == "ordinal") {
        spec.kind = ColumnSpec::Kind::Ordinal;
    } else if (kind == "drop") {
        spec.kind = ColumnSpec::Kind::Drop;
    } else {
        fail(line, "unknown column kind '" + kind + "'");
    }
    const bool wants_values = spec.kind == ColumnSpec::Kind::Categorical ||
                              spec.kind == ColumnSpec::Kind::Ordinal;
    if (wants_values && spec.values.empty()) {
        fail(line, std::string(ColumnSpec::kind_name(spec.kind)) + " columns need a value list");
    }
    if (!wants_values && !spec.values.empty()) {
        fail(line, std::string(ColumnSpec::kind_name(spec.kind)) +
                       " columns take no value list");
    }
    return spec;
}

}  // namespace

const char* ColumnSpec::kind_name(Kind kind) {
    switch (kind) {
        case Kind::Numeric: return "numeric";
        case Kind::Categorical: return "categorical";
        case Kind::Ordinal: return "ordinal";
        case Kind::Drop: return "drop";
    }
    return "?";
}

const ColumnSpec* DatasetManifest::find(const std::string& name) const {
    for (const auto& [column, spec] : columns) {
        if (column == name) return &spec;
    }
    return nullptr;
}

void DatasetManifest::validate() const {
    if (label_column.empty()) throw ConfigError("manifest: label column not set");
    if (positive_label.empty()) throw ConfigError("manifest: positive label value not set");
    std::unordered_set<std::string> seen;
    for (const auto& [name, spec] : columns) {
        if (name.empty()) throw ConfigError("manifest: empty column name");
        if (!seen.insert(name).second) {
            throw ConfigError("manifest: column '" + name + "' specified twice");
        }
        if (name == label_column && spec.kind != ColumnSpec::Kind::Drop) {
            throw ConfigError("manifest: the label column cannot double as a feature");
        }
        if (spec.kind == ColumnSpec::Kind::Categorical && spec.values.size() < 2) {
            throw ConfigError("manifest: categorical column '" + name +
                              "' needs at least two categories");
        }
        if (spec.kind == ColumnSpec::Kind::Ordinal) {
            std::unordered_set<std::string> levels;
            for (const std::string& v : spec.values) {
                if (!levels.insert(v).second) {
                    throw ConfigError("manifest: ordinal column '" + name +
                                      "' repeats level '" + v + "'");
                }
            }
        }
    }
}

DatasetManifest parse_manifest(const std::string& text) {
    DatasetManifest manifest;
    std::istringstream in(text);
    std::string raw;
    std::size_t line_number = 0;
    while (std::getline(in, raw)) {
        ++line_number;
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) fail(line_number, "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (value.empty()) fail(line_number, "empty value for '" + key + "'");
        if (key == "path") {
            if (!manifest.path.empty()) fail(line_number, "path set twice");
            manifest.path = value;
        } else if (key == "label") {
            if (!manifest.label_column.empty()) fail(line_number, "label set twice");
            manifest.label_column = value;
        } else if (key == "positive") {
            if (!manifest.positive_label.empty()) fail(line_number, "positive set twice");
            manifest.positive_label = value;
        } else if (key == "column") {
            const std::size_t colon = value.find(':');
            if (colon == std::string::npos) {
                fail(line_number, "expected 'column = name : kind'");
            }
            const std::string name = trim(value.substr(0, colon));
            if (name.empty()) fail(line_number, "empty column name");
            manifest.columns.emplace_back(
                name, parse_column_kind(trim(value.substr(colon + 1)), line_number));
        } else {
            fail(line_number, "unknown key '" + key + "'");
        }
    }
    try {
        manifest.validate();
    } catch (const ConfigError& e) {
        throw ParseError(e.what());
    }
    return manifest;
}

DatasetManifest read_manifest_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("manifest: cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    DatasetManifest manifest;
    try {
        manifest = parse_manifest(buffer.str());
    } catch (const ParseError& e) {
        throw ParseError(std::string(e.what()) + " (in '" + path + "')");
    }
    if (manifest.path.empty()) {
        throw ParseError("manifest '" + path + "': no csv path given");
    }
    const std::filesystem::path csv(manifest.path);
    if (csv.is_relative()) {
        manifest.path = (std::filesystem::path(path).parent_path() / csv).string();
    }
    return manifest;
}

}  // namespace ocf
