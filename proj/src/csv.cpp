#include "ocf/csv.hpp"

#include <fstream>
#include <sstream>
#include <unordered_set>

#include "ocf/errors.hpp"

namespace ocf {

namespace {

bool is_blank(const std::string& cell) {
    for (char c : cell) {
        if (c != ' ' && c != '\t') return false;
    }
    return true;
}

std::string trim(const std::string& cell) {
    std::size_t begin = 0;
    std::size_t end = cell.size();
    while (begin < end && (cell[begin] == ' ' || cell[begin] == '\t')) ++begin;
    while (end > begin && (cell[end - 1] == ' ' || cell[end - 1] == '\t')) --end;
    return cell.substr(begin, end - begin);
}

struct Record {
    std::vector<std::string> cells;
    std::size_t line = 0;  // where the record started
};

// One pass over the text, emitting complete records. Tracks the 1-based
// physical line so messages can point into the file even when quoted cells
// span several lines.
std::vector<Record> split_records(const std::string& text) {
    std::vector<Record> records;
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;        // inside an open quote
    bool cell_was_quoted = false;
    bool cell_started = false;  // any content or quote seen for this cell
    std::size_t line = 1;
    std::size_t record_line = 1;

    std::size_t i = 0;
    // Skip a UTF-8 byte-order mark, which some exporters prepend.
    if (text.size() >= 3 && text.compare(0, 3, "\xef\xbb\xbf") == 0) i = 3;

    auto finish_cell = [&] {
        cells.push_back(cell_was_quoted ? cell : trim(cell));
        cell.clear();
        cell_was_quoted = false;
        cell_started = false;
    };
    auto finish_record = [&] {
        finish_cell();
        // A record with one blank unquoted cell is an empty line; skip it.
        if (cells.size() == 1 && cells[0].empty()) {
            cells.clear();
            return;
        }
        records.push_back({std::move(cells), record_line});
        cells = {};
    };

    for (; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    cell.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                if (c == '\n') ++line;
                cell.push_back(c);
            }
            continue;
        }
        switch (c) {
            case '"':
                if (cell_was_quoted || !is_blank(cell)) {
                    throw ParseError("csv line " + std::to_string(line) +
                                     ": quote opened in the middle of a cell");
                }
                cell.clear();  // drop padding before the quote
                quoted = true;
                cell_was_quoted = true;
                cell_started = true;
                break;
            case ',':
                finish_cell();
                break;
            case '\r':
                if (i + 1 < text.size() && text[i + 1] == '\n') break;  // handled at \n
                [[fallthrough]];
            case '\n':
                finish_record();
                ++line;
                record_line = line;
                break;
            default:
                if (cell_was_quoted && c != ' ' && c != '\t') {
                    throw ParseError("csv line " + std::to_string(line) +
                                     ": text after a closing quote");
                }
                if (!cell_was_quoted) {
                    cell.push_back(c);
                    cell_started = true;
                }
                break;
        }
    }
    if (quoted) {
        throw ParseError("csv line " + std::to_string(record_line) +
                         ": quoted cell never closed");
    }
    if (cell_started || !cells.empty()) finish_record();
    return records;
}

}  // namespace

std::size_t CsvTable::column_index(const std::string& name) const {
    for (std::size_t q = 0; q < header.size(); ++q) {
        if (header[q] == name) return q;
    }
    throw DataError("csv: no column named '" + name + "'");
}

CsvTable parse_csv(const std::string& text) {
    const std::vector<Record> records = split_records(text);
    if (records.empty()) throw ParseError("csv: no header row");

    CsvTable table;
    table.header = records.front().cells;
    std::unordered_set<std::string> seen;
    for (const std::string& name : table.header) {
        if (name.empty()) {
            throw ParseError("csv line " + std::to_string(records.front().line) +
                             ": empty header name");
        }
        if (!seen.insert(name).second) {
            throw ParseError("csv line " + std::to_string(records.front().line) +
                             ": duplicate header name '" + name + "'");
        }
    }

    for (std::size_t r = 1; r < records.size(); ++r) {
        const Record& record = records[r];
        if (record.cells.size() != table.header.size()) {
            throw ParseError("csv line " + std::to_string(record.line) + ": expected " +
                             std::to_string(table.header.size()) + " cells, got " +
                             std::to_string(record.cells.size()));
        }
        table.rows.push_back(record.cells);
        table.row_lines.push_back(record.line);
    }
    return table;
}

CsvTable read_csv_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("csv: cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    try {
        return parse_csv(buffer.str());
    } catch (const ParseError& e) {
        throw ParseError(std::string(e.what()) + " (in '" + path + "')");
    }
}

}  // namespace ocf
