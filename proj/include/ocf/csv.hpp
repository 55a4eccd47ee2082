#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace ocf {

// Parsed comma-separated table. The first record is the mandatory header;
// every data row has exactly one cell per header column.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    // File line number (1-based) where each data row started; quoted cells
    // may span lines, so this can advance by more than one per row. Used to
    // point error messages at the offending place in the source file.
    std::vector<std::size_t> row_lines;

    std::size_t column_count() const { return header.size(); }

    // Index of a named column; throws DataError when absent.
    std::size_t column_index(const std::string& name) const;
};

// Strict comma-separated parser: double quotes delimit cells that may contain
// commas, newlines, and doubled quotes; both LF and CRLF records are
// accepted; fully empty lines are skipped. Whitespace around unquoted cells
// is trimmed, quoted cells are kept verbatim. Structural problems (ragged
// rows, unterminated quotes, duplicate header names) throw ParseError naming
// the line.
CsvTable parse_csv(const std::string& text);

// Reads and parses a file; errors mention the path.
CsvTable read_csv_file(const std::string& path);

}  // namespace ocf
