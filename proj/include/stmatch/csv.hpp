#ifndef STMATCH_CSV_HPP
#define STMATCH_CSV_HPP

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <istream>
#include <string>
#include <vector>

namespace stmatch {

// RFC-4180-style row reader: double-quoted fields may contain the delimiter,
// newlines and doubled quotes. Lines starting with '#' are comments (output
// files carry a seed header) and are skipped, as are blank lines.
class CsvReader {
public:
  explicit CsvReader(std::istream &in, char delimiter = ',');

  // Reads the next data row into `fields`. Returns false at end of input.
  bool next_row(std::vector<std::string> &fields);

  // 1-based line number of the first line of the row last returned.
  std::size_t row_line() const { return row_line_; }

private:
  std::istream &in_;
  char delimiter_;
  std::size_t line_ = 0;
  std::size_t row_line_ = 0;
};

// Returns the field quoted iff it contains the delimiter, a quote or a
// newline.
std::string csv_field(const std::string &value, char delimiter = ',');

// Header helper: maps wanted column names to their indices.
// Throws FormatError when a wanted column is absent.
std::vector<std::size_t> csv_header_indices(const std::vector<std::string> &header,
                                            const std::vector<std::string> &wanted,
                                            const std::string &file_label);

// Opens a file for reading, throwing FormatError when it cannot be opened.
std::ifstream open_input(const std::filesystem::path &path);

// Opens a file for writing (parent directories created), throwing
// FormatError on failure.
std::ofstream open_output(const std::filesystem::path &path);

} // namespace stmatch

#endif
