#include "stmatch/csv.hpp"

#include "stmatch/errors.hpp"

#include <algorithm>

namespace stmatch {

CsvReader::CsvReader(std::istream &in, char delimiter)
    : in_(in), delimiter_(delimiter) {}

bool CsvReader::next_row(std::vector<std::string> &fields) {
  fields.clear();
  std::string line;
  // Skip blank and comment lines.
  for (;;) {
    if (!std::getline(in_, line))
      return false;
    ++line_;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.empty())
      continue;
    if (line[0] == '#')
      continue;
    break;
  }
  row_line_ = line_;

  std::string field;
  bool in_quotes = false;
  std::size_t pos = 0;
  for (;;) {
    if (pos == line.size()) {
      if (in_quotes) {
        // Quoted field spanning a physical line.
        if (!std::getline(in_, line)) {
          throw FormatError("unterminated quoted field at line " +
                            std::to_string(row_line_));
        }
        ++line_;
        if (!line.empty() && line.back() == '\r')
          line.pop_back();
        field.push_back('\n');
        pos = 0;
        continue;
      }
      break;
    }
    char c = line[pos];
    if (in_quotes) {
      if (c == '"') {
        if (pos + 1 < line.size() && line[pos + 1] == '"') {
          field.push_back('"');
          pos += 2;
        } else {
          in_quotes = false;
          ++pos;
        }
      } else {
        field.push_back(c);
        ++pos;
      }
    } else if (c == '"' && field.empty()) {
      in_quotes = true;
      ++pos;
    } else if (c == delimiter_) {
      fields.push_back(std::move(field));
      field.clear();
      ++pos;
    } else {
      field.push_back(c);
      ++pos;
    }
  }
  fields.push_back(std::move(field));
  return true;
}

std::string csv_field(const std::string &value, char delimiter) {
  bool needs_quotes =
      value.find_first_of(std::string("\"\n") + delimiter) != std::string::npos;
  if (!needs_quotes)
    return value;
  std::string out = "\"";
  for (char c : value) {
    if (c == '"')
      out += "\"\"";
    else
      out += c;
  }
  out += '"';
  return out;
}

std::vector<std::size_t> csv_header_indices(const std::vector<std::string> &header,
                                            const std::vector<std::string> &wanted,
                                            const std::string &file_label) {
  std::vector<std::size_t> out;
  out.reserve(wanted.size());
  for (const auto &name : wanted) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end())
      throw FormatError(file_label + ": missing column '" + name + "'");
    out.push_back(static_cast<std::size_t>(it - header.begin()));
  }
  return out;
}

std::ifstream open_input(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in)
    throw FormatError("cannot open " + path.string());
  return in;
}

std::ofstream open_output(const std::filesystem::path &path) {
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out)
    throw FormatError("cannot write " + path.string());
  return out;
}

} // namespace stmatch
