#include "gsk/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace gsk {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  fields.push_back(cur);
  return fields;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& field, const std::string& path, int line,
                    int column) {
  const std::string t = trim(field);
  double out = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), out);
  if (res.ec != std::errc() || res.ptr != t.data() + t.size())
    throw std::invalid_argument(path + ":" + std::to_string(line) +
                                ": column " + std::to_string(column) +
                                " is not a number: '" + field + "'");
  return out;
}

// Returns the input column count after checking the header is x1..xd[,y].
int parse_header(const std::vector<std::string>& fields, bool expect_y,
                 const std::string& path) {
  const int n = static_cast<int>(fields.size());
  const int d = expect_y ? n - 1 : n;
  if (d < 1)
    throw std::invalid_argument(path + ":1: header needs at least one input column");
  for (int j = 0; j < d; ++j) {
    const std::string want = "x" + std::to_string(j + 1);
    if (trim(fields[static_cast<std::size_t>(j)]) != want)
      throw std::invalid_argument(path + ":1: expected header column '" + want +
                                  "', got '" + fields[static_cast<std::size_t>(j)] +
                                  "'");
  }
  if (expect_y && trim(fields.back()) != "y")
    throw std::invalid_argument(path + ":1: missing 'y' column in header");
  return d;
}

Mat read_table(const std::string& path, bool expect_y, Vec* y_out) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open CSV file: " + path);
  std::string line;
  if (!std::getline(in, line))
    throw std::invalid_argument(path + ":1: empty file, expected a header");
  const int d = parse_header(split_line(line), expect_y, path);

  std::vector<std::vector<double>> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto fields = split_line(line);
    const int want = expect_y ? d + 1 : d;
    if (static_cast<int>(fields.size()) != want)
      throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                  ": expected " + std::to_string(want) +
                                  " fields, got " + std::to_string(fields.size()));
    std::vector<double> row(static_cast<std::size_t>(want));
    for (int j = 0; j < want; ++j)
      row[static_cast<std::size_t>(j)] =
          parse_double(fields[static_cast<std::size_t>(j)], path, lineno, j + 1);
    rows.push_back(std::move(row));
  }

  Mat X(static_cast<Eigen::Index>(rows.size()), d);
  if (y_out) y_out->resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (int j = 0; j < d; ++j)
      X(static_cast<Eigen::Index>(i), j) = rows[i][static_cast<std::size_t>(j)];
    if (y_out) (*y_out)[static_cast<Eigen::Index>(i)] = rows[i].back();
  }
  return X;
}

}  // namespace

Dataset read_dataset_csv(const std::string& path) {
  Dataset data;
  data.X = read_table(path, true, &data.y);
  if (data.X.rows() < 1)
    throw std::invalid_argument(path + ": no data rows after the header");
  return data;
}

Mat read_inputs_csv(const std::string& path) {
  return read_table(path, false, nullptr);
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write CSV file: " + path);
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (j) out << ',';
    out << header[j];
  }
  out << '\n';
  for (const auto& row : rows) {
    if (row.size() != header.size())
      throw std::invalid_argument("write_csv: row width differs from header");
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out << ',';
      out << format_double(row[j]);
    }
    out << '\n';
  }
}

}  // namespace gsk
