#include "lpcoreset/csv_io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

namespace lpcoreset {

namespace {

struct Line {
  std::size_t number;
  std::vector<double> values;
};

std::vector<double> parse_fields(const std::string& text, const std::string& where) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string field;
  while (std::getline(ss, field, ',')) {
    const char* begin = field.c_str();
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(begin, &end);
    while (*end == ' ' || *end == '\t' || *end == '\r') ++end;
    if (end == begin || *end != '\0' || errno == ERANGE)
      throw InvalidInput(where + ": cannot parse '" + field + "' as a number");
    if (!std::isfinite(v)) throw InvalidInput(where + ": non-finite value");
    values.push_back(v);
  }
  if (!text.empty() && text.back() == ',') throw InvalidInput(where + ": trailing comma");
  return values;
}

std::vector<Line> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open '" + path + "'");
  std::vector<Line> lines;
  std::string text;
  for (std::size_t number = 1; std::getline(in, text); ++number) {
    const auto first = text.find_first_not_of(" \t\r");
    if (first == std::string::npos || text[first] == '#') continue;
    lines.push_back({number, parse_fields(text, path + ":" + std::to_string(number))});
  }
  return lines;
}

}  // namespace

DenseMatrix read_matrix_csv(const std::string& path) {
  const std::vector<Line> lines = read_lines(path);
  if (lines.empty()) throw InvalidInput("'" + path + "' holds no rows");
  const std::size_t cols = lines.front().values.size();
  DenseMatrix a(static_cast<Eigen::Index>(lines.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].values.size() != cols)
      throw InvalidInput(path + ":" + std::to_string(lines[i].number) + ": expected " +
                         std::to_string(cols) + " columns");
    for (std::size_t j = 0; j < cols; ++j)
      a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = lines[i].values[j];
  }
  return a;
}

DenseVector read_vector(const std::string& path) {
  const std::vector<Line> lines = read_lines(path);
  if (lines.empty()) throw InvalidInput("'" + path + "' holds no values");
  DenseVector v(static_cast<Eigen::Index>(lines.size()));
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].values.size() != 1)
      throw InvalidInput(path + ":" + std::to_string(lines[i].number) + ": expected one value per line");
    v[static_cast<Eigen::Index>(i)] = lines[i].values.front();
  }
  return v;
}

std::vector<std::vector<SparseEntry>> read_sparse_triplets(const std::string& path, std::size_t rows,
                                                           std::size_t cols) {
  std::vector<std::vector<SparseEntry>> out(rows);
  for (const Line& line : read_lines(path)) {
    const std::string where = path + ":" + std::to_string(line.number);
    if (line.values.size() != 3) throw InvalidInput(where + ": expected row,col,value");
    const double r = line.values[0];
    const double c = line.values[1];
    if (r < 0 || c < 0 || r != std::floor(r) || c != std::floor(c) || r >= static_cast<double>(rows) ||
        c >= static_cast<double>(cols))
      throw InvalidInput(where + ": index out of range");
    out[static_cast<std::size_t>(r)].push_back({static_cast<std::size_t>(c), line.values[2]});
  }
  return out;
}

void write_vector(std::ostream& out, const DenseVector& x,
                  const std::vector<std::pair<std::string, std::string>>& header) {
  for (const auto& [k, v] : header) out << "# " << k << '=' << v << '\n';
  char buf[40];
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", x[i]);
    out << buf << '\n';
  }
}

void write_matrix_csv(std::ostream& out, const DenseMatrix& a) {
  char buf[40];
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", a(i, j));
      out << (j ? "," : "") << buf;
    }
    out << '\n';
  }
}

}  // namespace lpcoreset
