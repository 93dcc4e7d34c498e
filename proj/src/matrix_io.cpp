#include "opnorm/matrix_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>
#include <vector>

#include "opnorm/errors.hpp"

namespace opnorm {
namespace {

std::string Lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::vector<std::string_view> SplitFields(std::string_view line,
                                          bool tabs_only) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  if (tabs_only) {
    while (true) {
      const std::size_t next = line.find('\t', i);
      fields.push_back(line.substr(i, next - i));
      if (next == std::string_view::npos) break;
      i = next + 1;
    }
    for (auto& f : fields) {
      while (!f.empty() && (f.front() == ' ' || f.front() == '\r')) f.remove_prefix(1);
      while (!f.empty() && (f.back() == ' ' || f.back() == '\r')) f.remove_suffix(1);
    }
    return fields;
  }
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i >= line.size()) break;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    fields.push_back(line.substr(i, j - i));
    i = j;
  }
  return fields;
}

bool IsBlank(std::string_view line) {
  return std::all_of(line.begin(), line.end(), [](unsigned char c) {
    return std::isspace(c);
  });
}

double ParseReal(std::string_view field, std::size_t line) {
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() ||
      !std::isfinite(value)) {
    throw FormatError("not a finite real number: '" + std::string(field) + "'",
                      line);
  }
  return value;
}

std::size_t ParseCount(std::string_view field, std::size_t line) {
  std::size_t value = 0;
  const auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw FormatError("not a nonnegative integer: '" + std::string(field) + "'",
                      line);
  }
  return value;
}

void CheckDims(std::size_t rows, std::size_t cols, std::size_t max_dim,
               std::size_t line) {
  if (rows == 0 || cols == 0) throw FormatError("empty matrix", line);
  if (rows > max_dim || cols > max_dim) {
    throw SizeError("matrix " + std::to_string(rows) + "x" +
                    std::to_string(cols) + " exceeds the dimension cap " +
                    std::to_string(max_dim));
  }
}

DenseMatrix ReadMatrixMarket(std::istream& in, std::size_t max_dim) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw FormatError("empty input", 1);
  ++line_no;
  const std::string lowered = Lower(line);
  const auto banner = SplitFields(lowered, false);
  if (banner.size() != 5 || banner[0] != "%%matrixmarket" ||
      banner[1] != "matrix") {
    throw FormatError("expected a '%%MatrixMarket matrix ...' banner", line_no);
  }
  const bool coordinate = banner[2] == "coordinate";
  if (!coordinate && banner[2] != "array") {
    throw FormatError("unsupported layout '" + std::string(banner[2]) + "'",
                      line_no);
  }
  if (banner[3] != "real" && banner[3] != "integer") {
    throw FormatError("unsupported field '" + std::string(banner[3]) + "'",
                      line_no);
  }
  const bool symmetric = banner[4] == "symmetric";
  if (!symmetric && banner[4] != "general") {
    throw FormatError("unsupported symmetry '" + std::string(banner[4]) + "'",
                      line_no);
  }

  // Size line, skipping comments.
  std::vector<std::string_view> size_fields;
  std::string size_line;
  while (std::getline(in, size_line)) {
    ++line_no;
    if (size_line.empty() || size_line[0] == '%' || IsBlank(size_line)) continue;
    size_fields = SplitFields(size_line, false);
    break;
  }
  if (size_fields.empty()) throw FormatError("missing size line", line_no + 1);
  if (size_fields.size() != (coordinate ? 3u : 2u)) {
    throw FormatError("malformed size line", line_no);
  }
  const std::size_t rows = ParseCount(size_fields[0], line_no);
  const std::size_t cols = ParseCount(size_fields[1], line_no);
  CheckDims(rows, cols, max_dim, line_no);
  if (symmetric && rows != cols) {
    throw FormatError("symmetric matrix must be square", line_no);
  }
  DenseMatrix a(rows, cols);

  if (coordinate) {
    const std::size_t nnz = ParseCount(size_fields[2], line_no);
    std::size_t seen = 0;
    while (seen < nnz && std::getline(in, line)) {
      ++line_no;
      if (line.empty() || line[0] == '%' || IsBlank(line)) continue;
      const auto f = SplitFields(line, false);
      if (f.size() != 3) throw FormatError("expected 'row col value'", line_no);
      const std::size_t i = ParseCount(f[0], line_no);
      const std::size_t j = ParseCount(f[1], line_no);
      if (i < 1 || i > rows || j < 1 || j > cols) {
        throw FormatError("entry index out of range", line_no);
      }
      const double v = ParseReal(f[2], line_no);
      a(i - 1, j - 1) = v;
      if (symmetric) a(j - 1, i - 1) = v;
      ++seen;
    }
    if (seen != nnz) {
      throw FormatError("expected " + std::to_string(nnz) + " entries, found " +
                            std::to_string(seen),
                        line_no);
    }
  } else {
    // Column-major; symmetric arrays store the lower triangle only.
    std::size_t i = 0, j = 0;
    const std::size_t expected =
        symmetric ? rows * (rows + 1) / 2 : rows * cols;
    std::size_t seen = 0;
    while (seen < expected && std::getline(in, line)) {
      ++line_no;
      if (line.empty() || line[0] == '%' || IsBlank(line)) continue;
      for (const auto field : SplitFields(line, false)) {
        if (seen == expected) throw FormatError("too many values", line_no);
        const double v = ParseReal(field, line_no);
        a(i, j) = v;
        if (symmetric) a(j, i) = v;
        ++seen;
        if (++i == rows) {
          ++j;
          i = symmetric ? j : 0;
        }
      }
    }
    if (seen != expected) {
      throw FormatError("expected " + std::to_string(expected) +
                            " values, found " + std::to_string(seen),
                        line_no);
    }
  }
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '%' || IsBlank(line)) continue;
    throw FormatError("trailing data after the last entry", line_no);
  }
  return a;
}

DenseMatrix ReadTsv(std::istream& in, std::size_t max_dim) {
  std::vector<double> entries;
  std::size_t rows = 0, cols = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (IsBlank(line) || line[0] == '#') continue;
    const bool tabs = line.find('\t') != std::string::npos;
    const auto fields = SplitFields(line, tabs);
    if (rows == 0) {
      cols = fields.size();
    } else if (fields.size() != cols) {
      throw FormatError("row has " + std::to_string(fields.size()) +
                            " fields, expected " + std::to_string(cols),
                        line_no);
    }
    for (const auto field : fields) entries.push_back(ParseReal(field, line_no));
    ++rows;
    if (rows > max_dim) CheckDims(rows, cols, max_dim, line_no);
  }
  if (rows == 0) throw FormatError("no matrix rows", line_no);
  CheckDims(rows, cols, max_dim, line_no);
  return DenseMatrix(rows, cols, std::move(entries));
}

void PutReal(std::ostream& out, double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.17g", v);
  out << buffer;
}

}  // namespace

MatrixFormat FormatFromPath(const std::string& path) {
  const auto dot = path.find_last_of('.');
  const std::string ext = dot == std::string::npos ? "" : Lower(path.substr(dot));
  return ext == ".mtx" || ext == ".mm" ? MatrixFormat::kMatrixMarket
                                       : MatrixFormat::kTsv;
}

DenseMatrix ReadMatrix(std::istream& in, MatrixFormat format,
                       std::size_t max_dim) {
  return format == MatrixFormat::kMatrixMarket ? ReadMatrixMarket(in, max_dim)
                                               : ReadTsv(in, max_dim);
}

DenseMatrix ReadMatrixFile(const std::string& path, std::size_t max_dim) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path + "'", 0);
  // Sniff the banner so a Matrix Market file with an odd extension still works.
  const int first = in.peek();
  const MatrixFormat format = first == '%' ? MatrixFormat::kMatrixMarket
                                           : FormatFromPath(path);
  return ReadMatrix(in, format, max_dim);
}

void WriteMatrixMarket(std::ostream& out, const DenseMatrix& a,
                       bool coordinate) {
  if (coordinate) {
    std::size_t nnz = 0;
    for (double v : a.entries()) nnz += v != 0.0;
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << a.rows() << ' ' << a.cols() << ' ' << nnz << '\n';
    for (std::size_t j = 0; j < a.cols(); ++j) {
      for (std::size_t i = 0; i < a.rows(); ++i) {
        if (a(i, j) == 0.0) continue;
        out << i + 1 << ' ' << j + 1 << ' ';
        PutReal(out, a(i, j));
        out << '\n';
      }
    }
    return;
  }
  out << "%%MatrixMarket matrix array real general\n";
  out << a.rows() << ' ' << a.cols() << '\n';
  for (std::size_t j = 0; j < a.cols(); ++j) {
    for (std::size_t i = 0; i < a.rows(); ++i) {
      PutReal(out, a(i, j));
      out << '\n';
    }
  }
}

void WriteTsv(std::ostream& out, const DenseMatrix& a) {
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (j) out << '\t';
      PutReal(out, a(i, j));
    }
    out << '\n';
  }
}

void WriteMatrixFile(const std::string& path, const DenseMatrix& a) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write '" + path + "'", 0);
  if (FormatFromPath(path) == MatrixFormat::kMatrixMarket) {
    WriteMatrixMarket(out, a);
  } else {
    WriteTsv(out, a);
  }
  if (!out) throw FormatError("write failed for '" + path + "'", 0);
}

}  // namespace opnorm
