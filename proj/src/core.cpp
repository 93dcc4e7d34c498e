#include "opnorm/core.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "opnorm/errors.hpp"

namespace opnorm {

bool IsInfinite(double exponent) { return std::isinf(exponent); }

double DualExponent(double p) {
  if (IsInfinite(p)) return 1.0;
  if (p == 1.0) return kInfinity;
  return p / (p - 1.0);
}

double ParseExponent(const std::string& text) {
  if (text == "inf" || text == "infinity" || text == "Inf") return kInfinity;
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
    throw InvalidInputError("not an exponent: '" + text + "'");
  }
  return value;
}

std::string FormatExponent(double p) {
  if (IsInfinite(p)) return "inf";
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.17g", p);
  return buffer;
}

// ---------------------------------------------------------------------------
// NormParams

NormParams::NormParams(double p, double q)
    : p_(p), q_(q), p_dual_(DualExponent(p)), q_dual_(DualExponent(q)) {}

NormParams NormParams::General(double p, double q) {
  if (std::isnan(p) || std::isnan(q) || p < 1.0 || q < 1.0) {
    throw InvalidInputError("norm exponents must satisfy p, q >= 1");
  }
  return NormParams(p, q);
}

NormParams NormParams::Iteration(double p, double q) {
  NormParams params = General(p, q);
  if (!params.in_iteration_range()) {
    throw InvalidInputError(
        "the fixed-point iteration requires 1 < p <= q < inf (got p=" +
        FormatExponent(p) + ", q=" + FormatExponent(q) + ")");
  }
  return params;
}

bool NormParams::in_iteration_range() const {
  return p_ > 1.0 && q_ >= p_ && std::isfinite(q_);
}

// ---------------------------------------------------------------------------
// DenseMatrix

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), entries_(rows * cols, fill) {
  if (!std::isfinite(fill)) throw InvalidInputError("non-finite fill value");
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols,
                         std::vector<double> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (entries_.size() != rows_ * cols_) {
    throw InvalidInputError("matrix entry count does not match " +
                            std::to_string(rows_) + "x" +
                            std::to_string(cols_));
  }
  for (double v : entries_) {
    if (!std::isfinite(v)) throw InvalidInputError("non-finite matrix entry");
  }
}

DenseMatrix::DenseMatrix(
    std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  entries_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) throw InvalidInputError("ragged matrix literal");
    for (double v : row) {
      if (!std::isfinite(v)) throw InvalidInputError("non-finite entry");
      entries_.push_back(v);
    }
  }
}

DenseMatrix DenseMatrix::Identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::Ones(std::size_t rows, std::size_t cols) {
  return DenseMatrix(rows, cols, 1.0);
}

DenseMatrix DenseMatrix::Diagonal(std::span<const double> diagonal) {
  DenseMatrix m(diagonal.size(), diagonal.size());
  for (std::size_t i = 0; i < diagonal.size(); ++i) {
    if (!std::isfinite(diagonal[i])) throw InvalidInputError("non-finite");
    m(i, i) = diagonal[i];
  }
  return m;
}

std::vector<double> DenseMatrix::column(std::size_t j) const {
  std::vector<double> c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
  return c;
}

std::vector<double> DenseMatrix::Multiply(std::span<const double> x) const {
  if (x.size() != cols_) {
    throw InvalidInputError("vector length " + std::to_string(x.size()) +
                            " does not match " + std::to_string(cols_) +
                            " columns");
  }
  std::vector<double> y(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    const double* r = entries_.data() + i * cols_;
    double s = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) s += r[j] * x[j];
    y[i] = s;
  }
  return y;
}

std::vector<double> DenseMatrix::MultiplyTransposed(
    std::span<const double> x) const {
  if (x.size() != rows_) {
    throw InvalidInputError("vector length " + std::to_string(x.size()) +
                            " does not match " + std::to_string(rows_) +
                            " rows");
  }
  std::vector<double> y(cols_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    const double* r = entries_.data() + i * cols_;
    const double xi = x[i];
    if (xi == 0.0) continue;
    for (std::size_t j = 0; j < cols_; ++j) y[j] += r[j] * xi;
  }
  return y;
}

DenseMatrix DenseMatrix::Transposed() const {
  DenseMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  }
  return t;
}

DenseMatrix DenseMatrix::Scaled(double factor) const {
  DenseMatrix s = *this;
  for (double& v : s.entries_) v *= factor;
  return s;
}

double DenseMatrix::MaxEntry() const {
  if (entries_.empty()) throw InvalidInputError("empty matrix");
  return *std::max_element(entries_.begin(), entries_.end());
}

double DenseMatrix::MinEntry() const {
  if (entries_.empty()) throw InvalidInputError("empty matrix");
  return *std::min_element(entries_.begin(), entries_.end());
}

double DenseMatrix::MaxAbsEntry() const {
  double m = 0.0;
  for (double v : entries_) m = std::max(m, std::abs(v));
  return m;
}

bool DenseMatrix::IsNonnegative() const {
  return std::all_of(entries_.begin(), entries_.end(),
                     [](double v) { return v >= 0.0; });
}

bool DenseMatrix::IsStrictlyPositive() const {
  return !entries_.empty() &&
         std::all_of(entries_.begin(), entries_.end(),
                     [](double v) { return v > 0.0; });
}

// ---------------------------------------------------------------------------
// Norms

double LpNorm(std::span<const double> v, double p) {
  if (std::isnan(p) || p < 1.0) {
    throw InvalidInputError("l_p norm needs p >= 1");
  }
  double vmax = 0.0;
  for (double x : v) {
    if (!std::isfinite(x)) throw InvalidInputError("non-finite vector entry");
    vmax = std::max(vmax, std::abs(x));
  }
  if (vmax == 0.0 || IsInfinite(p)) return vmax;
  double sum = 0.0;
  if (p == 2.0) {
    for (double x : v) {
      const double r = x / vmax;
      sum += r * r;
    }
    return vmax * std::sqrt(sum);
  }
  for (double x : v) sum += std::pow(std::abs(x) / vmax, p);
  return vmax * std::pow(sum, 1.0 / p);
}

double RatioF(const DenseMatrix& a, std::span<const double> x,
              const NormParams& params) {
  const double denominator = LpNorm(x, params.q());
  if (denominator == 0.0) throw InvalidInputError("ratio at the zero vector");
  return LpNorm(a.Multiply(x), params.p()) / denominator;
}

std::pair<DenseMatrix, NormParams> Dualize(const DenseMatrix& a,
                                           const NormParams& params) {
  if (!(params.p() > 1.0 && params.q() > 1.0 && std::isfinite(params.p()) &&
        std::isfinite(params.q()))) {
    throw InvalidInputError("dualize needs finite p, q > 1");
  }
  return {a.Transposed(), params.Dual()};
}

double OnesMatrixNorm(std::size_t rows, std::size_t cols,
                      const NormParams& params) {
  const double r = static_cast<double>(rows);
  const double c = static_cast<double>(cols);
  const double row_part = IsInfinite(params.p()) ? 1.0 : std::pow(r, 1.0 / params.p());
  const double col_part =
      IsInfinite(params.q()) ? c : std::pow(c, 1.0 - 1.0 / params.q());
  return row_part * col_part;
}

PositiveMatrix PositivityShift(const DenseMatrix& a, double delta) {
  if (a.empty()) throw InvalidInputError("empty matrix");
  if (!a.IsNonnegative()) {
    throw InvalidInputError("positivity shift needs a nonnegative matrix");
  }
  const double max_entry = a.MaxEntry();
  if (max_entry <= 0.0) throw InvalidInputError("all-zero matrix");
  if (!(delta >= 0.0) || !std::isfinite(delta)) {
    throw InvalidInputError("shift delta must be finite and >= 0");
  }

  PositiveMatrix out;
  out.original_max = max_entry;
  out.base = a.Scaled(1.0 / max_entry);
  if (delta == 0.0) {
    if (!a.IsStrictlyPositive()) {
      throw InvalidInputError("delta = 0 needs a strictly positive matrix");
    }
  } else {
    const double dims = static_cast<double>(a.rows() + a.cols());
    const double eps = delta / (dims * dims);
    if (eps >= 1.0) throw InvalidInputError("shift delta too large");
    const double added = eps / (1.0 - eps);
    const double renorm = 1.0 / (1.0 + added);
    out.base = DenseMatrix(a.rows(), a.cols(), [&] {
      std::vector<double> e(out.base.entries().begin(),
                            out.base.entries().end());
      for (double& v : e) v = (v + added) * renorm;
      return e;
    }());
    out.shift_applied = true;
    out.shift_amount = added;
  }
  out.n_param = 1.0 / out.base.MinEntry();
  return out;
}

// ---------------------------------------------------------------------------

UnitVector UnitVector::Normalize(std::span<const double> v, double exponent) {
  for (double x : v) {
    if (!std::isfinite(x) || x < 0.0) {
      throw InvalidInputError("unit vectors must be finite and nonnegative");
    }
  }
  const double norm = LpNorm(v, exponent);
  if (norm == 0.0) throw InvalidInputError("cannot normalize the zero vector");
  UnitVector u;
  u.exponent_ = exponent;
  u.coords_.assign(v.begin(), v.end());
  for (double& x : u.coords_) x /= norm;
  return u;
}

const char* BoundSourceName(BoundSource source) {
  switch (source) {
    case BoundSource::kSandwich:
      return "sandwich";
    case BoundSource::kInterpolation:
      return "interpolation";
    case BoundSource::kOracle:
      return "oracle";
  }
  return "unknown";
}

}  // namespace opnorm
