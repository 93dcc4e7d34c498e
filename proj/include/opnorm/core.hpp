#ifndef OPNORM_CORE_HPP_
#define OPNORM_CORE_HPP_

// Dense matrices, l_p norms, the q->p ratio and the shift to a strictly
// positive matrix. Everything here is a value type or a pure function.

#include <cstddef>
#include <initializer_list>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace opnorm {

// Sentinel for the l_inf exponent. Accepted by norms, oracles and the
// interpolation baseline; never by the fixed-point iteration.
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Default relative accuracy target for PositivityShift.
inline constexpr double kDefaultShiftDelta = 1e-6;

bool IsInfinite(double exponent);

// Hoelder conjugate: 1/p + 1/p' = 1, with 1 <-> inf.
double DualExponent(double p);

// Parses "inf"/"infinity" or a decimal exponent. Throws InvalidInputError.
double ParseExponent(const std::string& text);
std::string FormatExponent(double p);

// The exponent pair of ||A||_{q->p} = max ||Ax||_p / ||x||_q.
class NormParams {
 public:
  // Any p, q >= 1, either may be kInfinity. Used by oracle and baseline paths.
  static NormParams General(double p, double q);
  // 1 < p <= q < inf, the range where the fixed-point iteration is valid.
  static NormParams Iteration(double p, double q);

  double p() const { return p_; }
  double q() const { return q_; }
  double p_dual() const { return p_dual_; }
  double q_dual() const { return q_dual_; }

  bool in_iteration_range() const;

  // Parameters of the transposed problem: ||A||_{q->p} = ||A^T||_{p'->q'}.
  NormParams Dual() const { return General(q_dual_, p_dual_); }

 private:
  NormParams(double p, double q);

  double p_;
  double q_;
  double p_dual_;
  double q_dual_;
};

class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  // Row-major entries; throws InvalidInputError on size mismatch or
  // non-finite values.
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);
  DenseMatrix(std::initializer_list<std::initializer_list<double>> rows);

  static DenseMatrix Identity(std::size_t n);
  static DenseMatrix Ones(std::size_t rows, std::size_t cols);
  static DenseMatrix Diagonal(std::span<const double> diagonal);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return entries_.empty(); }

  double& operator()(std::size_t i, std::size_t j) {
    return entries_[i * cols_ + j];
  }
  double operator()(std::size_t i, std::size_t j) const {
    return entries_[i * cols_ + j];
  }

  std::span<const double> row(std::size_t i) const {
    return {entries_.data() + i * cols_, cols_};
  }
  std::span<const double> entries() const { return entries_; }

  std::vector<double> column(std::size_t j) const;

  // y = A x.
  std::vector<double> Multiply(std::span<const double> x) const;
  // y = A^T x.
  std::vector<double> MultiplyTransposed(std::span<const double> x) const;

  DenseMatrix Transposed() const;
  DenseMatrix Scaled(double factor) const;

  double MaxEntry() const;
  double MinEntry() const;
  double MaxAbsEntry() const;
  bool IsNonnegative() const;
  bool IsStrictlyPositive() const;

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> entries_;
};

// ||v||_p, computed as v_max * (sum (|v_i| / v_max)^p)^(1/p) so that large p
// does not overflow. p = kInfinity gives max |v_i|.
double LpNorm(std::span<const double> v, double p);

// ||A x||_p / ||x||_q.
double RatioF(const DenseMatrix& a, std::span<const double> x,
              const NormParams& params);

// (A^T, (q', p')). Requires finite p, q > 1.
std::pair<DenseMatrix, NormParams> Dualize(const DenseMatrix& a,
                                           const NormParams& params);

// ||J||_{q->p} for the rows x cols all-ones matrix: rows^(1/p) cols^(1-1/q).
double OnesMatrixNorm(std::size_t rows, std::size_t cols,
                      const NormParams& params);

// A nonnegative matrix rescaled to max entry 1 with every entry in [1/N, 1].
struct PositiveMatrix {
  DenseMatrix base;
  double n_param = 1.0;       // N = 1 / min entry of base
  bool shift_applied = false;
  double original_max = 1.0;  // input = original_max * (unshifted base)
  // Amount added to every entry of input/original_max before renormalizing
  // by 1/(1 + shift_amount).
  double shift_amount = 0.0;
};

// Scales A so its max entry is 1, adds eps' = eps/(1-eps) to every entry with
// eps = delta/(rows+cols)^2, then divides by 1+eps'. The result has max entry
// exactly 1 and min entry at least eps, so N <= 1/eps = (rows+cols)^2/delta.
// delta = 0 skips the shift and requires a strictly positive input.
PositiveMatrix PositivityShift(const DenseMatrix& a,
                               double delta = kDefaultShiftDelta);

// A nonnegative vector with ||coords||_exponent = 1.
class UnitVector {
 public:
  UnitVector() = default;
  // Normalizes v in the given exponent. Throws InvalidInputError on negative
  // or non-finite coordinates, or on the zero vector.
  static UnitVector Normalize(std::span<const double> v, double exponent);

  std::span<const double> coords() const { return coords_; }
  double norm_exponent() const { return exponent_; }
  std::size_t size() const { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }

 private:
  std::vector<double> coords_;
  double exponent_ = 2.0;
};

enum class BoundSource { kSandwich, kInterpolation, kOracle };

const char* BoundSourceName(BoundSource source);

struct CertifiedBounds {
  double lower = 0.0;
  double upper = 0.0;
  BoundSource source = BoundSource::kSandwich;

  bool Contains(double value, double rel_tol = 0.0) const {
    const double slack = rel_tol * (value < 0 ? -value : value);
    return lower - slack <= value && value <= upper + slack;
  }
};

}  // namespace opnorm

#endif  // OPNORM_CORE_HPP_
