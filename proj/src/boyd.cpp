#include "opnorm/boyd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include "opnorm/errors.hpp"

namespace opnorm {
namespace {

double PowPositive(double base, double exponent) {
  if (exponent == 1.0) return base;
  if (exponent == 2.0) return base * base;
  return std::pow(base, exponent);
}

void RequirePositive(std::span<const double> x) {
  for (double v : x) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw InvalidInputError("S is only defined on strictly positive vectors");
    }
  }
}

void RequireNonnegative(const DenseMatrix& a) {
  if (!a.IsNonnegative()) {
    throw InvalidInputError(
        "the fixed-point iteration needs a nonnegative matrix; use the oracle "
        "for sign-indefinite input");
  }
}

// (Sx)_i without validation. Factors out max_k (Ax)_k so that large p does not
// overflow: (Sx)_i = ymax^((p-1)/(q-1)) * (sum_k a_ki (y_k/ymax)^(p-1))^(1/(q-1)).
std::vector<double> ApplySUnchecked(const DenseMatrix& a,
                                    std::span<const double> x, double p,
                                    double q) {
  std::vector<double> y = a.Multiply(x);
  const double ymax = *std::max_element(y.begin(), y.end());
  if (ymax <= 0.0) return std::vector<double>(a.cols(), 0.0);
  for (double& v : y) v = PowPositive(v / ymax, p - 1.0);
  std::vector<double> s = a.MultiplyTransposed(y);
  const double outer = 1.0 / (q - 1.0);
  const double scale = PowPositive(ymax, (p - 1.0) / (q - 1.0));
  for (double& v : s) v = scale * PowPositive(v, outer);
  return s;
}

std::pair<double, double> MinMaxRatio(std::span<const double> sx,
                                      std::span<const double> x) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = sx[i] / x[i];
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  return {lo, hi};
}

void NormalizeInPlace(std::vector<double>& x, double q) {
  const double norm = LpNorm(x, q);
  for (double& v : x) v /= norm;
}

}  // namespace

std::vector<double> ApplyS(const DenseMatrix& a, std::span<const double> x,
                           const NormParams& params) {
  RequireNonnegative(a);
  if (x.size() != a.cols()) {
    throw InvalidInputError("vector length does not match matrix columns");
  }
  RequirePositive(x);
  if (!params.in_iteration_range()) {
    throw InvalidInputError("S needs 1 < p <= q < inf");
  }
  return ApplySUnchecked(a, x, params.p(), params.q());
}

Potentials ComputePotentials(const DenseMatrix& a, std::span<const double> x,
                             const NormParams& params) {
  const std::vector<double> sx = ApplyS(a, x, params);
  const double norm = LpNorm(x, params.q());
  if (std::abs(norm - 1.0) > 1e-9) {
    throw InvalidInputError("potentials need ||x||_q = 1");
  }
  const auto [lo, hi] = MinMaxRatio(sx, x);
  const double e = (params.q() - 1.0) / params.p();
  Potentials out;
  out.m = lo;
  out.big_m = hi;
  out.bounds = {std::pow(lo, e), std::pow(hi, e), BoundSource::kSandwich};
  return out;
}

ConvergenceReport ComputeNorm(const DenseMatrix& a, const NormParams& params,
                              const BoydOptions& options) {
  if (!params.in_iteration_range()) {
    throw InvalidInputError(
        "the fixed-point iteration requires 1 < p <= q < inf (got p=" +
        FormatExponent(params.p()) + ", q=" + FormatExponent(params.q()) +
        "); use the oracle for other exponents");
  }
  if (!(options.tol > 0.0)) throw InvalidInputError("tol must be positive");
  RequireNonnegative(a);

  ConvergenceReport report;
  report.positive = PositivityShift(a, options.shift_delta);
  const DenseMatrix& base = report.positive.base;
  const double p = params.p();
  const double q = params.q();

  std::vector<double> x;
  if (options.start) {
    x = *options.start;
    if (x.size() != base.cols()) {
      throw InvalidInputError("start vector length does not match columns");
    }
    RequirePositive(x);
  } else {
    x.assign(base.cols(), 1.0);
  }
  NormalizeInPlace(x, q);

  double m = 0.0, big_m = 0.0;
  std::size_t iter = 0;
  while (true) {
    std::vector<double> sx = ApplySUnchecked(base, x, p, q);
    std::tie(m, big_m) = MinMaxRatio(sx, x);
    if (options.record_trace) {
      IterationState state;
      state.iter = iter;
      state.m_pot = m;
      state.big_m_pot = big_m;
      state.f_val = RatioF(base, x, params);
      if (options.trace_vectors) state.x = x;
      report.trace.push_back(std::move(state));
    }
    if (big_m <= (1.0 + options.tol) * m) {
      report.converged = true;
      break;
    }
    if (iter == options.max_iter) break;
    NormalizeInPlace(sx, q);
    x = std::move(sx);
    ++iter;
  }

  const double e = (q - 1.0) / p;
  report.iterations = iter;
  report.potential_ratio = big_m / m;
  report.base_bounds = {std::pow(m, e), std::pow(big_m, e),
                        BoundSource::kSandwich};
  report.base_estimate = RatioF(base, x, params);
  report.maximizer = UnitVector::Normalize(x, q);

  // Pull the sandwich back to the input. With B = A / max and
  // base = (B + sJ) / (1 + s):  ||B|| <= (1 + s) ||base|| because A >= 0, and
  // ||B|| >= (1 + s) ||base|| - s ||J||.
  const PositiveMatrix& pm = report.positive;
  const double s = pm.shift_amount;
  const double upper = pm.original_max * (1.0 + s) * report.base_bounds.upper;
  const double floor =
      pm.original_max * ((1.0 + s) * report.base_bounds.lower -
                         s * OnesMatrixNorm(a.rows(), a.cols(), params));
  const double at_iterate = RatioF(a, x, params);
  report.estimate = std::max(at_iterate, floor);
  // The max() only matters at rounding level once M/m is within an ulp of 1.
  report.bounds = {report.estimate, std::max(upper, report.estimate),
                   BoundSource::kSandwich};
  return report;
}

}  // namespace opnorm
