#ifndef OPNORM_BOYD_HPP_
#define OPNORM_BOYD_HPP_

// Fixed-point iteration for ||A||_{q->p} of a nonnegative matrix, 1 < p <= q.
//
// The map S, (Sx)_i = (sum_k a_ki (A_k x)^(p-1))^(1/(q-1)), has the maximizer
// of ||Ax||_p / ||x||_q as its unique positive fixed point when A is strictly
// positive. For any positive x with ||x||_q = 1 the potentials
//   m(x) = min_i (Sx)_i / x_i,   M(x) = max_i (Sx)_i / x_i
// satisfy m^(q-1) <= ||A||^p <= M^(q-1); m never decreases and M never
// increases along the iteration, so M/m <= 1 + tol is a certified stop.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "opnorm/core.hpp"

namespace opnorm {

// Requires a nonnegative matrix and strictly positive x (InvalidInputError
// otherwise). For strictly positive A the result is strictly positive and
// S(lambda x) = lambda^((p-1)/(q-1)) S(x).
std::vector<double> ApplyS(const DenseMatrix& a, std::span<const double> x,
                           const NormParams& params);
inline std::vector<double> ApplyS(const PositiveMatrix& a,
                                  std::span<const double> x,
                                  const NormParams& params) {
  return ApplyS(a.base, x, params);
}

struct Potentials {
  double m = 0.0;
  double big_m = 0.0;
  // [m^((q-1)/p), M^((q-1)/p)]: certified bounds on ||A||_{q->p}.
  CertifiedBounds bounds;
};

// x must be strictly positive with ||x||_q = 1 (to 1e-9 relative).
Potentials ComputePotentials(const DenseMatrix& a, std::span<const double> x,
                             const NormParams& params);

// One row of the iteration trace, recorded before the update x <- Sx/||Sx||_q.
struct IterationState {
  std::size_t iter = 0;
  double m_pot = 0.0;
  double big_m_pot = 0.0;
  double f_val = 0.0;  // f(x) on the shifted base matrix
  std::vector<double> x;  // only filled when BoydOptions::trace_vectors is set
};

struct BoydOptions {
  double tol = 1e-9;
  std::size_t max_iter = 1'000'000;
  double shift_delta = kDefaultShiftDelta;
  // Start vector (positive); defaults to the all-ones direction.
  std::optional<std::vector<double>> start;
  bool record_trace = false;
  bool trace_vectors = false;
};

struct ConvergenceReport {
  // Valid for the input matrix: lower is f at the final iterate (or the
  // shift-corrected sandwich floor if larger), upper is the sandwich ceiling
  // pulled back through the shift.
  CertifiedBounds bounds;
  double estimate = 0.0;
  // Sandwich on the shifted base matrix, in base units.
  CertifiedBounds base_bounds;
  double base_estimate = 0.0;
  UnitVector maximizer;  // unit q-norm maximizer of the base matrix
  std::size_t iterations = 0;
  bool converged = false;
  double potential_ratio = 0.0;  // final M/m
  PositiveMatrix positive;
  std::vector<IterationState> trace;
};

// Shifts A to a positive matrix and iterates until M/m <= 1 + tol or
// max_iter updates. Throws InvalidInputError for negative entries, an
// all-zero matrix or params outside 1 < p <= q < inf. A run that hits
// max_iter returns converged = false with bounds that are still valid.
ConvergenceReport ComputeNorm(const DenseMatrix& a, const NormParams& params,
                              const BoydOptions& options = {});

}  // namespace opnorm

#endif  // OPNORM_BOYD_HPP_
