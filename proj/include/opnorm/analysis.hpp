#ifndef OPNORM_ANALYSIS_HPP_
#define OPNORM_ANALYSIS_HPP_

// First and second order checks for f(x) = ||Ax||_p / ||x||_q on the positive
// orthant: gradient, critical-point residual, Hessian quadratic form and a
// sampling probe around a maximizer.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "opnorm/core.hpp"

namespace opnorm {

// df/dx_i = f(x) (sum_k (A_k x)^(p-1) a_ki / ||Ax||_p^p - x_i^(q-1) / ||x||_q^q).
// Requires a nonnegative matrix, strictly positive x and finite p, q > 1.
std::vector<double> GradientF(const DenseMatrix& a, std::span<const double> x,
                              const NormParams& params);

// max_i |x_i^(q-1) - (||x||_q^q / ||Ax||_p^p) sum_k a_ki (A_k x)^(p-1)|,
// evaluated at x / ||x||_q so the value does not depend on the scale of x or A.
double CriticalResidual(const DenseMatrix& a, std::span<const double> x,
                        const NormParams& params);

struct HessianTerms {
  double t1 = 0.0;  // p(p-1) (sum_k (A_k z)^(p-2) (A_k e)^2 - sum_i z_i^(q-2) e_i^2)
  double t2 = 0.0;  // p(q-p) ((sum_i z_i^(q-1) e_i)^2 - sum_i z_i^(q-2) e_i^2)
  double total() const { return t1 + t2; }
};

// Second directional derivative of ||Az||_p^p / ||z||_q^p along e, at the
// critical point z. z is rescaled to ||z||_q = 1 and A to ||Az||_p = 1 first;
// the result is p times e^T H_f e at that point. Throws PreconditionError when
// CriticalResidual(a, z) > residual_tol.
HessianTerms HessianQuadform(const DenseMatrix& a, std::span<const double> z,
                             std::span<const double> direction,
                             const NormParams& params,
                             double residual_tol = 1e-6);

struct CriticalityReport {
  double grad_norm = 0.0;  // ||grad f||_inf / f
  double residual = 0.0;
  double hessian_max_quadform = 0.0;  // max over the sampled unit directions
  std::size_t directions = 0;
};

// Gradient, residual and the largest Hessian form over `directions` Gaussian
// directions (unit l_2, drawn from `seed`).
CriticalityReport CheckCriticality(const DenseMatrix& a,
                                   std::span<const double> x,
                                   const NormParams& params,
                                   std::size_t directions = 100,
                                   std::uint64_t seed = 0,
                                   double residual_tol = 1e-6);

struct StabilityReport {
  double min_gap = 0.0;  // min over trials of 1 - f(x)/f(x*)
  double max_gap = 0.0;
  bool all_below_optimum = true;  // f(x) < f(x*) in every trial (delta > 0)
  double bound_gap = 0.0;         // delta^2 / (N n)^6
  bool bound_held = true;         // every gap >= bound_gap
  bool lemma_applies = false;     // p == q
  std::size_t trials = 0;
};

// Samples x on the positive q-sphere with ||x - x*||_1 = delta (random
// tangent direction, then bisection on the step) and compares f(x) with
// f(x*) on a.base. Trial t uses its own generator seeded from (seed, t).
StabilityReport StabilityProbe(const PositiveMatrix& a, const UnitVector& xstar,
                               double delta, std::size_t trials,
                               const NormParams& params,
                               std::uint64_t seed = 0);

// Central differences with h_i = cbrt(machine eps) * max(1, |x_i|).
std::vector<double> CentralDifferenceGradient(
    const std::function<double(std::span<const double>)>& fn,
    std::span<const double> x);

}  // namespace opnorm

#endif  // OPNORM_ANALYSIS_HPP_
