#ifndef OPNORM_ORACLE_HPP_
#define OPNORM_ORACLE_HPP_

// Ground truth at desk scale, computed without the fixed-point iteration:
//   * BruteNorm: multistart projected-gradient ascent on the q-sphere,
//   * LongestVector: exact sign enumeration for ||A||_{inf->p},
//   * InterpolationEstimate: best of the l_1 / l_2 / l_inf maximizers with a
//     Riesz-Thorin upper bound.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "opnorm/core.hpp"

namespace opnorm {

enum class OracleMethod { kMultistart, kSignEnumeration, kInterpolation };

const char* OracleMethodName(OracleMethod method);

struct OracleResult {
  double value = 0.0;
  std::vector<double> witness;  // RatioF(A, witness) == value
  OracleMethod method = OracleMethod::kMultistart;
  bool exhaustive = false;
};

struct BruteOptions {
  std::size_t restarts = 32;
  std::uint64_t seed = 0;
  std::size_t max_iter = 20'000;
  // Stop a restart once ||grad f||_2 <= grad_tol * f.
  double grad_tol = 1e-11;
  // Extra starting points tried before the random restarts.
  std::vector<std::vector<double>> starts;
};

// Multistart ascent for any sign pattern and any finite p, q >= 1. Never
// exhaustive. Deterministic for a given seed; restart r draws from its own
// stream so results do not depend on evaluation order.
OracleResult BruteNorm(const DenseMatrix& a, const NormParams& params,
                       const BruteOptions& options = {});

inline constexpr std::size_t kMaxSignEnumerationColumns = 24;

// max over x in {-1,+1}^n of ||sum_i x_i v_i||_p, which equals
// ||A||_{inf->p} for the matrix with columns v_i. The first sign is fixed to
// +1 (the objective is even). Throws SizeError above 24 columns.
OracleResult LongestVector(const std::vector<std::vector<double>>& columns,
                           double p);
OracleResult LongestVector(const DenseMatrix& a, double p);

// Largest singular value by power iteration on A^T A (relative change
// <= 1e-12). right_vector receives the unit maximizer when non-null.
double SpectralNorm(const DenseMatrix& a,
                    std::vector<double>* right_vector = nullptr);

// ||A||_{p->p} bounds. Lower: best ratio over the l_1 maximizer (best column),
// the l_2 maximizer (top right singular vector) and the l_inf maximizer (sign
// pattern of the dominant row). Upper: Riesz-Thorin between the anchors
// (1, 2) for p <= 2 and (2, inf) for p >= 2. For square n x n input
// upper / lower <= n^(1/4).
CertifiedBounds InterpolationEstimate(const DenseMatrix& a, double p);

// q->p variant: same candidates, upper bound scaled by cols^(1/p - 1/q) when
// q > p (||x||_p <= n^(1/p-1/q) ||x||_q) and unchanged when q <= p.
CertifiedBounds InterpolationEstimate(const DenseMatrix& a,
                                      const NormParams& params);

}  // namespace opnorm

#endif  // OPNORM_ORACLE_HPP_
