#include "opnorm/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <string>

#include "opnorm/errors.hpp"

namespace opnorm {
namespace {

double SignedPow(double v, double e) {
  if (v == 0.0) return 0.0;
  const double mag = e == 0.0 ? 1.0 : (e == 1.0 ? std::abs(v) : std::pow(std::abs(v), e));
  return v > 0.0 ? mag : -mag;
}

double Dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void NormalizeInPlace(std::vector<double>& x, double q) {
  const double n = LpNorm(x, q);
  for (double& v : x) v /= n;
}

// f and its gradient at x (any sign). Both terms are formed from normalized
// vectors so that large exponents do not overflow.
struct Evaluation {
  double f = 0.0;
  std::vector<double> grad;
};

Evaluation Evaluate(const DenseMatrix& a, std::span<const double> x, double p,
                    double q) {
  Evaluation out;
  std::vector<double> y = a.Multiply(x);
  const double ynorm = LpNorm(y, p);
  const double xnorm = LpNorm(x, q);
  out.f = ynorm / xnorm;
  out.grad.assign(x.size(), 0.0);
  if (ynorm == 0.0) return out;
  for (double& v : y) v = SignedPow(v / ynorm, p - 1.0) / ynorm;
  out.grad = a.MultiplyTransposed(y);
  for (std::size_t i = 0; i < x.size(); ++i) {
    out.grad[i] = out.f * (out.grad[i] - SignedPow(x[i] / xnorm, q - 1.0) / xnorm);
  }
  return out;
}

// Monotone ascent: x <- normalize(x + t g), Barzilai-Borwein trial step,
// halving until f increases.
std::pair<double, std::vector<double>> Ascend(const DenseMatrix& a,
                                              std::vector<double> x, double p,
                                              double q,
                                              const BruteOptions& options) {
  NormalizeInPlace(x, q);
  Evaluation cur = Evaluate(a, x, p, q);
  double gnorm = std::sqrt(Dot(cur.grad, cur.grad));
  double step = gnorm > 0.0 ? 0.1 / gnorm : 0.0;
  for (std::size_t it = 0; it < options.max_iter; ++it) {
    if (gnorm <= options.grad_tol * cur.f || gnorm == 0.0) break;
    bool accepted = false;
    std::vector<double> trial(x.size());
    while (step * gnorm > 1e-16) {
      for (std::size_t i = 0; i < x.size(); ++i) trial[i] = x[i] + step * cur.grad[i];
      if (LpNorm(trial, q) == 0.0) {
        step *= 0.5;
        continue;
      }
      NormalizeInPlace(trial, q);
      Evaluation next = Evaluate(a, trial, p, q);
      if (next.f > cur.f) {
        std::vector<double> s(x.size()), yv(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
          s[i] = trial[i] - x[i];
          yv[i] = next.grad[i] - cur.grad[i];
        }
        const double sy = std::abs(Dot(s, yv));
        const double ss = Dot(s, s);
        x.swap(trial);
        cur = std::move(next);
        gnorm = std::sqrt(Dot(cur.grad, cur.grad));
        step = sy > 0.0 ? ss / sy : 2.0 * step;
        if (gnorm > 0.0) step = std::clamp(step, 1e-12 / gnorm, 10.0 / gnorm);
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
  }
  return {cur.f, std::move(x)};
}

}  // namespace

const char* OracleMethodName(OracleMethod method) {
  switch (method) {
    case OracleMethod::kMultistart:
      return "multistart";
    case OracleMethod::kSignEnumeration:
      return "sign-enum";
    case OracleMethod::kInterpolation:
      return "interpolation";
  }
  return "unknown";
}

OracleResult BruteNorm(const DenseMatrix& a, const NormParams& params,
                       const BruteOptions& options) {
  if (a.empty()) throw InvalidInputError("empty matrix");
  const double p = params.p();
  const double q = params.q();
  if (IsInfinite(p) || IsInfinite(q)) {
    throw InvalidInputError(
        "multistart oracle needs finite exponents; use sign enumeration for "
        "q = inf");
  }
  const bool nonnegative = a.IsNonnegative();
  const std::size_t n = a.cols();
  const std::size_t restarts = std::max<std::size_t>(1, options.restarts);

  OracleResult best;
  best.method = OracleMethod::kMultistart;
  best.exhaustive = false;
  best.value = -1.0;
  for (const auto& start : options.starts) {
    if (start.size() != n) throw InvalidInputError("start length does not match");
    if (LpNorm(start, q) == 0.0) continue;
    auto [value, x] = Ascend(a, start, p, q, options);
    if (value > best.value) {
      best.value = value;
      best.witness = std::move(x);
    }
  }
  for (std::size_t r = 0; r < restarts; ++r) {
    std::vector<double> start(n, 1.0);
    if (r > 0 || !nonnegative) {
      std::seed_seq seq{static_cast<std::uint32_t>(options.seed),
                        static_cast<std::uint32_t>(options.seed >> 32),
                        static_cast<std::uint32_t>(r)};
      std::mt19937_64 rng(seq);
      std::normal_distribution<double> gauss;
      // Nonnegative matrices attain the maximum on the positive orthant.
      for (double& v : start) v = nonnegative ? std::abs(gauss(rng)) : gauss(rng);
      if (LpNorm(start, q) == 0.0) start.assign(n, 1.0);
    }
    auto [value, x] = Ascend(a, std::move(start), p, q, options);
    if (value > best.value) {
      best.value = value;
      best.witness = std::move(x);
    }
  }
  best.value = RatioF(a, best.witness, params);
  return best;
}

OracleResult LongestVector(const std::vector<std::vector<double>>& columns,
                           double p) {
  const std::size_t n = columns.size();
  if (n == 0) throw InvalidInputError("longest vector needs at least one column");
  if (n > kMaxSignEnumerationColumns) {
    throw SizeError("sign enumeration is capped at " +
                    std::to_string(kMaxSignEnumerationColumns) + " columns");
  }
  const std::size_t m = columns[0].size();
  for (const auto& c : columns) {
    if (c.size() != m) throw InvalidInputError("columns differ in length");
  }

  std::vector<int> signs(n, 1);
  std::vector<double> sum(m, 0.0);
  auto recompute = [&] {
    std::fill(sum.begin(), sum.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < m; ++i) sum[i] += signs[j] * columns[j][i];
    }
  };
  recompute();
  double best_value = LpNorm(sum, p);
  std::vector<int> best_signs = signs;

  // Gray code over the signs of columns 1..n-1; column 0 stays +1.
  const std::uint64_t patterns = std::uint64_t{1} << (n - 1);
  for (std::uint64_t k = 1; k < patterns; ++k) {
    const std::size_t flip = 1 + static_cast<std::size_t>(std::countr_zero(k));
    signs[flip] = -signs[flip];
    if ((k & 0xFFF) == 0) {
      recompute();
    } else {
      const double twice = 2.0 * signs[flip];
      for (std::size_t i = 0; i < m; ++i) sum[i] += twice * columns[flip][i];
    }
    const double value = LpNorm(sum, p);
    if (value > best_value) {
      best_value = value;
      best_signs = signs;
    }
  }

  OracleResult out;
  out.method = OracleMethod::kSignEnumeration;
  out.exhaustive = true;
  out.witness.assign(best_signs.begin(), best_signs.end());
  std::vector<double> exact(m, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < m; ++i) exact[i] += best_signs[j] * columns[j][i];
  }
  out.value = LpNorm(exact, p);
  return out;
}

OracleResult LongestVector(const DenseMatrix& a, double p) {
  std::vector<std::vector<double>> columns;
  columns.reserve(a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j) columns.push_back(a.column(j));
  return LongestVector(columns, p);
}

double SpectralNorm(const DenseMatrix& a, std::vector<double>* right_vector) {
  const std::size_t n = a.cols();
  // Deterministic start with distinct entries, unlikely to be orthogonal to
  // the top singular vector.
  std::vector<double> v(n);
  for (std::size_t j = 0; j < n; ++j) v[j] = 1.0 + 1.0 / static_cast<double>(j + 2);
  NormalizeInPlace(v, 2.0);
  double sigma = LpNorm(a.Multiply(v), 2.0);
  for (int it = 0; it < 100'000 && sigma > 0.0; ++it) {
    std::vector<double> w = a.MultiplyTransposed(a.Multiply(v));
    const double wn = LpNorm(w, 2.0);
    if (wn == 0.0) break;
    for (double& x : w) x /= wn;
    const double next = LpNorm(a.Multiply(w), 2.0);
    double change = 0.0;
    for (std::size_t j = 0; j < n; ++j) change = std::max(change, std::abs(w[j] - v[j]));
    v = std::move(w);
    const bool settled = std::abs(next - sigma) <= 1e-15 * next;
    sigma = std::max(sigma, next);
    if (settled && change <= 1e-12) break;
  }
  sigma = LpNorm(a.Multiply(v), 2.0);
  if (right_vector) *right_vector = v;
  return sigma;
}

CertifiedBounds InterpolationEstimate(const DenseMatrix& a, double p) {
  return InterpolationEstimate(a, NormParams::General(p, p));
}

CertifiedBounds InterpolationEstimate(const DenseMatrix& a,
                                      const NormParams& params) {
  if (a.empty()) throw InvalidInputError("empty matrix");
  const double p = params.p();
  const std::size_t rows = a.rows(), cols = a.cols();

  // ||A||_1: max column sum, attained at the basis vector of that column.
  double norm1 = -1.0;
  std::size_t best_col = 0;
  for (std::size_t j = 0; j < cols; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < rows; ++i) s += std::abs(a(i, j));
    if (s > norm1) {
      norm1 = s;
      best_col = j;
    }
  }
  // ||A||_inf: max row sum, attained at the sign pattern of that row.
  double norm_inf = -1.0;
  std::size_t best_row = 0;
  for (std::size_t i = 0; i < rows; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < cols; ++j) s += std::abs(a(i, j));
    if (s > norm_inf) {
      norm_inf = s;
      best_row = i;
    }
  }
  std::vector<double> v2;
  const double norm2 = SpectralNorm(a, &v2);

  std::vector<double> e1(cols, 0.0);
  e1[best_col] = 1.0;
  std::vector<double> sign_row(cols);
  for (std::size_t j = 0; j < cols; ++j) sign_row[j] = a(best_row, j) < 0.0 ? -1.0 : 1.0;

  CertifiedBounds out;
  out.source = BoundSource::kInterpolation;
  out.lower = std::max({RatioF(a, e1, params), RatioF(a, v2, params),
                        RatioF(a, sign_row, params)});

  double upper_pp;
  if (p == 1.0) {
    upper_pp = norm1;
  } else if (IsInfinite(p)) {
    upper_pp = norm_inf;
  } else if (p == 2.0) {
    upper_pp = norm2;
  } else if (p < 2.0) {
    // 1/p = (1 - t)/1 + t/2.
    const double t = 2.0 * (1.0 - 1.0 / p);
    upper_pp = std::pow(norm1, 1.0 - t) * std::pow(norm2, t);
  } else {
    // 1/p = (1 - t)/2 + t/inf.
    const double t = 1.0 - 2.0 / p;
    upper_pp = std::pow(norm2, 1.0 - t) * std::pow(norm_inf, t);
  }
  const double q = params.q();
  double upper = upper_pp;
  if (q > p) {
    const double gap = 1.0 / p - (IsInfinite(q) ? 0.0 : 1.0 / q);
    upper *= std::pow(static_cast<double>(cols), gap);
  }
  // Equal anchors (p in {1, 2, inf}) can differ from the lower candidate by
  // rounding only.
  out.upper = std::max(upper, out.lower);
  return out;
}

}  // namespace opnorm
