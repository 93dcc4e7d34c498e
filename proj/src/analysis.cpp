#include "opnorm/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "opnorm/errors.hpp"

namespace opnorm {
namespace {

void RequireGradientDomain(const DenseMatrix& a, std::span<const double> x,
                           const NormParams& params) {
  if (!a.IsNonnegative()) throw InvalidInputError("matrix must be nonnegative");
  if (x.size() != a.cols()) {
    throw InvalidInputError("vector length does not match matrix columns");
  }
  for (double v : x) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw InvalidInputError("x must be strictly positive");
    }
  }
  if (!(params.p() > 1.0) || !(params.q() > 1.0) || IsInfinite(params.p()) ||
      IsInfinite(params.q())) {
    throw InvalidInputError("need finite p, q > 1");
  }
}

std::vector<double> Normalized(std::span<const double> x, double q) {
  const double n = LpNorm(x, q);
  std::vector<double> out(x.begin(), x.end());
  for (double& v : out) v /= n;
  return out;
}

// sum_k a_ki (y_k / ||y||_p)^(p-1) / ||y||_p with y = Ax, i.e.
// sum_k a_ki y_k^(p-1) / ||y||_p^p without forming large powers.
std::vector<double> WeightedBackProjection(const DenseMatrix& a,
                                           std::span<const double> x,
                                           double p, double* ynorm_out) {
  std::vector<double> y = a.Multiply(x);
  const double ynorm = LpNorm(y, p);
  if (ynorm == 0.0) throw InvalidInputError("Ax is zero");
  for (double& v : y) v = std::pow(v / ynorm, p - 1.0) / ynorm;
  if (ynorm_out) *ynorm_out = ynorm;
  return a.MultiplyTransposed(y);
}

}  // namespace

std::vector<double> GradientF(const DenseMatrix& a, std::span<const double> x,
                              const NormParams& params) {
  RequireGradientDomain(a, x, params);
  const double p = params.p(), q = params.q();
  double ynorm = 0.0;
  std::vector<double> g = WeightedBackProjection(a, x, p, &ynorm);
  const double xnorm = LpNorm(x, q);
  const double f = ynorm / xnorm;
  for (std::size_t i = 0; i < g.size(); ++i) {
    g[i] = f * (g[i] - std::pow(x[i] / xnorm, q - 1.0) / xnorm);
  }
  return g;
}

double CriticalResidual(const DenseMatrix& a, std::span<const double> x,
                        const NormParams& params) {
  RequireGradientDomain(a, x, params);
  const double p = params.p(), q = params.q();
  const std::vector<double> z = Normalized(x, q);
  const std::vector<double> back = WeightedBackProjection(a, z, p, nullptr);
  double worst = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    worst = std::max(worst, std::abs(std::pow(z[i], q - 1.0) - back[i]));
  }
  return worst;
}

HessianTerms HessianQuadform(const DenseMatrix& a, std::span<const double> z,
                             std::span<const double> direction,
                             const NormParams& params, double residual_tol) {
  RequireGradientDomain(a, z, params);
  if (direction.size() != z.size()) {
    throw InvalidInputError("direction length does not match");
  }
  const double residual = CriticalResidual(a, z, params);
  if (!(residual <= residual_tol)) {
    throw PreconditionError("not a critical point: residual " +
                            std::to_string(residual) + " exceeds " +
                            std::to_string(residual_tol));
  }
  const double p = params.p(), q = params.q();
  const std::vector<double> zn = Normalized(z, q);
  std::vector<double> az = a.Multiply(zn);
  const double scale = 1.0 / LpNorm(az, p);
  for (double& v : az) v *= scale;
  std::vector<double> ae = a.Multiply(direction);
  for (double& v : ae) v *= scale;

  double image = 0.0;
  for (std::size_t k = 0; k < az.size(); ++k) {
    image += std::pow(az[k], p - 2.0) * ae[k] * ae[k];
  }
  double sphere = 0.0, radial = 0.0;
  for (std::size_t i = 0; i < zn.size(); ++i) {
    sphere += std::pow(zn[i], q - 2.0) * direction[i] * direction[i];
    radial += std::pow(zn[i], q - 1.0) * direction[i];
  }
  HessianTerms out;
  out.t1 = p * (p - 1.0) * (image - sphere);
  out.t2 = p * (q - p) * (radial * radial - sphere);
  return out;
}

CriticalityReport CheckCriticality(const DenseMatrix& a,
                                   std::span<const double> x,
                                   const NormParams& params,
                                   std::size_t directions, std::uint64_t seed,
                                   double residual_tol) {
  CriticalityReport out;
  const std::vector<double> g = GradientF(a, x, params);
  const double f = RatioF(a, x, params);
  double gmax = 0.0;
  for (double v : g) gmax = std::max(gmax, std::abs(v));
  out.grad_norm = gmax / f;
  out.residual = CriticalResidual(a, x, params);
  out.directions = directions;
  out.hessian_max_quadform = -std::numeric_limits<double>::infinity();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::vector<double> e(x.size());
  for (std::size_t d = 0; d < directions; ++d) {
    for (double& v : e) v = gauss(rng);
    const double n2 = LpNorm(e, 2.0);
    for (double& v : e) v /= n2;
    out.hessian_max_quadform =
        std::max(out.hessian_max_quadform,
                 HessianQuadform(a, x, e, params, residual_tol).total());
  }
  if (directions == 0) out.hessian_max_quadform = 0.0;
  return out;
}

StabilityReport StabilityProbe(const PositiveMatrix& a, const UnitVector& xstar,
                               double delta, std::size_t trials,
                               const NormParams& params, std::uint64_t seed) {
  const DenseMatrix& base = a.base;
  const double q = params.q();
  const std::size_t n = base.cols();
  if (xstar.size() != n) throw InvalidInputError("x* length does not match");

  StabilityReport out;
  out.trials = trials;
  out.lemma_applies = params.p() == params.q();
  const double nn = a.n_param * static_cast<double>(n);
  out.bound_gap = delta * delta / std::pow(nn, 6.0);
  out.min_gap = std::numeric_limits<double>::infinity();
  out.max_gap = -std::numeric_limits<double>::infinity();

  const std::vector<double> xs(xstar.coords().begin(), xstar.coords().end());
  const double fstar = RatioF(base, xs, params);
  // Normal of the q-sphere at x*.
  std::vector<double> normal(n);
  for (std::size_t i = 0; i < n; ++i) normal[i] = std::pow(xs[i], q - 1.0);
  const double nn2 = std::inner_product(normal.begin(), normal.end(),
                                        normal.begin(), 0.0);

  auto point = [&](const std::vector<double>& u, double t) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = xs[i] + t * u[i];
    const double norm = LpNorm(x, q);
    for (double& v : x) v /= norm;
    return x;
  };
  auto distance = [&](const std::vector<double>& x) {
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) d += std::abs(x[i] - xs[i]);
    return d;
  };

  for (std::size_t trial = 0; trial < trials; ++trial) {
    double gap = 0.0;
    if (delta > 0.0) {
      std::seed_seq seq{static_cast<std::uint32_t>(seed),
                        static_cast<std::uint32_t>(seed >> 32),
                        static_cast<std::uint32_t>(trial)};
      std::mt19937_64 rng(seq);
      std::normal_distribution<double> gauss;
      std::vector<double> u(n);
      double un = 0.0;
      while (un == 0.0) {
        for (double& v : u) v = gauss(rng);
        const double along = std::inner_product(u.begin(), u.end(),
                                                normal.begin(), 0.0) / nn2;
        for (std::size_t i = 0; i < n; ++i) u[i] -= along * normal[i];
        un = LpNorm(u, 1.0);
      }
      for (double& v : u) v /= un;
      double lo = 0.0, hi = delta;
      while (distance(point(u, hi)) < delta && hi < 1e6) hi *= 2.0;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        (distance(point(u, mid)) < delta ? lo : hi) = mid;
      }
      gap = 1.0 - RatioF(base, point(u, hi), params) / fstar;
      if (!(gap > 0.0)) out.all_below_optimum = false;
    }
    if (gap < out.bound_gap) out.bound_held = false;
    out.min_gap = std::min(out.min_gap, gap);
    out.max_gap = std::max(out.max_gap, gap);
  }
  if (trials == 0) out.min_gap = out.max_gap = 0.0;
  if (delta == 0.0) out.all_below_optimum = false;
  return out;
}

std::vector<double> CentralDifferenceGradient(
    const std::function<double(std::span<const double>)>& fn,
    std::span<const double> x) {
  const double base_step = std::cbrt(std::numeric_limits<double>::epsilon());
  std::vector<double> probe(x.begin(), x.end());
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double h = base_step * std::max(1.0, std::abs(x[i]));
    probe[i] = x[i] + h;
    const double up = fn(probe);
    probe[i] = x[i] - h;
    const double down = fn(probe);
    probe[i] = x[i];
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

}  // namespace opnorm
