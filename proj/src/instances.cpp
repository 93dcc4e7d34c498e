#include "opnorm/instances.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "opnorm/errors.hpp"

namespace opnorm {
namespace {

double AbsPow(double v, double p) { return std::pow(std::abs(v), p); }

std::size_t ParseSuffix(const std::string& name, const std::string& prefix) {
  const std::string digits = name.substr(prefix.size());
  std::size_t value = 0;
  const auto [ptr, ec] =
      std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (digits.empty() || ec != std::errc() ||
      ptr != digits.data() + digits.size()) {
    throw InvalidInputError("bad builtin graph name '" + name + "'");
  }
  return value;
}

void CheckCap(std::size_t rows, std::size_t cols, std::size_t cap) {
  if (rows > cap || cols > cap) {
    throw SizeError("result " + std::to_string(rows) + "x" +
                    std::to_string(cols) + " exceeds the dimension cap " +
                    std::to_string(cap));
  }
}

DenseMatrix PadToSquare(const DenseMatrix& m) {
  const std::size_t s = std::max(m.rows(), m.cols());
  if (m.rows() == s && m.cols() == s) return m;
  DenseMatrix out(s, s);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Graph

Graph Graph::Make(std::size_t n,
                  std::vector<std::pair<std::size_t, std::size_t>> edges) {
  if (n == 0) throw InvalidInputError("graph has no vertices");
  if (edges.empty()) throw InvalidInputError("graph has no edges");
  std::set<std::pair<std::size_t, std::size_t>> seen;
  std::vector<std::size_t> degree(n, 0);
  for (auto& [u, v] : edges) {
    if (u >= n || v >= n) throw InvalidInputError("edge endpoint out of range");
    if (u == v) throw InvalidInputError("self-loop at vertex " + std::to_string(u));
    if (!seen.insert({std::min(u, v), std::max(u, v)}).second) {
      throw InvalidInputError("duplicate edge " + std::to_string(u) + "-" +
                              std::to_string(v));
    }
    ++degree[u];
    ++degree[v];
  }
  for (std::size_t v = 1; v < n; ++v) {
    if (degree[v] != degree[0]) {
      throw InvalidInputError("graph is not regular: vertex 0 has degree " +
                              std::to_string(degree[0]) + ", vertex " +
                              std::to_string(v) + " has " +
                              std::to_string(degree[v]));
    }
  }
  Graph g;
  g.n_ = n;
  g.degree_ = degree[0];
  g.edges_ = std::move(edges);
  return g;
}

Graph Graph::Cycle(std::size_t n) {
  if (n < 3) throw InvalidInputError("cycle needs at least 3 vertices");
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t v = 0; v < n; ++v) edges.emplace_back(v, (v + 1) % n);
  return Make(n, std::move(edges));
}

Graph Graph::Complete(std::size_t n) {
  if (n < 2) throw InvalidInputError("complete graph needs at least 2 vertices");
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) edges.emplace_back(u, v);
  }
  return Make(n, std::move(edges));
}

Graph Graph::Hypercube(std::size_t k) {
  if (k < 1 || k > 12) throw InvalidInputError("hypercube dimension must be 1..12");
  const std::size_t n = std::size_t{1} << k;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t b = 0; b < k; ++b) {
      const std::size_t v = u ^ (std::size_t{1} << b);
      if (u < v) edges.emplace_back(u, v);
    }
  }
  return Make(n, std::move(edges));
}

Graph Graph::Builtin(const std::string& name) {
  if (name.rfind("cycle", 0) == 0) return Cycle(ParseSuffix(name, "cycle"));
  if (name.rfind("complete", 0) == 0) {
    return Complete(ParseSuffix(name, "complete"));
  }
  if (name.rfind("hypercube", 0) == 0) {
    return Hypercube(ParseSuffix(name, "hypercube"));
  }
  throw InvalidInputError("unknown builtin graph '" + name +
                          "' (expected cycleN, completeN or hypercubeK)");
}

Graph Graph::ReadEdgeList(std::istream& in) {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::size_t n = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream fields(line);
    std::string a, b, extra;
    if (!(fields >> a)) continue;
    if (!(fields >> b) || (fields >> extra)) {
      throw FormatError("expected two vertex ids", line_no);
    }
    auto parse = [&](const std::string& s) {
      std::size_t v = 0;
      const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw FormatError("not a vertex id: '" + s + "'", line_no);
      }
      return v;
    };
    const std::size_t u = parse(a), v = parse(b);
    n = std::max({n, u + 1, v + 1});
    edges.emplace_back(u, v);
  }
  return Make(n, std::move(edges));
}

Graph Graph::ReadEdgeListFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path + "'", 0);
  return ReadEdgeList(in);
}

std::size_t Graph::CutSize(const std::vector<int>& sides) const {
  if (sides.size() != n_) throw InvalidInputError("one side per vertex expected");
  std::size_t cut = 0;
  for (const auto& [u, v] : edges_) cut += sides[u] != sides[v];
  return cut;
}

std::vector<int> GreedyCut(const Graph& graph) {
  const std::size_t n = graph.n();
  std::vector<std::vector<std::size_t>> adj(n);
  for (const auto& [u, v] : graph.edges()) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  std::vector<int> sides(n, 1);
  while (true) {
    long best_gain = 0;
    std::size_t best = n;
    for (std::size_t v = 0; v < n; ++v) {
      long gain = 0;
      for (std::size_t w : adj[v]) gain += sides[v] == sides[w] ? 1 : -1;
      if (gain > best_gain) {
        best_gain = gain;
        best = v;
      }
    }
    if (best == n) break;
    sides[best] = -sides[best];
  }
  return sides;
}

std::size_t MaxCut(const Graph& graph) {
  const std::size_t n = graph.n();
  if (n > 16) throw SizeError("exact max cut is capped at 16 vertices");
  std::size_t best = 0;
  // Vertex 0 fixed on one side.
  for (std::uint32_t mask = 0; mask < (1u << (n - 1)); ++mask) {
    const std::uint32_t full = mask << 1;
    std::size_t cut = 0;
    for (const auto& [u, v] : graph.edges()) {
      cut += ((full >> u) & 1u) != ((full >> v) & 1u);
    }
    best = std::max(best, cut);
  }
  return best;
}

// ---------------------------------------------------------------------------
// Gadget

double EdgeTerm(double x, double y, double c, double p) {
  const double num = AbsPow(x - y, p) + c * (AbsPow(1 + x, p) + AbsPow(1 - x, p) +
                                             AbsPow(1 + y, p) + AbsPow(1 - y, p));
  return num / (2.0 + AbsPow(x, p) + AbsPow(y, p));
}

double BruteInequalityRatio(double x, double p) {
  return (AbsPow(1 + x, p) + AbsPow(1 - x, p)) / (1.0 + AbsPow(x, p));
}

double DefaultC(double p, double eps) {
  if (!(p > 2.0) || !std::isfinite(p)) throw InvalidInputError("need p > 2");
  if (!(eps > 0.0 && eps < 1.0)) throw InvalidInputError("need 0 < eps < 1");
  // The ratio is even and invariant under x -> 1/x, so |x| >= 1 + eps maps
  // into [0, 1/(1+eps)], which contains [0, 1 - eps].
  const double top = std::pow(2.0, p - 1.0);
  const double hi = 1.0 / (1.0 + eps);
  constexpr int kGrid = 20000;
  double slack = top - BruteInequalityRatio(hi, p);
  for (int i = 0; i <= kGrid; ++i) {
    const double x = hi * i / kGrid;
    slack = std::min(slack, top - BruteInequalityRatio(x, p));
  }
  if (!(slack > 0.0)) throw InvalidInputError("no slack outside the interval");
  return std::pow(2.0, p + 2.0) / slack;
}

double GadgetObjective(const Graph& graph, std::span<const double> x, double c,
                       double p) {
  const std::size_t n = graph.n();
  if (x.size() != n + 1) throw InvalidInputError("expected n+1 coordinates");
  double num = 0.0;
  for (const auto& [i, j] : graph.edges()) num += AbsPow(x[i + 1] - x[j + 1], p);
  double side = 0.0, den = static_cast<double>(n) * AbsPow(x[0], p);
  for (std::size_t i = 1; i <= n; ++i) {
    side += AbsPow(x[0] + x[i], p) + AbsPow(x[0] - x[i], p);
    den += AbsPow(x[i], p);
  }
  num += c * static_cast<double>(graph.degree()) * side;
  return num / den;
}

GadgetInstance BuildGadget(const Graph& graph, double c, double p,
                           std::optional<std::vector<int>> sides) {
  if (!(c > 0.0) || !std::isfinite(c)) throw InvalidInputError("need C > 0");
  if (!(p > 2.0) || !std::isfinite(p)) throw InvalidInputError("need p > 2");
  const std::size_t n = graph.n();
  const std::size_t m = graph.edges().size();
  GadgetInstance out;
  out.graph = graph;
  out.c = c;
  out.p = p;
  out.matrix = DenseMatrix(5 * m, n + 1);
  const double w = std::pow(c, 1.0 / p);
  const double zero_col = w * std::pow(static_cast<double>(n), -1.0 / p);
  for (std::size_t e = 0; e < m; ++e) {
    const auto [i, j] = graph.edges()[e];
    const std::size_t r = 5 * e;
    out.matrix(r, i + 1) = 1.0;
    out.matrix(r, j + 1) = -1.0;
    out.matrix(r + 1, 0) = zero_col;
    out.matrix(r + 1, i + 1) = -w;
    out.matrix(r + 2, 0) = zero_col;
    out.matrix(r + 2, i + 1) = w;
    out.matrix(r + 3, 0) = zero_col;
    out.matrix(r + 3, j + 1) = -w;
    out.matrix(r + 4, 0) = zero_col;
    out.matrix(r + 4, j + 1) = w;
  }
  if (sides) {
    for (int s : *sides) {
      if (s != 1 && s != -1) throw InvalidInputError("sides must be +-1");
    }
    out.sides = std::move(*sides);
  } else {
    out.sides = GreedyCut(graph);
  }
  out.cut_size = graph.CutSize(out.sides);
  out.witness.push_back(std::pow(static_cast<double>(n), 1.0 / p));
  for (int s : out.sides) out.witness.push_back(s);
  const double half = std::pow(2.0, p - 1.0);
  out.expected_ratio =
      c * static_cast<double>(graph.degree()) * half +
      static_cast<double>(out.cut_size) / static_cast<double>(n) * half;
  return out;
}

double GadgetRatio(const DenseMatrix& m, std::span<const double> z, double p) {
  const double r = RatioF(m, z, NormParams::General(p, p));
  return std::pow(r, p);
}

// ---------------------------------------------------------------------------
// Tensoring

DenseMatrix Kronecker(const DenseMatrix& m, const DenseMatrix& n,
                      std::size_t cap) {
  const std::size_t rows = m.rows() * n.rows();
  const std::size_t cols = m.cols() * n.cols();
  CheckCap(rows, cols, cap);
  DenseMatrix out(rows, cols);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const double mij = m(i, j);
      if (mij == 0.0) continue;
      for (std::size_t k = 0; k < n.rows(); ++k) {
        for (std::size_t l = 0; l < n.cols(); ++l) {
          out(i * n.rows() + k, j * n.cols() + l) = mij * n(k, l);
        }
      }
    }
  }
  return out;
}

DenseMatrix Tensor(const DenseMatrix& m, const DenseMatrix& n,
                   std::size_t cap) {
  const std::size_t sm = std::max(m.rows(), m.cols());
  const std::size_t sn = std::max(n.rows(), n.cols());
  CheckCap(sm * sn, sm * sn, cap);
  return Kronecker(PadToSquare(m), PadToSquare(n), cap);
}

double WeightedValue(const WeightedInstance& w, std::span<const double> y) {
  if (y.size() != w.alpha.size()) throw InvalidInputError("length mismatch");
  double den = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) den += w.alpha[i] * AbsPow(y[i], w.p);
  if (den == 0.0) throw InvalidInputError("zero vector");
  const std::vector<double> by = w.matrix.Multiply(y);
  return LpNorm(by, w.p) / std::pow(den, 1.0 / w.p);
}

WeightedInstance Amplify(const GadgetInstance& gadget, std::size_t k,
                         std::size_t cap) {
  if (k < 1) throw InvalidInputError("k must be at least 1");
  const DenseMatrix& m = gadget.matrix;
  const std::size_t n = gadget.graph.n();
  const double p = gadget.p;

  std::size_t rows = 1, cols = 1;
  for (std::size_t t = 0; t < k; ++t) {
    if (rows > cap / m.rows() || cols > cap / m.cols()) {
      throw SizeError("tensor power exceeds the dimension cap " +
                      std::to_string(cap));
    }
    rows *= m.rows();
    cols *= m.cols();
  }
  DenseMatrix power = m;
  for (std::size_t t = 1; t < k; ++t) power = Kronecker(power, m, cap);

  std::vector<double> base_witness(n + 1);
  base_witness[0] = 1.0;
  for (std::size_t v = 0; v < n; ++v) base_witness[v + 1] = gadget.sides[v];

  WeightedInstance out;
  out.p = p;
  out.alpha.resize(cols);
  out.witness.resize(cols);
  std::vector<double> col_scale(cols);
  const double dn = static_cast<double>(n);
  for (std::size_t c = 0; c < cols; ++c) {
    std::size_t rest = c;
    int zeros = 0;
    double sign = 1.0;
    for (std::size_t t = 0; t < k; ++t) {
      const std::size_t idx = rest % (n + 1);
      rest /= n + 1;
      zeros += idx == 0;
      sign *= base_witness[idx];
    }
    out.alpha[c] = std::pow(dn, zeros);
    col_scale[c] = std::pow(dn, zeros / p);
    out.witness[c] = sign;
  }
  std::vector<double> entries(power.entries().begin(), power.entries().end());
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t c = 0; c < cols; ++c) entries[i * cols + c] *= col_scale[c];
  }
  out.matrix = DenseMatrix(rows, cols, std::move(entries));

  double total = 0.0;
  for (double a : out.alpha) total += a;
  const std::vector<double> bw = out.matrix.Multiply(out.witness);
  out.witness_value = LpNorm(bw, p) / std::pow(total, 1.0 / p);
  out.witness_pth = std::pow(out.witness_value, p);
  return out;
}

LiftedInstance LiftToQP(const WeightedInstance& w, double p, double q) {
  if (!(p >= 1.0) || !std::isfinite(p) || !(q >= p) || !std::isfinite(q)) {
    throw InvalidInputError("lift needs finite q >= p >= 1");
  }
  const std::size_t cols = w.matrix.cols();
  if (w.alpha.size() != cols) throw InvalidInputError("one weight per column");
  for (double a : w.alpha) {
    if (!(a >= 1.0) || a != std::floor(a)) {
      throw InvalidInputError("weights must be positive integers");
    }
  }
  LiftedInstance out;
  out.params = NormParams::General(p, q);
  std::vector<double> entries(w.matrix.entries().begin(),
                              w.matrix.entries().end());
  for (std::size_t i = 0; i < w.matrix.rows(); ++i) {
    for (std::size_t c = 0; c < cols; ++c) {
      entries[i * cols + c] *= std::pow(w.alpha[c], -1.0 / q);
    }
  }
  out.matrix = DenseMatrix(w.matrix.rows(), cols, std::move(entries));

  std::vector<double> y = w.witness;
  if (y.size() != cols) y.assign(cols, 1.0);
  out.witness.resize(cols);
  double total = 0.0;
  for (std::size_t c = 0; c < cols; ++c) {
    out.witness[c] = std::pow(w.alpha[c], 1.0 / q) * y[c];
    total += w.alpha[c];
  }
  const double by = LpNorm(w.matrix.Multiply(y), p);
  out.witness_value = by / std::pow(total, 1.0 / q);
  out.tau_c = by / std::pow(total, 1.0 / p);
  out.completeness_factor = std::pow(total, 1.0 / p - 1.0 / q);
  return out;
}

}  // namespace opnorm
