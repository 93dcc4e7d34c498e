#ifndef OPNORM_INSTANCES_HPP_
#define OPNORM_INSTANCES_HPP_

// Structured instances with known witnesses: the MaxCut gadget matrix,
// Kronecker powers of it with their integer column weights, and the column
// rescaling that turns a weighted instance into a plain q->p norm.

#include <cstddef>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "opnorm/core.hpp"

namespace opnorm {

// Undirected d-regular simple graph on vertices 0..n-1.
class Graph {
 public:
  // Throws InvalidInputError on self-loops, duplicate edges, out-of-range
  // endpoints, irregular degrees or an empty edge set.
  static Graph Make(std::size_t n,
                    std::vector<std::pair<std::size_t, std::size_t>> edges);

  // "cycleN" (N >= 3), "completeN" (N >= 2), "hypercubeK" (K >= 1).
  static Graph Builtin(const std::string& name);
  static Graph Cycle(std::size_t n);
  static Graph Complete(std::size_t n);
  static Graph Hypercube(std::size_t k);

  // One edge per line, two 0-based vertex ids separated by whitespace; '#'
  // starts a comment. n is the largest id plus one.
  static Graph ReadEdgeList(std::istream& in);
  static Graph ReadEdgeListFile(const std::string& path);

  std::size_t n() const { return n_; }
  std::size_t degree() const { return degree_; }
  const std::vector<std::pair<std::size_t, std::size_t>>& edges() const {
    return edges_;
  }

  // Number of edges whose endpoints get different signs.
  std::size_t CutSize(const std::vector<int>& sides) const;

 private:
  std::size_t n_ = 0;
  std::size_t degree_ = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges_;
};

// Local search from the all-(+1) assignment: repeatedly flip the vertex with
// the largest positive gain, lowest index first on ties.
std::vector<int> GreedyCut(const Graph& graph);

// Maximum cut by enumeration. Throws SizeError above 16 vertices.
std::size_t MaxCut(const Graph& graph);

// (|x-y|^p + C(|1+x|^p + |1-x|^p + |1+y|^p + |1-y|^p)) / (2 + |x|^p + |y|^p).
double EdgeTerm(double x, double y, double c, double p);

// (|1+x|^p + |1-x|^p) / (1 + |x|^p); at most 2^(p-1) for p >= 2.
double BruteInequalityRatio(double x, double p);

// 2^(p+2) / delta(eps), where delta(eps) is the smallest gap
// 2^(p-1) - BruteInequalityRatio(x, p) over |x| outside [1-eps, 1+eps],
// measured on a grid. Requires p > 2 and 0 < eps < 1.
double DefaultC(double p, double eps = 0.1);

// g(x_0..x_n) = (sum_{ij in E} |x_i - x_j|^p
//                + C d sum_i (|x_0 + x_i|^p + |x_0 - x_i|^p))
//               / (n |x_0|^p + sum_i |x_i|^p).
double GadgetObjective(const Graph& graph, std::span<const double> x, double c,
                       double p);

struct GadgetInstance {
  Graph graph;
  double c = 0.0;
  double p = 0.0;
  // 5|E| x (n+1). For edge e = {i, j} (vertex v is column v+1):
  //   row 5e:     +1 at i, -1 at j
  //   row 5e+1/2: C^(1/p) (n^(-1/p) at column 0, -/+1 at i)
  //   row 5e+3/4: C^(1/p) (n^(-1/p) at column 0, -/+1 at j)
  // so ||Mz||_p^p / ||z||_p^p = g(x) with z = (n^(1/p) x_0, x_1, ..., x_n).
  DenseMatrix matrix;
  std::vector<int> sides;       // +-1 per vertex
  std::vector<double> witness;  // (n^(1/p), sides...)
  std::size_t cut_size = 0;
  // C d 2^(p-1) + (cut_size / n) 2^(p-1): the p-th power ratio at witness.
  double expected_ratio = 0.0;
};

// Requires C > 0 and p > 2. The witness uses `sides` when given and
// GreedyCut otherwise.
GadgetInstance BuildGadget(const Graph& graph, double c, double p,
                           std::optional<std::vector<int>> sides = {});

// ||Mz||_p^p / ||z||_p^p.
double GadgetRatio(const DenseMatrix& m, std::span<const double> z, double p);

inline constexpr std::size_t kDefaultDimensionCap = 4096;

// Kronecker product; block (i, j) is m_ij N.
DenseMatrix Kronecker(const DenseMatrix& m, const DenseMatrix& n,
                      std::size_t cap = kDefaultDimensionCap);

// Zero-pads both factors to square, then takes the Kronecker product.
// Throws SizeError when a dimension of the result exceeds cap.
DenseMatrix Tensor(const DenseMatrix& m, const DenseMatrix& n,
                   std::size_t cap = kDefaultDimensionCap);

// Maximize ||B y||_p / (sum_i alpha_i |y_i|^p)^(1/p).
struct WeightedInstance {
  DenseMatrix matrix;
  std::vector<double> alpha;  // positive integers
  double p = 2.0;
  std::vector<double> witness;  // +-1 vector
  // ||B w||_p^p / sum_i alpha_i, and its p-th root.
  double witness_pth = 0.0;
  double witness_value = 0.0;
};

// Weighted objective value at y, 1/p-exponent form.
double WeightedValue(const WeightedInstance& w, std::span<const double> y);

// B = M^{(x)k} diag(n^(w(I)/p)) with alpha_I = n^(w(I)), w(I) the number of
// zero indices in the tuple I. The witness is the k-fold product of
// (1, sides...), and witness_pth equals expected_ratio^k.
WeightedInstance Amplify(const GadgetInstance& gadget, std::size_t k,
                         std::size_t cap = kDefaultDimensionCap);

struct LiftedInstance {
  DenseMatrix matrix;  // B diag(alpha^(-1/q))
  NormParams params = NormParams::General(2.0, 2.0);
  std::vector<double> witness;  // alpha^(1/q) * y
  double witness_value = 0.0;   // ||B y||_p / (sum alpha)^(1/q)
  double tau_c = 0.0;           // ||B y||_p / (sum alpha)^(1/p)
  double completeness_factor = 0.0;  // (sum alpha)^(1/p - 1/q)
};

// h(y) = ||By||_p / (sum alpha_i |y_i|^q)^(1/q) becomes ||B D z||_p / ||z||_q
// under z_i = alpha_i^(1/q) y_i. Requires finite q >= p >= 1.
LiftedInstance LiftToQP(const WeightedInstance& w, double p, double q);

}  // namespace opnorm

#endif  // OPNORM_INSTANCES_HPP_
