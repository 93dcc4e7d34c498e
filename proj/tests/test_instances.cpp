#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "opnorm/boyd.hpp"
#include "opnorm/errors.hpp"
#include "opnorm/instances.hpp"
#include "opnorm/oracle.hpp"
#include "test_support.hpp"

namespace opnorm {
namespace {

using testing::RelErr;

TEST(Graph, Builtins) {
  const Graph c4 = Graph::Builtin("cycle4");
  EXPECT_EQ(c4.n(), 4u);
  EXPECT_EQ(c4.degree(), 2u);
  EXPECT_EQ(c4.edges().size(), 4u);
  const Graph k5 = Graph::Builtin("complete5");
  EXPECT_EQ(k5.degree(), 4u);
  EXPECT_EQ(k5.edges().size(), 10u);
  const Graph h3 = Graph::Builtin("hypercube3");
  EXPECT_EQ(h3.n(), 8u);
  EXPECT_EQ(h3.degree(), 3u);
  EXPECT_EQ(h3.edges().size(), 12u);
  EXPECT_THROW(Graph::Builtin("cycle2"), InvalidInputError);
  EXPECT_THROW(Graph::Builtin("petersen"), InvalidInputError);
}

TEST(Graph, Validation) {
  EXPECT_THROW(Graph::Make(3, {{0, 0}, {1, 2}}), InvalidInputError);
  EXPECT_THROW(Graph::Make(2, {{0, 1}, {1, 0}}), InvalidInputError);
  EXPECT_THROW(Graph::Make(2, {{0, 2}}), InvalidInputError);
  EXPECT_THROW(Graph::Make(3, {{0, 1}, {1, 2}}), InvalidInputError);
  EXPECT_THROW(Graph::Make(2, {}), InvalidInputError);
  EXPECT_NO_THROW(Graph::Make(2, {{0, 1}}));
}

TEST(Graph, EdgeList) {
  std::istringstream in("# square\n0 1\n1 2\n\n2 3 # last two\n3 0\n");
  const Graph g = Graph::ReadEdgeList(in);
  EXPECT_EQ(g.n(), 4u);
  EXPECT_EQ(g.degree(), 2u);
  std::istringstream bad("0 1\n1 x\n");
  EXPECT_THROW(Graph::ReadEdgeList(bad), FormatError);
}

TEST(Cuts, ExactMaxCut) {
  EXPECT_EQ(MaxCut(Graph::Cycle(4)), 4u);
  EXPECT_EQ(MaxCut(Graph::Complete(3)), 2u);
  EXPECT_EQ(MaxCut(Graph::Cycle(5)), 4u);
  EXPECT_EQ(MaxCut(Graph::Complete(4)), 4u);
  EXPECT_EQ(MaxCut(Graph::Hypercube(3)), 12u);
  EXPECT_THROW(MaxCut(Graph::Cycle(17)), SizeError);
}

TEST(Cuts, GreedyIsLocallyOptimal) {
  for (const char* name : {"cycle4", "cycle7", "complete5", "hypercube4"}) {
    const Graph g = Graph::Builtin(name);
    auto sides = GreedyCut(g);
    const std::size_t cut = g.CutSize(sides);
    EXPECT_LE(cut, MaxCut(g));
    for (std::size_t v = 0; v < g.n(); ++v) {
      sides[v] = -sides[v];
      EXPECT_LE(g.CutSize(sides), cut) << name;
      sides[v] = -sides[v];
    }
  }
  EXPECT_EQ(Graph::Cycle(4).CutSize(GreedyCut(Graph::Cycle(4))), 4u);
}

TEST(EdgeTerm, DirectSubstitution) {
  EXPECT_DOUBLE_EQ(EdgeTerm(1, -1, 1, 3), 6.0);
  EXPECT_DOUBLE_EQ(EdgeTerm(1, -1, 2, 3), 10.0);
  EXPECT_DOUBLE_EQ(EdgeTerm(0, 0, 1, 3), 2.0);
}

TEST(EdgeTerm, BruteInequality) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-5, 5);
  for (double p : {2.5, 3.0, 5.0}) {
    for (int t = 0; t < 10000; ++t) {
      EXPECT_LE(BruteInequalityRatio(u(rng), p), std::pow(2.0, p - 1) * (1 + 1e-12));
    }
    EXPECT_NEAR(BruteInequalityRatio(1.0, p), std::pow(2.0, p - 1), 1e-12);
  }
}

TEST(EdgeTerm, TechnicalInequalityWithDefaultC) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-3, 3);
  const double eps = 0.1;
  for (double p : {2.5, 3.0, 4.0}) {
    const double c = DefaultC(p, eps);
    const double top = c * std::pow(2.0, p - 1);
    for (int t = 0; t < 20000; ++t) {
      const double x = u(rng), y = u(rng);
      const bool bad = std::abs(std::abs(x) - 1) > eps || std::abs(std::abs(y) - 1) > eps;
      const double f = EdgeTerm(x, y, c, p);
      if (bad) {
        EXPECT_LE(f, top * (1 + 1e-12)) << x << " " << y;
      } else {
        const double good = (1 + eps) * std::pow(2.0, p) /
                            (2 + std::pow(std::abs(x), p) + std::pow(std::abs(y), p));
        EXPECT_LE(f, top + good);
      }
    }
  }
  EXPECT_THROW(DefaultC(2.0), InvalidInputError);
  EXPECT_THROW(DefaultC(3.0, 1.5), InvalidInputError);
}

TEST(Gadget, WitnessValues) {
  const GadgetInstance c4 = BuildGadget(Graph::Cycle(4), 10, 3, std::vector<int>{1, -1, 1, -1});
  EXPECT_EQ(c4.matrix.rows(), 20u);
  EXPECT_EQ(c4.matrix.cols(), 5u);
  EXPECT_EQ(c4.cut_size, 4u);
  EXPECT_NEAR(c4.expected_ratio, 84.0, 1e-12);
  EXPECT_NEAR(GadgetRatio(c4.matrix, c4.witness, 3), 84.0, 1e-10);

  const GadgetInstance k2 = BuildGadget(Graph::Complete(2), 1, 3);
  EXPECT_NEAR(GadgetRatio(k2.matrix, k2.witness, 3), 6.0, 1e-12);

  const GadgetInstance flat =
      BuildGadget(Graph::Cycle(5), 2.5, 3.5, std::vector<int>(5, 1));
  EXPECT_EQ(flat.cut_size, 0u);
  EXPECT_NEAR(GadgetRatio(flat.matrix, flat.witness, 3.5),
              2.5 * 2 * std::pow(2.0, 2.5), 1e-10);
}

TEST(Gadget, MatrixMatchesObjective) {
  std::mt19937_64 rng(43);
  std::normal_distribution<double> g;
  const Graph graph = Graph::Builtin("complete4");
  const double c = 3.7, p = 2.6;
  const GadgetInstance inst = BuildGadget(graph, c, p);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> x(5);
    for (double& v : x) v = g(rng);
    auto z = x;
    z[0] *= std::pow(4.0, 1 / p);
    EXPECT_LT(RelErr(GadgetRatio(inst.matrix, z, p), GadgetObjective(graph, x, c, p)),
              1e-10);
  }
}

TEST(Gadget, RejectsBadParameters) {
  EXPECT_THROW(BuildGadget(Graph::Cycle(4), 0, 3), InvalidInputError);
  EXPECT_THROW(BuildGadget(Graph::Cycle(4), 1, 2), InvalidInputError);
  EXPECT_THROW(BuildGadget(Graph::Cycle(4), 1, 3, std::vector<int>{1, 1}),
               InvalidInputError);
}

TEST(Gadget, SoundnessDirection) {
  // The largest p-th power ratio never beats the max-cut pattern by more than
  // the (1+eps)/(1-eps)^p slack.
  const double eps = 0.1;
  for (const char* name : {"complete2", "cycle4", "complete3", "cycle5"}) {
    const Graph graph = Graph::Builtin(name);
    for (double p : {2.5, 3.0}) {
      const double c = DefaultC(p, eps);
      const GadgetInstance inst = BuildGadget(graph, c, p);
      BruteOptions opts;
      opts.restarts = 16;
      opts.starts.push_back(inst.witness);
      const double best = std::pow(BruteNorm(inst.matrix, NormParams::General(p, p), opts).value, p);
      const double d = static_cast<double>(graph.degree());
      const double cut_fraction = static_cast<double>(MaxCut(graph)) / graph.n();
      const double bound = c * d * std::pow(2.0, p - 1) +
                           cut_fraction * std::pow(2.0, p - 1) * (1 + eps) *
                               std::pow(1 - eps, -p);
      EXPECT_LE(best, bound) << name << " p=" << p;
      EXPECT_GE(best, inst.expected_ratio * (1 - 1e-9));
    }
  }
}

TEST(Tensor, KroneckerLayoutAndPadding) {
  EXPECT_EQ(Tensor(DenseMatrix::Identity(2), DenseMatrix::Identity(2)),
            DenseMatrix::Identity(4));
  const DenseMatrix k = Kronecker(DenseMatrix{{1, 2}}, DenseMatrix{{0, 1}, {1, 0}});
  EXPECT_EQ(k, (DenseMatrix{{0, 1, 0, 2}, {1, 0, 2, 0}}));
  const DenseMatrix t = Tensor(DenseMatrix{{1, 2}}, DenseMatrix{{3}});
  EXPECT_EQ(t, (DenseMatrix{{3, 6}, {0, 0}}));
  EXPECT_THROW(Kronecker(DenseMatrix::Ones(10, 10), DenseMatrix::Ones(10, 10), 99),
               SizeError);
  EXPECT_THROW(Tensor(DenseMatrix::Ones(2, 10), DenseMatrix::Ones(3, 3), 20), SizeError);
}

TEST(Tensor, MultiplicativeForEqualExponents) {
  std::mt19937_64 rng(44);
  const NormParams params = NormParams::Iteration(2.7, 2.7);
  BoydOptions opts;
  opts.tol = 1e-12;
  for (int t = 0; t < 10; ++t) {
    const DenseMatrix m = testing::RandomPositive(2, 2, rng);
    const DenseMatrix n = testing::RandomPositive(2, 2, rng);
    const double lhs = ComputeNorm(Tensor(m, n), params, opts).estimate;
    const double rhs = testing::TwoColumnNorm(m, 2.7, 2.7) * testing::TwoColumnNorm(n, 2.7, 2.7);
    EXPECT_LT(RelErr(lhs, rhs), 1e-6);
  }
}

TEST(Tensor, RankOneFactors) {
  const double p = 3, q = 4;
  const DenseMatrix uv{{1, 2}, {2, 4}};  // u = (1,2), v = (1,2)
  const DenseMatrix st{{3, 1}, {0, 0}};  // s = (1,0), t = (3,1)
  auto rank_one = [&](const std::vector<double>& u, const std::vector<double>& v) {
    return testing::NaiveNorm(u, p) * testing::NaiveNorm(v, q / (q - 1));
  };
  const double expected = rank_one({1, 2}, {1, 2}) * rank_one({1, 0}, {3, 1});
  const double got = BruteNorm(Tensor(uv, st), NormParams::General(p, q)).value;
  EXPECT_LT(RelErr(got, expected), 1e-8);
}

TEST(Tensor, SignedLowerBoundFromProductWitness) {
  std::mt19937_64 rng(45);
  for (int t = 0; t < 10; ++t) {
    const DenseMatrix m = testing::RandomMatrix(2, 2, rng, -1, 1);
    const DenseMatrix n = testing::RandomMatrix(2, 2, rng, -1, 1);
    const double p = 1.5 + 0.3 * t;
    const double prod = testing::TwoColumnNorm(m, p, p) * testing::TwoColumnNorm(n, p, p);
    const double v = BruteNorm(Tensor(m, n), NormParams::General(p, p)).value;
    EXPECT_GE(v, prod * (1 - 1e-7));
  }
}

TEST(Tensor, PinnedUnequalExponentCounterexample) {
  const DenseMatrix m{{-0.6, -0.7}, {-1.0, 0.7}};
  const DenseMatrix n{{1.0, -0.5}, {-0.5, -0.6}};
  const double p = 1.5, q = 3;
  const double prod = testing::TwoColumnNorm(m, p, q) * testing::TwoColumnNorm(n, p, q);
  const double v = BruteNorm(Tensor(m, n), NormParams::General(p, q), {.restarts = 64}).value;
  EXPECT_GE(v / prod - 1, 1e-3);
  EXPECT_NEAR(v, 1.77181, 1e-4);
  EXPECT_NEAR(prod, 1.71773, 1e-4);
}

TEST(Amplify, BaseCaseWeights) {
  const GadgetInstance g = BuildGadget(Graph::Cycle(4), 2, 3);
  const WeightedInstance w = Amplify(g, 1);
  EXPECT_EQ(w.alpha, (std::vector<double>{4, 1, 1, 1, 1}));
  EXPECT_NEAR(w.witness_pth, g.expected_ratio, 1e-10);
  EXPECT_NEAR(w.witness_value, std::pow(g.expected_ratio, 1.0 / 3), 1e-12);
  EXPECT_NEAR(WeightedValue(w, w.witness), w.witness_value, 1e-12);
}

TEST(Amplify, SquaredWitnessOnSingleEdge) {
  const GadgetInstance g = BuildGadget(Graph::Complete(2), 1, 3);
  const WeightedInstance w = Amplify(g, 2);
  EXPECT_EQ(w.matrix.rows(), 25u);
  EXPECT_EQ(w.matrix.cols(), 9u);
  EXPECT_NEAR(w.witness_pth, 36.0, 1e-9);
  EXPECT_EQ(w.alpha[0], 4.0);
  EXPECT_EQ(w.alpha[1], 2.0);
  EXPECT_EQ(w.alpha[4], 1.0);
  EXPECT_THROW(Amplify(g, 0), InvalidInputError);
  EXPECT_THROW(Amplify(g, 4, 100), SizeError);
}

TEST(Amplify, SquareOfNormForPositiveMatrix) {
  std::mt19937_64 rng(46);
  const DenseMatrix m = testing::RandomPositive(3, 3, rng);
  const NormParams params = NormParams::Iteration(2.5, 2.5);
  BoydOptions opts;
  opts.tol = 1e-12;
  const double single = ComputeNorm(m, params, opts).estimate;
  const double squared = ComputeNorm(Kronecker(m, m), params, opts).estimate;
  EXPECT_LT(RelErr(squared, single * single), 1e-6);
}

TEST(Lift, EqualExponentsKeepUnitWeights) {
  WeightedInstance w;
  w.matrix = DenseMatrix{{1, 2}, {3, 4}};
  w.alpha = {1, 1};
  w.p = 3;
  w.witness = {1, -1};
  const LiftedInstance l = LiftToQP(w, 3, 3);
  EXPECT_EQ(l.matrix, w.matrix);
  EXPECT_EQ(l.witness, w.witness);
  EXPECT_NEAR(l.completeness_factor, 1.0, 1e-15);
}

TEST(Lift, EqualExponentsRecoverGadget) {
  const GadgetInstance g = BuildGadget(Graph::Cycle(4), 2, 3);
  const LiftedInstance l = LiftToQP(Amplify(g, 1), 3, 3);
  EXPECT_LT(RelErr(l.matrix(0, 1), g.matrix(0, 1)), 1e-15);
  EXPECT_LT(RelErr(l.matrix(1, 0), g.matrix(1, 0)), 1e-14);
  EXPECT_LT(RelErr(std::pow(l.witness_value, 3), g.expected_ratio), 1e-12);
}

TEST(Lift, SingleEdgeToQFour) {
  const GadgetInstance g = BuildGadget(Graph::Complete(2), 1, 3);
  const LiftedInstance l = LiftToQP(Amplify(g, 1), 3, 4);
  // Numerator ||B y||_p^p = 6 * (2 + 1 + 1), denominator sum alpha = 4.
  const double expected = std::cbrt(24.0) / std::pow(4.0, 0.25);
  EXPECT_NEAR(l.witness_value, expected, 1e-12);
  EXPECT_NEAR(l.witness_value, 2.0396489, 1e-6);
  EXPECT_NEAR(testing::NaiveRatio(l.matrix, l.witness, 3, 4), expected, 1e-12);
  EXPECT_NEAR(l.completeness_factor, std::pow(4.0, 1.0 / 12), 1e-12);
  EXPECT_NEAR(l.witness_value, l.tau_c * l.completeness_factor, 1e-12);
  EXPECT_EQ(l.params.p(), 3.0);
  EXPECT_EQ(l.params.q(), 4.0);
  EXPECT_THROW(LiftToQP(Amplify(g, 1), 4, 3), InvalidInputError);
}

}  // namespace
}  // namespace opnorm
