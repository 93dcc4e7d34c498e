#include "opnorm/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "opnorm/boyd.hpp"
#include "opnorm/core.hpp"
#include "opnorm/errors.hpp"
#include "opnorm/instances.hpp"
#include "opnorm/matrix_io.hpp"
#include "opnorm/oracle.hpp"

namespace opnorm {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr std::size_t kDefaultMaxDim = 4096;
// Above this many columns verify skips the multistart oracle.
constexpr std::size_t kVerifyOracleColumns = 128;

std::size_t MaxDim() {
  const char* env = std::getenv("OPNORM_MAX_DIM");
  if (env == nullptr || *env == '\0') return kDefaultMaxDim;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (*end != '\0' || v == 0) {
    throw InvalidInputError("OPNORM_MAX_DIM must be a positive integer");
  }
  return static_cast<std::size_t>(v);
}

json Exponent(double p) {
  if (IsInfinite(p)) return "inf";
  return p;
}

bool HasNaN(const json& j) {
  if (j.is_number_float()) return std::isnan(j.get<double>());
  if (j.is_structured()) {
    for (const auto& v : j) {
      if (HasNaN(v)) return true;
    }
  }
  return false;
}

std::string CommandEcho(int argc, const char* const* argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) {
    if (i) s += ' ';
    s += argv[i];
  }
  return s;
}

double Seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

json BoundsJson(const CertifiedBounds& b) {
  return {{"lower", b.lower},
          {"upper", b.upper},
          {"source", BoundSourceName(b.source)}};
}

// Prints the report; a NaN anywhere turns any exit code into a failure.
int Emit(std::ostream& out, std::ostream& err, const json& report, int code) {
  out << report.dump(2) << '\n';
  if (HasNaN(report)) {
    err << "error: report contains NaN\n";
    return kExitCheckFailed;
  }
  return code;
}

// ---------------------------------------------------------------------------

struct ComputeArgs {
  std::string input;
  std::string p = "2";
  std::string q = "2";
  double tol = 1e-9;
  std::size_t max_iter = 1'000'000;
  double shift_delta = kDefaultShiftDelta;
  bool emit_vector = false;
  std::uint64_t seed = 0;
};

int RunCompute(const ComputeArgs& args, const std::string& echo,
               std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  const double p = ParseExponent(args.p);
  const double q = ParseExponent(args.q);
  const NormParams general = NormParams::General(p, q);
  if (!general.in_iteration_range()) {
    err << "error: the fixed-point iteration supports 1 < p <= q < inf only "
           "(got p="
        << FormatExponent(p) << ", q=" << FormatExponent(q)
        << "); use `opnorm oracle` for other exponents\n";
    return kExitInvalid;
  }
  const DenseMatrix a = ReadMatrixFile(args.input, MaxDim());
  if (!a.IsNonnegative()) {
    err << "error: compute needs a nonnegative matrix; use `opnorm oracle` "
           "for matrices with negative entries\n";
    return kExitInvalid;
  }
  BoydOptions options;
  options.tol = args.tol;
  options.max_iter = args.max_iter;
  options.shift_delta = args.shift_delta;
  const ConvergenceReport r = ComputeNorm(a, general, options);

  json report;
  report["command"] = echo;
  report["input"] = args.input;
  report["params"] = {{"p", Exponent(p)},
                      {"q", Exponent(q)},
                      {"tol", args.tol},
                      {"max_iter", args.max_iter},
                      {"seed", args.seed}};
  report["estimate"] = r.estimate;
  report["bounds"] = BoundsJson(r.bounds);
  report["iterations"] = r.iterations;
  report["converged"] = r.converged;
  report["potential_ratio"] = r.potential_ratio;
  report["n_param"] = r.positive.n_param;
  if (args.emit_vector) {
    report["maximizer"] = std::vector<double>(r.maximizer.coords().begin(),
                                              r.maximizer.coords().end());
  }
  report["wall_time_s"] = Seconds(start);
  if (!r.converged) {
    err << "warning: stopped after " << r.iterations
        << " iterations without reaching the tolerance\n";
  }
  return Emit(out, err, report, r.converged ? kExitOk : kExitNotConverged);
}

// ---------------------------------------------------------------------------

struct OracleArgs {
  std::string input;
  std::string p = "2";
  std::string q = "2";
  bool inf_to_p = false;
  bool baseline = false;
  std::size_t restarts = 32;
  std::uint64_t seed = 0;
  bool emit_vector = false;
};

int RunOracle(const OracleArgs& args, const std::string& echo,
              std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  const double p = ParseExponent(args.p);
  const double q = args.inf_to_p ? kInfinity : ParseExponent(args.q);
  const NormParams params = NormParams::General(p, q);
  const DenseMatrix a = ReadMatrixFile(args.input, MaxDim());

  json report;
  report["command"] = echo;
  report["input"] = args.input;
  report["params"] = {{"p", Exponent(p)},
                      {"q", Exponent(q)},
                      {"restarts", args.restarts},
                      {"seed", args.seed}};
  std::vector<double> witness;
  if (args.baseline) {
    const CertifiedBounds b = InterpolationEstimate(a, params);
    report["method"] = OracleMethodName(OracleMethod::kInterpolation);
    report["exhaustive"] = false;
    report["estimate"] = b.lower;
    report["bounds"] = BoundsJson(b);
    report["approximation_ratio"] = b.upper / b.lower;
  } else if (IsInfinite(q)) {
    const OracleResult r = LongestVector(a, p);
    report["method"] = OracleMethodName(r.method);
    report["exhaustive"] = r.exhaustive;
    report["estimate"] = r.value;
    report["bounds"] = BoundsJson({r.value, r.value, BoundSource::kOracle});
    witness = r.witness;
  } else {
    if (IsInfinite(p)) {
      err << "error: p = inf is only supported with --baseline\n";
      return kExitInvalid;
    }
    BruteOptions options;
    options.restarts = args.restarts;
    options.seed = args.seed;
    const OracleResult r = BruteNorm(a, params, options);
    // Multistart values are lower bounds; the interpolation ceiling is the
    // certified upper end.
    const CertifiedBounds ceiling = InterpolationEstimate(a, params);
    report["method"] = OracleMethodName(r.method);
    report["exhaustive"] = r.exhaustive;
    report["estimate"] = r.value;
    report["bounds"] = BoundsJson(
        {r.value, std::max(ceiling.upper, r.value), BoundSource::kOracle});
    witness = r.witness;
  }
  report["iterations"] = 0;
  report["converged"] = true;
  if (args.emit_vector && !witness.empty()) report["witness"] = witness;
  report["wall_time_s"] = Seconds(start);
  return Emit(out, err, report, kExitOk);
}

// ---------------------------------------------------------------------------

struct GenArgs {
  std::string kind;
  std::string builtin;
  std::string graph_path;
  std::optional<double> c;
  double eps = 0.1;
  double p = 3.0;
  double q = 4.0;
  std::size_t k = 0;  // 0: 2 for tensor, 1 for lift
  std::string out_dir = ".";
  std::string name;
  std::uint64_t seed = 0;
};

json GraphJson(const Graph& g) {
  json edges = json::array();
  for (const auto& [u, v] : g.edges()) edges.push_back({u, v});
  return {{"n", g.n()}, {"degree", g.degree()}, {"edges", edges}};
}

int RunGen(const GenArgs& args, const std::string& echo, std::ostream& out,
           std::ostream& err) {
  if (args.builtin.empty() == args.graph_path.empty()) {
    err << "error: give exactly one of --builtin or --graph\n";
    return kExitInvalid;
  }
  const Graph graph = args.builtin.empty()
                          ? Graph::ReadEdgeListFile(args.graph_path)
                          : Graph::Builtin(args.builtin);
  const double c = args.c ? *args.c : DefaultC(args.p, args.eps);
  const std::size_t cap = MaxDim();
  if (graph.n() + 1 > cap || 5 * graph.edges().size() > cap) {
    throw SizeError("gadget exceeds the dimension cap " + std::to_string(cap));
  }
  const GadgetInstance gadget = BuildGadget(graph, c, args.p);

  json manifest;
  manifest["kind"] = args.kind;
  manifest["p"] = args.p;
  manifest["C"] = c;
  manifest["epsilon"] = args.eps;
  manifest["seed"] = args.seed;
  manifest["graph"] = GraphJson(graph);
  manifest["cut_size"] = gadget.cut_size;
  manifest["base_ratio_at_witness"] = gadget.expected_ratio;

  DenseMatrix matrix;
  if (args.kind == "gadget") {
    matrix = gadget.matrix;
    std::vector<double> alphas(graph.n() + 1, 1.0);
    alphas[0] = static_cast<double>(graph.n());
    manifest["q"] = args.p;
    manifest["k"] = 1;
    manifest["alphas"] = alphas;
    manifest["witness"] = gadget.witness;
    manifest["ratio_form"] = "pth-power";
    manifest["expected_ratio_at_witness"] = gadget.expected_ratio;
  } else if (args.kind == "tensor") {
    const std::size_t k = args.k == 0 ? 2 : args.k;
    const WeightedInstance w = Amplify(gadget, k, cap);
    matrix = gadget.matrix;
    for (std::size_t t = 1; t < k; ++t) matrix = Kronecker(matrix, gadget.matrix, cap);
    // Witness of the plain power: y_I = n^(w(I)/p) x_I.
    std::vector<double> y(w.witness.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
      y[i] = std::pow(w.alpha[i], 1.0 / args.p) * w.witness[i];
    }
    manifest["q"] = args.p;
    manifest["k"] = k;
    manifest["alphas"] = w.alpha;
    manifest["witness"] = y;
    manifest["ratio_form"] = "pth-power";
    manifest["expected_ratio_at_witness"] = std::pow(gadget.expected_ratio, k);
  } else if (args.kind == "lift") {
    const std::size_t k = args.k == 0 ? 1 : args.k;
    if (!(args.q >= args.p)) throw InvalidInputError("lift needs q >= p");
    const WeightedInstance w = Amplify(gadget, k, cap);
    const LiftedInstance lifted = LiftToQP(w, args.p, args.q);
    matrix = lifted.matrix;
    manifest["q"] = args.q;
    manifest["k"] = k;
    manifest["alphas"] = w.alpha;
    manifest["witness"] = lifted.witness;
    manifest["ratio_form"] = "norm";
    manifest["expected_ratio_at_witness"] = lifted.witness_value;
    manifest["tau_c"] = lifted.tau_c;
    manifest["completeness_factor"] = lifted.completeness_factor;
  } else {
    err << "error: unknown instance kind '" << args.kind << "'\n";
    return kExitInvalid;
  }

  const std::string stem = args.name.empty() ? args.kind : args.name;
  fs::create_directories(args.out_dir);
  const fs::path matrix_path = fs::path(args.out_dir) / (stem + ".mtx");
  const fs::path manifest_path = fs::path(args.out_dir) / (stem + ".json");
  WriteMatrixFile(matrix_path.string(), matrix);
  manifest["matrix"] = matrix_path.filename().string();
  manifest["rows"] = matrix.rows();
  manifest["cols"] = matrix.cols();
  if (HasNaN(manifest)) {
    err << "error: manifest contains NaN\n";
    return kExitCheckFailed;
  }
  std::ofstream mout(manifest_path);
  mout << manifest.dump(2) << '\n';
  if (!mout) throw FormatError("cannot write '" + manifest_path.string() + "'", 0);

  json report = {{"command", echo},
                 {"manifest", manifest_path.string()},
                 {"matrix", matrix_path.string()},
                 {"rows", matrix.rows()},
                 {"cols", matrix.cols()},
                 {"expected_ratio_at_witness",
                  manifest["expected_ratio_at_witness"]}};
  return Emit(out, err, report, kExitOk);
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
  std::string manifest;
  std::size_t restarts = 8;
  std::uint64_t seed = 0;
};

int RunVerify(const VerifyArgs& args, std::ostream& out, std::ostream& err) {
  std::ifstream in(args.manifest);
  if (!in) {
    err << "error: cannot open '" << args.manifest << "'\n";
    return kExitInvalid;
  }
  json manifest;
  try {
    manifest = json::parse(in);
  } catch (const json::exception& e) {
    err << "error: manifest is not valid JSON: " << e.what() << '\n';
    return kExitInvalid;
  }
  double p = 0.0, q = 0.0, expected = 0.0;
  std::vector<double> witness;
  std::string form, matrix_name;
  try {
    p = manifest.at("p").get<double>();
    q = manifest.at("q").get<double>();
    expected = manifest.at("expected_ratio_at_witness").get<double>();
    witness = manifest.at("witness").get<std::vector<double>>();
    form = manifest.at("ratio_form").get<std::string>();
    matrix_name = manifest.at("matrix").get<std::string>();
  } catch (const json::exception& e) {
    err << "error: manifest is missing a field: " << e.what() << '\n';
    return kExitInvalid;
  }
  if (form != "pth-power" && form != "norm") {
    err << "error: unknown ratio_form '" << form << "'\n";
    return kExitInvalid;
  }
  const fs::path matrix_path =
      fs::path(args.manifest).parent_path() / matrix_name;
  const DenseMatrix a = ReadMatrixFile(matrix_path.string(), MaxDim());
  const NormParams params = NormParams::General(p, q);
  if (witness.size() != a.cols()) {
    err << "error: witness length does not match the matrix\n";
    return kExitInvalid;
  }

  json checks = json::array();
  bool all = true;
  auto record = [&](const std::string& name, bool passed, json detail) {
    detail["name"] = name;
    detail["passed"] = passed;
    all = all && passed;
    checks.push_back(std::move(detail));
    if (!passed) err << "check failed: " << name << '\n';
  };

  const double witness_norm = RatioF(a, witness, params);
  const double observed =
      form == "pth-power" ? std::pow(witness_norm, p) : witness_norm;
  const double rel = std::abs(observed - expected) / std::abs(expected);
  record("witness_ratio", rel <= 1e-9,
         {{"expected", expected}, {"observed", observed}, {"rel_error", rel}});

  const CertifiedBounds baseline = InterpolationEstimate(a, params);
  record("witness_below_baseline_upper",
         witness_norm <= baseline.upper * (1 + 1e-9),
         {{"witness_norm", witness_norm}, {"upper", baseline.upper}});

  std::optional<double> oracle_value;
  if (a.cols() <= kVerifyOracleColumns) {
    BruteOptions options;
    options.restarts = args.restarts;
    options.seed = args.seed;
    options.starts.push_back(witness);
    oracle_value = BruteNorm(a, params, options).value;
    record("oracle_within_baseline",
           *oracle_value <= baseline.upper * (1 + 1e-9) &&
               *oracle_value >= witness_norm * (1 - 1e-9),
           {{"oracle", *oracle_value},
            {"witness_norm", witness_norm},
            {"upper", baseline.upper}});
  }

  if (a.IsNonnegative() && params.in_iteration_range()) {
    const ConvergenceReport r = ComputeNorm(a, params);
    bool ok = witness_norm <= r.bounds.upper * (1 + 1e-9);
    if (oracle_value) ok = ok && r.bounds.Contains(*oracle_value, 1e-6);
    record("sandwich_contains", ok,
           {{"lower", r.bounds.lower}, {"upper", r.bounds.upper}});
  }

  json report = {{"manifest", args.manifest},
                 {"checks", checks},
                 {"passed", all}};
  return Emit(out, err, report, all ? kExitOk : kExitCheckFailed);
}

// ---------------------------------------------------------------------------

struct BenchArgs {
  std::vector<std::size_t> sizes = {4, 8, 16, 32};
  std::size_t repeats = 3;
  double p = 2.5;
  double q = 3.0;
  double tol = 1e-9;
  std::uint64_t seed = 0;
};

int RunBench(const BenchArgs& args, std::ostream& out, std::ostream& err) {
  const NormParams params = NormParams::Iteration(args.p, args.q);
  std::mt19937_64 rng(args.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  json runs = json::array();
  double worst = 0.0;
  for (std::size_t n : args.sizes) {
    if (n == 0 || n > MaxDim()) throw SizeError("bench size out of range");
    for (std::size_t r = 0; r < args.repeats; ++r) {
      std::vector<double> e(n * n);
      for (double& v : e) v = unit(rng);
      const DenseMatrix a(n, n, std::move(e));
      BoydOptions options;
      options.tol = args.tol;
      const auto start = std::chrono::steady_clock::now();
      const ConvergenceReport rep = ComputeNorm(a, params, options);
      const double secs = Seconds(start);
      const double nn = rep.positive.n_param * static_cast<double>(n);
      const double scale = nn * std::pow(std::log(nn / args.tol), 3.0);
      const double c = static_cast<double>(rep.iterations) / scale;
      worst = std::max(worst, c);
      runs.push_back({{"n", n},
                      {"N", rep.positive.n_param},
                      {"iterations", rep.iterations},
                      {"converged", rep.converged},
                      {"iteration_scale", scale},
                      {"c", c},
                      {"wall_time_s", secs}});
    }
  }
  json report = {{"params", {{"p", args.p}, {"q", args.q}, {"tol", args.tol},
                             {"seed", args.seed}}},
                 {"runs", runs},
                 {"max_c", worst}};
  return Emit(out, err, report, kExitOk);
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Operator norms ||A||_{q->p} with certified bounds"};
  app.name("opnorm");
  app.require_subcommand(1);

  ComputeArgs compute;
  auto* c = app.add_subcommand("compute", "fixed-point iteration, 1 < p <= q < inf");
  c->add_option("input", compute.input, "matrix file (.mtx or TSV)")->required();
  c->add_option("--p", compute.p, "outer exponent")->capture_default_str();
  c->add_option("--q", compute.q, "inner exponent")->capture_default_str();
  c->add_option("--tol", compute.tol, "stop when M/m <= 1 + tol")->capture_default_str();
  c->add_option("--max-iter", compute.max_iter)->capture_default_str();
  c->add_option("--shift-delta", compute.shift_delta, "positivity shift delta")
      ->capture_default_str();
  c->add_option("--seed", compute.seed)->capture_default_str();
  c->add_flag("--emit-vector", compute.emit_vector, "include the maximizer");

  OracleArgs oracle;
  auto* o = app.add_subcommand("oracle", "reference values at small scale");
  o->add_option("input", oracle.input, "matrix file (.mtx or TSV)")->required();
  o->add_option("--p", oracle.p)->capture_default_str();
  o->add_option("--q", oracle.q)->capture_default_str();
  o->add_flag("--inf-to-p", oracle.inf_to_p, "exact ||A||_{inf->p} by sign enumeration");
  o->add_flag("--baseline", oracle.baseline, "interpolation bounds only");
  o->add_option("--restarts", oracle.restarts)->capture_default_str();
  o->add_option("--seed", oracle.seed)->capture_default_str();
  o->add_flag("--emit-vector", oracle.emit_vector, "include the witness");

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "write a reduction instance and manifest");
  g->add_option("kind", gen.kind, "gadget | tensor | lift")
      ->required()
      ->check(CLI::IsMember({"gadget", "tensor", "lift"}));
  g->add_option("--builtin", gen.builtin, "cycleN | completeN | hypercubeK");
  g->add_option("--graph", gen.graph_path, "edge list file");
  g->add_option("--C", gen.c, "edge weight constant (default from --eps)");
  g->add_option("--eps", gen.eps)->capture_default_str();
  g->add_option("--p", gen.p)->capture_default_str();
  g->add_option("--q", gen.q, "inner exponent for lift")->capture_default_str();
  g->add_option("--k", gen.k, "tensor power (default 2 for tensor, 1 for lift)");
  g->add_option("--out", gen.out_dir)->capture_default_str();
  g->add_option("--name", gen.name, "file stem (default: kind)");
  g->add_option("--seed", gen.seed)->capture_default_str();

  VerifyArgs verify;
  auto* v = app.add_subcommand("verify", "re-check a generated manifest");
  v->add_option("manifest", verify.manifest)->required();
  v->add_option("--restarts", verify.restarts)->capture_default_str();
  v->add_option("--seed", verify.seed)->capture_default_str();

  BenchArgs bench;
  auto* b = app.add_subcommand("bench", "iteration counts on random positive matrices");
  b->add_option("--sizes", bench.sizes, "comma separated")->delimiter(',')->capture_default_str();
  b->add_option("--repeats", bench.repeats)->capture_default_str();
  b->add_option("--p", bench.p)->capture_default_str();
  b->add_option("--q", bench.q)->capture_default_str();
  b->add_option("--tol", bench.tol)->capture_default_str();
  b->add_option("--seed", bench.seed)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  const std::string echo = CommandEcho(argc, argv);
  try {
    if (*c) return RunCompute(compute, echo, out, err);
    if (*o) return RunOracle(oracle, echo, out, err);
    if (*g) return RunGen(gen, echo, out, err);
    if (*v) return RunVerify(verify, out, err);
    if (*b) return RunBench(bench, out, err);
  } catch (const FormatError& e) {
    err << "error: " << e.what() << '\n';
  } catch (const SizeError& e) {
    err << "error: " << e.what() << '\n';
  } catch (const InvalidInputError& e) {
    err << "error: " << e.what() << '\n';
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << '\n';
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
  }
  return kExitInvalid;
}

}  // namespace opnorm
