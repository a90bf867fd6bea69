// maxplus: command-line front end for the max-plus toolkit.
//
// Exit status: 0 success, 1 failed verdict (with --assert) or domain error,
// 2 usage or I/O error.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "maxplus/maxplus.hpp"

using namespace maxplus;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string input;
  std::string kernel;
  std::size_t window = 50;
  double eps = Tolerance{}.eps;
  std::size_t nmax = 100;
  std::uint64_t seed = 1;
  std::string format = "text";
  std::string emit;
  std::optional<NodeId> i;
  std::optional<NodeId> j;
  bool assert_pass = false;

  // verb specific
  std::string vector_path;
  std::optional<double> lambda;
  bool all_rows = false;
  std::size_t column = 0;
  bool normalized = false;
  double floor = default_floor;
  std::vector<std::size_t> lengths;
  NodeId basepoint = 0;
  std::size_t rows = 10;
  std::size_t tail = 5;
  std::optional<double> beta;
  bool plus = false;
  std::string example;
};

LazyKernel parse_kernel(const std::string& spec) {
  try {
    return kernels::from_spec(spec);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

struct Source {
  std::string label;
  Matrix matrix;
  std::optional<LazyKernel> kernel;
  std::optional<Window> window;
};

Source load_source(const Options& o) {
  if (o.input.empty() == o.kernel.empty()) throw UsageError("exactly one of --input or --kernel is required");
  Source s;
  if (!o.input.empty()) {
    s.label = o.input;
    s.matrix = io::load_matrix(o.input);
  } else {
    s.label = o.kernel;
    s.kernel = parse_kernel(o.kernel);
    s.window = truncate(*s.kernel, o.window);
    s.matrix = s.window->matrix;
  }
  return s;
}

NodeId node(const std::optional<NodeId>& v, const char* flag, const Matrix& a) {
  if (!v) throw UsageError(std::string(flag) + " is required");
  if (*v >= a.size()) throw UsageError(std::string(flag) + " is outside the matrix");
  return *v;
}

class Cli {
 public:
  Cli(const Options& o, std::ostream& out)
      : o_(o), out_(out), w_(out, o.format == "machine" ? report::Format::machine : report::Format::text) {
    tol_.eps = o.eps;
  }

  int spectral() {
    const Source s = load_source(o_);
    header(s, false);
    report::write_summary(w_, spectral_summary(s.matrix, tol_));
    return 0;
  }

  int star() {
    const Source s = load_source(o_);
    header(s, true);
    const ClosureResult c = kleene_star(s.matrix, tol_);
    w_.field("diverged", c.diverged);
    const ExtMatrix& m = o_.plus ? c.plus : c.star;
    if (o_.i || o_.j) {
      const NodeId i = node(o_.i, "--i", s.matrix), j = node(o_.j, "--j", s.matrix);
      w_.field("star", c.star(i, j));
      w_.field("plus", c.plus(i, j));
    } else {
      for (NodeId i = 0; i < m.size(); ++i) w_.field("row " + std::to_string(i), w_.vector(m.row(i)));
    }
    if (!o_.emit.empty()) io::save_matrix(o_.emit, m);
    return 0;
  }

  int eigen() {
    const Source s = load_source(o_);
    header(s, true);
    if (o_.vector_path.empty()) {
      const EigenBasis b = principal_eigenbasis(s.matrix, tol_);
      w_.field("lambda", b.lambda);
      w_.field("classes", w_.groups(b.classes));
      w_.field("representatives", w_.nodes(b.representatives));
      for (std::size_t c = 0; c < b.columns.size(); ++c)
        w_.field("column " + std::to_string(b.representatives[c]), w_.vector(b.columns[c]));
      if (!o_.emit.empty()) {
        if (o_.column >= b.columns.size()) throw UsageError("--column is outside the basis");
        io::save_vector(o_.emit, b.columns[o_.column]);
      }
      return 0;
    }
    const Vector u = io::load_vector(o_.vector_path);
    if (u.size() != s.matrix.size()) throw DimensionError("vector size does not match the matrix");
    const Scalar lambda = o_.lambda ? *o_.lambda : max_cycle_mean(s.matrix);
    std::optional<NodeSet> rows;
    if (s.window && !o_.all_rows) rows = s.window->interior_rows();
    const EigenCheckReport r = check_eigen(s.matrix, lambda, u, tol_, rows);
    w_.field("lambda", lambda);
    w_.field("rows", rows ? std::string("interior") : std::string("all"));
    w_.field("residual", r.residual);
    w_.field("zero_mismatch", w_.nodes(r.exact_zero_mismatch));
    w_.field("failing_rows", w_.nodes(r.failing_rows));
    w_.field("pass", r.pass);
    return verdict(r.pass);
  }

  int decompose_verb() {
    const Source s = load_source(o_);
    header(s, true);
    if (o_.vector_path.empty()) throw UsageError("--vector is required");
    const Vector u = io::load_vector(o_.vector_path);
    if (u.size() != s.matrix.size()) throw DimensionError("vector size does not match the matrix");
    const Decomposition d = decompose(s.matrix, u, tol_);
    for (const auto& [j, c] : d.coefficients) w_.field("coefficient " + std::to_string(j), c);
    w_.field("reconstruction", w_.vector(d.reconstruction));
    w_.field("residual", d.residual);
    if (!o_.emit.empty()) io::save_vector(o_.emit, d.reconstruction);
    return verdict(d.residual <= tol_.eps);
  }

  int powers() {
    const Source s = load_source(o_);
    header(s, true);
    const NodeId i = node(o_.i, "--i", s.matrix), j = node(o_.j, "--j", s.matrix);
    const PowerTrace t = power_trace(s.matrix, i, j, o_.nmax, o_.normalized);
    w_.field("normalized", o_.normalized);
    w_.field("nmax", o_.nmax);
    std::ofstream emit;
    if (!o_.emit.empty()) {
      emit.open(o_.emit);
      if (!emit) throw IoError("cannot write " + o_.emit);
      emit << "n\tvalue\n";
    }
    for (std::size_t n = 1; n <= t.n_max(); ++n) {
      w_.field("n " + std::to_string(n), t.at(n));
      if (emit) emit << n << '\t' << io::format_scalar(t.at(n)) << '\n';
    }
    return 0;
  }

  int coupling() {
    const Source s = load_source(o_);
    header(s, true);
    const SpectralSummary sum = spectral_summary(s.matrix, tol_);
    if (sum.rho == zero) throw AcyclicError();
    w_.field("sigma", sum.sigma);
    w_.field("nmax", o_.nmax);
    const PowerTable table(normalize(s.matrix), o_.nmax);
    bool all = true;
    for (NodeId i = 0; i < s.matrix.size(); ++i) {
      if (o_.i && *o_.i != i) continue;
      for (NodeId j = 0; j < s.matrix.size(); ++j) {
        if (o_.j && *o_.j != j) continue;
        const CouplingReport r = detect_coupling(table.trace(i, j, true), sum.sigma, tol_, o_.floor);
        all = all && r.verdict != CouplingVerdict::inconclusive;
        std::ostringstream v;
        v << to_string(r.verdict) << " sigma_ij=" << r.sigma << " n0=" << r.n0;
        w_.field("pair " + std::to_string(i) + "," + std::to_string(j), v.str());
      }
    }
    return verdict(all);
  }

  int turnpike() {
    const Source s = load_source(o_);
    header(s, true);
    const NodeId i = node(o_.i, "--i", s.matrix), j = node(o_.j, "--j", s.matrix);
    std::vector<std::size_t> lengths = o_.lengths;
    if (lengths.empty())
      for (std::size_t n = 1; n <= o_.nmax; ++n) lengths.push_back(n);
    const auto mask = critical_mask(s.matrix, tol_);
    const TurnpikeProfile p = turnpike_profile(s.matrix, i, j, lengths, tol_);
    for (const auto& [n, count] : p.counts) {
      const OptimalPath path = optimal_path(s.matrix, i, j, n, mask, tol_);
      std::string walk;
      for (std::size_t k = 0; k < path.nodes.size(); ++k) walk += (k ? " " : "") + std::to_string(path.nodes[k]);
      w_.field("n " + std::to_string(n), std::to_string(count) + " [" + walk + "]");
    }
    w_.field("max_noncritical", p.max_count);
    return 0;
  }

  int martin() {
    if (o_.kernel.empty()) throw UsageError("martin needs --kernel");
    const Source s = load_source(o_);
    header(s, true);
    const Scalar lambda = o_.lambda.value_or(0.0);
    const MartinKernel mk = martin_kernel(*s.kernel, lambda, o_.basepoint, o_.window, tol_);
    w_.field("lambda", lambda);
    w_.field("basepoint", static_cast<std::size_t>(o_.basepoint));
    if (o_.i && o_.j) {
      if (*o_.i > o_.window || *o_.j > o_.window) throw UsageError("--i/--j outside the window");
      w_.field("K", mk.K(*o_.i, *o_.j));
      w_.field("pi", mk.pi[*o_.j]);
      return 0;
    }
    const std::size_t rows = std::min(o_.rows, o_.window + 1);
    if (o_.tail < 3 || o_.tail > o_.window + 1) throw UsageError("--tail must be between 3 and the window size");
    std::vector<NodeId> tail;
    for (NodeId j = o_.window + 1 - o_.tail; j <= o_.window; ++j) tail.push_back(j);
    w_.field("tail", w_.nodes(tail));
    const auto u = boundary_column(mk, rows, tail, tol_);
    w_.field("stabilized", u.has_value());
    if (u) {
      w_.field("column", w_.vector(*u));
      if (!o_.emit.empty()) io::save_vector(o_.emit, *u);
    }
    return verdict(u.has_value());
  }

  int probe_tight() {
    if (o_.kernel.empty()) throw UsageError("probe-tight needs --kernel");
    if (!o_.beta) throw UsageError("--beta is required");
    const Source s = load_source(o_);
    header(s, true);
    const NodeId i = node(o_.i, "--i", s.matrix), j = node(o_.j, "--j", s.matrix);
    const TightnessReport r = property_T_probe(*s.kernel, i, j, *o_.beta, o_.window, tol_);
    w_.field("beta", r.beta);
    w_.field("level_set", w_.nodes(r.level_set));
    w_.field("saturated", r.saturated);
    return verdict(!r.saturated);
  }

  int example() {
    if (o_.example.empty()) {
      for (const std::string& n : kernels::names()) out_ << n << '\n';
      return 0;
    }
    const Window w = truncate(parse_kernel(o_.example), o_.window);
    if (o_.emit.empty())
      io::write_matrix(out_, w.matrix);
    else
      io::save_matrix(o_.emit, w.matrix);
    return 0;
  }

  int selftest();

 private:
  void header(const Source& s, bool with_eps) {
    w_.field("source", s.label);
    w_.field("window", s.window ? std::to_string(s.window->N) : std::string("none"));
    if (with_eps) w_.field("eps", tol_.eps);
  }

  int verdict(bool pass) const { return o_.assert_pass && !pass ? 1 : 0; }

  const Options& o_;
  std::ostream& out_;
  report::Writer w_;
  Tolerance tol_;
};

int Cli::selftest() {
  int failed = 0;
  auto check = [&](const std::string& name, auto&& fn) {
    bool ok = false;
    try {
      ok = fn();
    } catch (const std::exception& e) {
      out_ << "error in " << name << ": " << e.what() << '\n';
    }
    out_ << (ok ? "ok   " : "FAIL ") << name << '\n';
    failed += !ok;
  };

  check("tight1 closure on window 50", [&] {
    const auto k = kernels::tight1();
    const auto c = kleene_star(truncate(k, 50).matrix, tol_);
    for (NodeId i = 0; i <= 50; ++i)
      for (NodeId j = 0; j <= 50; ++j)
        if (c.plus(i, j) != k.closed_forms.plus(i, j)) return false;
    return true;
  });
  check("tight2 closure on {0..50}", [&] {
    const auto k = kernels::tight2();
    const auto c = kleene_star(truncate(k, 51).matrix, tol_);
    for (NodeId i = 0; i <= 50; ++i)
      for (NodeId j = 0; j <= 50; ++j)
        if (!tol_.eq(c.plus(i, j), k.closed_forms.plus(i, j))) return false;
    return true;
  });
  check("birth-death rho on windows 2..40", [&] {
    const auto k = kernels::birth(-1, -3);
    for (std::size_t N = 2; N <= 40; ++N)
      if (max_cycle_mean(truncate(k, N).matrix) != -2.0) return false;
    return true;
  });
  check("birth-death eigenvectors on interior rows", [&] {
    const Window w = truncate(kernels::birth(-1, -3), 40);
    for (double lambda : {-2.0, -1.0, 0.0}) {
      Vector u(41);
      for (NodeId i = 0; i <= 40; ++i) u[i] = static_cast<double>(i) * (lambda + 1);
      if (!check_eigen(w.matrix, lambda, u, tol_, w.interior_rows()).pass) return false;
    }
    return true;
  });
  check("tight2 even powers from node 0", [&] {
    const auto t = power_trace(truncate(kernels::tight2(), 80).matrix, 0, 0, 70, false);
    for (std::size_t n = 1; n <= 35; ++n)
      if (!tol_.eq(t.at(2 * n), -kernels::harmonic(1, n))) return false;
    return true;
  });
  check("two-cycle coupling", [&] {
    const Matrix a = Matrix::from_rows({{zero, 0}, {0, zero}});
    const auto r = detect_coupling(power_trace(a, 0, 1, 40, true), 2, tol_);
    return r.verdict == CouplingVerdict::periodic && r.sigma == 2;
  });
  check("birth-death Martin kernel", [&] {
    const auto k = kernels::birth(-1, -3);
    const auto mk = martin_kernel(k, -1, 0, 60, tol_);
    for (NodeId i = 0; i <= 30; ++i)
      for (NodeId j = 0; j <= 30; ++j)
        if (!tol_.eq(mk.K(i, j), *k.closed_forms.martin(-1, i, j))) return false;
    return true;
  });
  check("tight2 boundary column", [&] {
    const auto k = kernels::tight2();
    std::vector<NodeId> tail;
    for (NodeId j = 40; j <= 60; ++j) tail.push_back(j);
    const auto u = boundary_column(martin_kernel(k, 0, 0, 60, tol_), 30, tail, tol_);
    const Window w = truncate(k, 29);
    return u && check_eigen(w.matrix, 0, *u, tol_, w.interior_rows()).pass;
  });
  check("random eigenvector decomposition (seed " + std::to_string(o_.seed) + ")", [&] {
    std::mt19937_64 rng(o_.seed);
    std::uniform_int_distribution<int> w(-9, 9), size(1, 8);
    std::bernoulli_distribution arc(0.5);
    for (int t = 0; t < 200; ++t) {
      const std::size_t n = size(rng);
      Matrix a(n);
      for (NodeId i = 0; i < n; ++i)
        for (NodeId j = 0; j < n; ++j)
          if (arc(rng) || j == (i + 1) % n) a.set(i, j, w(rng));
      const EigenBasis b = principal_eigenbasis(a, tol_);
      Vector u(n, zero);
      for (const Vector& col : b.columns) u = vec_oplus(u, vec_scale(w(rng), col));
      if (!check_eigen(a, b.lambda, u, tol_).pass || decompose(a, u, tol_).residual > tol_.eps) return false;
    }
    return true;
  });
  check("matrix text round trip", [&] {
    const Matrix a = truncate(kernels::tight1(), 12).matrix;
    const ExtMatrix s = kleene_star(a, tol_).star;
    std::stringstream ss;
    io::write_matrix(ss, s);
    return io::read_matrix<true>(ss) == s;
  });

  out_ << (failed ? std::to_string(failed) + " check(s) failed" : std::string("all checks passed")) << '\n';
  return failed ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"maxplus: max-plus spectral analysis of matrices and windowed kernels"};
  app.require_subcommand(1);
  Options o;

  auto* in = app.add_option("--input", o.input, "matrix file in tropical text format");
  auto* kn = app.add_option("--kernel", o.kernel, "catalog kernel, e.g. \"birth p=-1 q=-3\"");
  in->excludes(kn);
  app.add_option("--window", o.window, "window size N for kernels (nodes 0..N)")->check(CLI::PositiveNumber);
  app.add_option("--eps", o.eps, "comparison tolerance")->check(CLI::PositiveNumber);
  app.add_option("--nmax", o.nmax, "largest power / path length")->check(CLI::PositiveNumber);
  app.add_option("--seed", o.seed, "seed for randomized checks");
  app.add_option("--format", o.format, "report format")->check(CLI::IsMember({"text", "machine"}));
  app.add_option("--emit", o.emit, "write the main matrix, vector or table to this file");
  app.add_option("--i", o.i, "row node");
  app.add_option("--j", o.j, "column node");
  app.add_flag("--assert", o.assert_pass, "exit 1 when the verdict is a failure");

  auto* spectral = app.add_subcommand("spectral", "circuit mean, critical graph and cyclicities");
  auto* star = app.add_subcommand("star", "Kleene star (or plus) of the matrix");
  star->add_flag("--plus", o.plus, "emit A+ instead of A*");
  auto* eigen = app.add_subcommand("eigen", "eigenvector basis, or check a given vector");
  eigen->add_option("--vector", o.vector_path, "vector file to check");
  eigen->add_option("--lambda", o.lambda, "eigenvalue to check against (default rho)");
  eigen->add_flag("--all-rows", o.all_rows, "also check truncated window rows");
  eigen->add_option("--column", o.column, "basis column index for --emit");
  auto* decomp = app.add_subcommand("decompose", "write an eigenvector over the critical columns");
  decomp->add_option("--vector", o.vector_path, "eigenvector file")->required();
  auto* powers = app.add_subcommand("powers", "table of (A^n)_ij for n = 1..nmax");
  powers->add_flag("--normalized", o.normalized, "use A - rho");
  auto* coupling = app.add_subcommand("coupling", "ultimate period and coupling time of entries");
  coupling->add_option("--floor", o.floor, "values at or below count as zero");
  auto* turnpike = app.add_subcommand("turnpike", "non-critical visits of optimal paths");
  turnpike->add_option("--n", o.lengths, "path lengths (default 1..nmax)");
  auto* martin = app.add_subcommand("martin", "Martin kernel and boundary column of a kernel window");
  martin->add_option("--lambda", o.lambda, "spectral parameter");
  martin->add_option("--basepoint", o.basepoint, "basepoint node");
  martin->add_option("--rows", o.rows, "rows of the boundary column");
  martin->add_option("--tail", o.tail, "number of trailing columns used for the limit");
  auto* probe = app.add_subcommand("probe-tight", "super-level set of k -> A*_ik A*_kj");
  probe->add_option("--beta", o.beta, "level");
  auto* example = app.add_subcommand("example", "list catalog kernels or export a window");
  example->add_option("name", o.example, "kernel spec");
  auto* selftest = app.add_subcommand("selftest", "run the built-in checks");

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();
  app.fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  Cli cli(o, std::cout);
  try {
    if (*spectral) return cli.spectral();
    if (*star) return cli.star();
    if (*eigen) return cli.eigen();
    if (*decomp) return cli.decompose_verb();
    if (*powers) return cli.powers();
    if (*coupling) return cli.coupling();
    if (*turnpike) return cli.turnpike();
    if (*martin) return cli.martin();
    if (*probe) return cli.probe_tight();
    if (*example) return cli.example();
    if (*selftest) return cli.selftest();
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
