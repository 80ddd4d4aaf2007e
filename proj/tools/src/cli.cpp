#include "wreath_cli/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <new>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#if __has_include(<CLI11.hpp>)
#include <CLI11.hpp>
#else
#include <CLI/CLI.hpp>
#endif
#include <fmt/format.h>

#include "wreath/eigen_multiset.hpp"
#include "wreath/graphs.hpp"
#include "wreath/matrix_io.hpp"
#include "wreath/spectral.hpp"
#include "wreath/sylvester.hpp"
#include "wreath/wreath_product.hpp"
#include "wreath_cli/bench.hpp"

namespace wreath::cli {

namespace {

struct Context {
  std::ostream& out;
  std::ostream& err;
  std::size_t threads = 0;
  Limits limits;
};

std::string fmt_complex(Complex z) {
  if (z.imag() == 0.0) return fmt::format("{}", z.real() + 0.0);
  return fmt::format("{}{}{}i", z.real() + 0.0, z.imag() < 0 ? "-" : "+", std::abs(z.imag()));
}

void emit(const Context& ctx, const std::string& path, const std::string& text) {
  if (path == "-") {
    ctx.out << text;
  } else {
    write_text_file(path, text);
  }
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

DenseMatrix load_dense(const std::string& path, const std::string& name,
                       const Limits& limits) {
  const nlohmann::json j = read_json_file(path);
  try {
    return as_dense(matrix_from_json(j, name), limits);
  } catch (const Error& e) {
    throw Error(e.kind(), path + ": " + e.what());
  }
}

std::size_t resolved_threads(std::size_t threads) {
  if (threads != 0) return threads;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

std::string spectrum_text(const EigenMultiset& s, const std::string& format) {
  return format == "json" ? dump(to_json(s)) : to_csv(s);
}

// ---------------------------------------------------------------- build

struct BuildArgs {
  std::string a, b, out = "-";
  bool dense = false;
  std::uint64_t seed = 1;
};

int cmd_build(const Context& ctx, const BuildArgs& args) {
  const DenseMatrix a = load_dense(args.a, "a", ctx.limits);
  const DenseMatrix b = load_dense(args.b, "b", ctx.limits);
  const SparseMatrix product = wreath_product(a, b, ctx.limits);
  const nlohmann::json j =
      args.dense ? to_json(to_dense(product, ctx.limits)) : to_json(product);
  emit(ctx, args.out, dump(j));
  ctx.err << fmt::format("A wr B: order {}, stored nonzeros {}, trace {}\n", product.rows(),
                         product.nnz(), fmt_complex(wreath_trace(a, b)));
  return kExitOk;
}

// ------------------------------------------------------------- spectrum

struct SpectrumArgs {
  std::string a, b, out = "-", method = "reduced", format = "csv";
  double tol = kDefaultClusterTol;
  std::uint64_t seed = 1;
};

int cmd_spectrum(const Context& ctx, const SpectrumArgs& args) {
  const DenseMatrix a = load_dense(args.a, "a", ctx.limits);
  const DenseMatrix b = load_dense(args.b, "b", ctx.limits);
  EigenMultiset s;
  std::string how;
  if (args.method == "reduced") {
    const auto spec = is_circulant(b);
    if (!spec) {
      const auto [r, c] = circulant_violation(b).value_or(std::pair<std::size_t, std::size_t>{0, 0});
      throw Error(ErrorKind::kInvalidArgument,
                  fmt::format("B is not circulant: entry ({}, {}) breaks the pattern "
                              "b_hk = b_((k-h) mod m); only --method dense applies to this input",
                              r + 1, c + 1));
    }
    SpectrumOptions options;
    options.tol = args.tol;
    options.threads = ctx.threads;
    options.limits = ctx.limits;
    s = spectrum_reduced(a, *spec, options);
    how = fmt::format("reduced, {} blocks of order {}", checked_pow(b.rows(), a.rows()),
                      a.rows());
  } else {
    const std::uint64_t order = wreath_order(a.rows(), b.rows());
    if (order > ctx.limits.dense_eigen_order) {
      throw Error(ErrorKind::kDimensionOverflow,
                  fmt::format("order {} exceeds the dense eigensolver cap {}; use --method "
                              "reduced for circulant B",
                              order, ctx.limits.dense_eigen_order));
    }
    const DenseMatrix full = to_dense(wreath_product(a, b, ctx.limits), ctx.limits);
    s = dense_spectrum(full, args.tol, ctx.limits);
    how = fmt::format("dense, order {}", order);
  }
  emit(ctx, args.out, spectrum_text(s, args.format));
  ctx.err << fmt::format("spectrum ({}): {} eigenvalues, {} distinct at tol {}\n", how,
                         s.total(), s.distinct(), args.tol);
  return kExitOk;
}

// --------------------------------------------------------- graph-wreath

std::optional<std::size_t> parse_size(const std::string& text) {
  std::size_t v = 0;
  const auto* end = text.data() + text.size();
  const auto [p, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || p != end) return std::nullopt;
  return v;
}

Graph graph_from_spec(const std::string& spec) {
  if (spec == "segment") return Graph::segment();
  for (const std::string kind : {"complete", "cycle"}) {
    if (spec.rfind(kind + ":", 0) == 0) {
      const auto n = parse_size(spec.substr(kind.size() + 1));
      if (!n) throw Error(ErrorKind::kInvalidArgument, "bad vertex count in " + spec);
      return kind == "complete" ? Graph::complete(*n) : Graph::cycle(*n);
    }
  }
  try {
    return graph_from_json(read_json_file(spec));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kParse && std::string(e.what()).find(spec) == std::string::npos) {
      throw Error(e.kind(), spec + ": " + e.what());
    }
    throw;
  }
}

struct GraphWreathArgs {
  std::string g1, g2, out = "-";
  bool dot = false;
  std::uint64_t seed = 1;
};

int cmd_graph_wreath(const Context& ctx, const GraphWreathArgs& args) {
  const Graph g = graph_wreath(graph_from_spec(args.g1), graph_from_spec(args.g2), ctx.limits);
  emit(ctx, args.out, args.dot ? to_dot(g, "wreath") : dump(to_json(g)));
  const auto d = g.regular_degree();
  ctx.err << fmt::format("G1 wr G2: {} vertices, {} edges, {}\n", g.order(), g.edge_count(),
                         d ? fmt::format("{}-regular", *d) : std::string("not regular"));
  return kExitOk;
}

// ---------------------------------------------------------- lamplighter

struct LamplighterArgs {
  std::string graph, out = "-", format = "csv", transition;
  std::size_t n = 0;
  std::size_t colors = 2;
  bool closed_form = false;
  bool verify = false;
  double tol = kDefaultClusterTol;
  std::uint64_t seed = 1;
};

nlohmann::json parts_json(const std::vector<LampSpectrumPart>& parts) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& p : parts) {
    nlohmann::json values = nlohmann::json::array();
    for (const auto& e : p.values) {
      values.push_back({{"re", e.value.real()}, {"im", e.value.imag()},
                        {"multiplicity", e.multiplicity}});
    }
    arr.push_back({{"k", p.k}, {"weight", p.weight}, {"values", values}});
  }
  return arr;
}

int cmd_lamplighter(const Context& ctx, const LamplighterArgs& args) {
  if (args.colors < 2) throw Error(ErrorKind::kInvalidArgument, "--colors must be at least 2");
  const bool complete = args.graph == "complete";
  Graph g;
  if (complete || args.graph == "cycle") {
    if (args.n == 0) throw Error(ErrorKind::kInvalidArgument, "--n is required for --graph " + args.graph);
    g = complete ? Graph::complete(args.n) : Graph::cycle(args.n);
  } else {
    g = graph_from_spec(args.graph);
  }
  const std::size_t d = g.require_regular();
  const std::size_t c = args.colors;

  std::optional<std::vector<LampSpectrumPart>> parts;
  EigenMultiset s;
  std::string route;
  if (args.closed_form) {
    if (!complete || c != 2) {
      throw Error(ErrorKind::kUnsupported,
                  "--closed-form applies only to --graph complete with --colors 2");
    }
    parts = complete_lamplighter_spectrum(g.order());
    s = lamp_parts_union(*parts, args.tol);
    route = "closed form";
  } else if (c == 2) {
    s = lamp_spectrum_by_reduction(g, args.tol, ctx.limits);
    route = fmt::format("reduction over {} lamp blocks", checked_pow(2, g.order()));
  } else {
    // Colour graph K_c: the normalized walk on it is circulant.
    const double scale = 1.0 / static_cast<double>(d + c - 1);
    const DenseMatrix a =
        wreath::scale(normalized_adjacency(g), static_cast<double>(d) * scale);
    CirculantSpec spec;
    spec.coefficients.assign(c, Complex(scale));
    spec.coefficients[0] = 0.0;
    SpectrumOptions options;
    options.tol = args.tol;
    options.threads = ctx.threads;
    options.limits = ctx.limits;
    s = spectrum_reduced(a, spec, options);
    route = fmt::format("circulant reduction over {} blocks", checked_pow(c, g.order()));
  }

  const SparseMatrix p = lamplighter_transition(g, Graph::complete(c), ctx.limits);
  std::vector<double> row_sum(p.rows(), 0.0);
  for (const auto& t : p.triples()) row_sum[t.row] += t.value.real();
  double deviation = 0.0;
  for (double r : row_sum) deviation = std::max(deviation, std::abs(r - 1.0));
  if (deviation > 1e-12) {
    throw Error(ErrorKind::kNonConvergence,
                fmt::format("transition rows deviate from 1 by {}", deviation));
  }
  if (!args.transition.empty()) emit(ctx, args.transition, dump(to_json(p)));

  std::string verified;
  if (args.verify) {
    if (p.rows() > ctx.limits.dense_eigen_order) {
      throw Error(ErrorKind::kDimensionOverflow,
                  fmt::format("--verify: order {} exceeds the dense eigensolver cap {}",
                              p.rows(), ctx.limits.dense_eigen_order));
    }
    const EigenMultiset oracle = dense_spectrum(to_dense(p, ctx.limits), args.tol, ctx.limits);
    if (!eigen_multiset_equal(s, oracle, args.tol)) {
      throw Error(ErrorKind::kNonConvergence,
                  "--verify: spectrum disagrees with the dense eigensolver");
    }
    verified = ", matches dense eigensolver";
  }

  std::string text;
  if (args.format == "json") {
    nlohmann::json j = to_json(s);
    if (parts) j["parts"] = parts_json(*parts);
    text = dump(j);
  } else {
    text = to_csv(s);
  }
  emit(ctx, args.out, text);

  ctx.err << fmt::format(
      "lamplighter on {} vertices, {}-regular, {} colours: order {}, {}; rows sum to 1 "
      "(max deviation {:.1e}){}\n",
      g.order(), d, c, p.rows(), route, deviation, verified);
  if (parts) {
    for (const auto& part : *parts) {
      std::string vals;
      for (const auto& e : part.values) {
        vals += fmt::format("{}{}{}", vals.empty() ? "" : ", ", fmt_complex(e.value),
                            e.multiplicity > 1 ? fmt::format(" (x{})", e.multiplicity) : "");
      }
      ctx.err << fmt::format("  k={} weight {}: {}\n", part.k, part.weight, vals);
    }
  }
  ctx.err << fmt::format("{} eigenvalues, {} distinct\n", s.total(), s.distinct());
  return kExitOk;
}

// ------------------------------------------------------------ sylvester

struct SylvesterArgs {
  std::string action, in, out = "-";
  double tol = 1e-9;
  std::uint64_t seed = 1;
};

int cmd_sylvester(const Context& ctx, const SylvesterArgs& args) {
  SolveOptions options;
  options.limits = ctx.limits;
  const SystemFile file = system_from_json(read_json_file(args.in), ctx.limits);

  if (args.action == "check") {
    nlohmann::json j;
    if (file.wreath) {
      const UniquenessReport report =
          wreath_unique_solvable(file.wreath->a, file.wreath->b, args.tol, ctx.limits);
      j = to_json(report);
    } else {
      j["route"] = "lu";
      try {
        const SolveResult r = solve(file.system, options);
        j["unique"] = true;
        j["min_pivot"] = r.min_pivot;
        j["max_pivot"] = r.max_pivot;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::kSingularCoefficient) throw;
        j["unique"] = false;
        j["reason"] = e.what();
      }
    }
    emit(ctx, args.out, dump(j));
    std::string detail;
    if (j.contains("witness") && !j["witness"].is_null()) {
      detail = " (" + j["witness"].dump() + ")";
    } else if (j.contains("zero_eigenvalue") && !j["zero_eigenvalue"].is_null()) {
      detail = " (zero eigenvalue " + j["zero_eigenvalue"].dump() + ")";
    }
    ctx.err << fmt::format("unique solvability: {} via {}{}\n",
                           j["unique"].get<bool>() ? "yes" : "no",
                           j["route"].get<std::string>(), detail);
    return kExitOk;
  }

  const SolveResult r = file.wreath ? solve_wreath(*file.wreath, options)
                                    : solve(file.system, options);
  const double rel = r.residual / std::max(1.0, frobenius_norm(file.system.rhs));
  nlohmann::json j;
  j["x"] = to_json(r.x);
  j["residual"] = r.residual;
  j["relative_residual"] = rel;
  j["min_pivot"] = r.min_pivot;
  j["max_pivot"] = r.max_pivot;
  emit(ctx, args.out, dump(j));
  ctx.err << fmt::format("solved {}x{} unknown, {} coefficient pairs, relative residual {:.3e}\n",
                         r.x.rows(), r.x.cols(), file.system.pairs.size(), rel);
  if (rel > options.residual_tol) {
    throw Error(ErrorKind::kNonConvergence,
                fmt::format("relative residual {:.3e} exceeds {:.1e}", rel, options.residual_tol));
  }
  return kExitOk;
}

// ---------------------------------------------------------------- bench

struct BenchArgs {
  BenchConfig config;
  std::string out = "-";
};

int cmd_bench(const Context& ctx, BenchArgs args) {
  args.config.threads = resolved_threads(ctx.threads);
  const BenchReport report = run_bench(args.config);
  emit(ctx, args.out, dump(to_json(report)));
  if (report.verdict == "unequal") {
    ctx.err << "bench: reduced and dense spectra disagree; no timings reported\n";
    return kExitNumerical;
  }
  if (report.dense_ms) {
    ctx.err << fmt::format(
        "bench n={} m={} order {}: reduced {:.3f} ms, dense {:.3f} ms, speedup {:.1f}x, "
        "spectra equal\n",
        args.config.n, args.config.m, report.order, report.reduced_ms, *report.dense_ms,
        *report.speedup);
  } else {
    ctx.err << fmt::format(
        "bench n={} m={} order {}: dense refused above cap {}; reduced {:.3f} ms\n",
        args.config.n, args.config.m, report.order, args.config.dense_cap, report.reduced_ms);
  }
  return kExitOk;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kDimensionOverflow:
    case ErrorKind::kEnumerationOverflow:
      return kExitCap;
    case ErrorKind::kNonConvergence:
    case ErrorKind::kSingularCoefficient:
      return kExitNumerical;
    default:
      return kExitUsage;
  }
}

void add_seed(CLI::App* sub, std::uint64_t& seed) {
  sub->add_option("--seed", seed, "Seed for randomized fixtures")->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Wreath products of matrices: construction, spectra, lamplighter walks and "
               "Sylvester systems.",
               "wreath"};
  app.require_subcommand(1);
  Context ctx{out, err, 0, Limits{}};
  app.add_option("--threads", ctx.threads, "Worker cap; 0 uses the available parallelism")
      ->capture_default_str();

  BuildArgs build;
  auto* b = app.add_subcommand("build", "Write A wr B as sparse (default) or dense JSON");
  b->add_option("--a", build.a, "Matrix A (JSON)")->required();
  b->add_option("--b", build.b, "Matrix B (JSON)")->required();
  b->add_option("--out", build.out, "Output file, - for stdout")->capture_default_str();
  b->add_flag("--dense", build.dense, "Emit the dense layout");
  add_seed(b, build.seed);

  SpectrumArgs spectrum;
  auto* s = app.add_subcommand("spectrum", "Eigenvalue multiset of A wr B");
  s->add_option("--a", spectrum.a, "Matrix A (JSON)")->required();
  s->add_option("--b", spectrum.b, "Matrix B (JSON)")->required();
  s->add_option("--method", spectrum.method, "reduced (circulant B) or dense")
      ->check(CLI::IsMember({"reduced", "dense"}))
      ->capture_default_str();
  s->add_option("--tol", spectrum.tol, "Clustering tolerance")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  s->add_option("--format", spectrum.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  s->add_option("--out", spectrum.out, "Output file, - for stdout")->capture_default_str();
  add_seed(s, spectrum.seed);

  GraphWreathArgs gw;
  auto* g = app.add_subcommand("graph-wreath", "Graph wreath product G1 wr G2");
  g->add_option("--g1", gw.g1, "complete:N, cycle:N, segment or a graph JSON file")->required();
  g->add_option("--g2", gw.g2, "complete:N, cycle:N, segment or a graph JSON file")->required();
  g->add_option("--out", gw.out, "Output file, - for stdout")->capture_default_str();
  g->add_flag("--dot", gw.dot, "Emit DOT instead of graph JSON");
  add_seed(g, gw.seed);

  LamplighterArgs lamp;
  auto* l = app.add_subcommand("lamplighter", "Spectrum of the lamplighter random walk");
  l->add_option("--graph", lamp.graph, "complete, cycle or a graph JSON file")->required();
  l->add_option("--n", lamp.n, "Vertex count for complete and cycle");
  l->add_option("--colors", lamp.colors, "Lamp colours (colour graph K_c)")
      ->capture_default_str();
  l->add_flag("--closed-form", lamp.closed_form, "Closed form (complete graph, 2 colours)");
  l->add_flag("--verify", lamp.verify, "Cross-check against the dense eigensolver");
  l->add_option("--transition", lamp.transition, "Also write the transition matrix (JSON)");
  l->add_option("--tol", lamp.tol, "Clustering tolerance")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  l->add_option("--format", lamp.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  l->add_option("--out", lamp.out, "Output file, - for stdout")->capture_default_str();
  add_seed(l, lamp.seed);

  SylvesterArgs syl;
  auto* y = app.add_subcommand("sylvester", "Solve or certify a generalized Sylvester system");
  y->add_option("action", syl.action, "solve or check")
      ->required()
      ->check(CLI::IsMember({"solve", "check"}));
  y->add_option("--in", syl.in, "System JSON")->required();
  y->add_option("--out", syl.out, "Output file, - for stdout")->capture_default_str();
  y->add_option("--tol", syl.tol, "Zero tolerance for the uniqueness check")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_seed(y, syl.seed);

  BenchArgs bench;
  auto* k = app.add_subcommand("bench", "Time reduced vs dense spectra on a random instance");
  k->add_option("--n", bench.config.n, "Order of A")->required();
  k->add_option("--m", bench.config.m, "Order of the circulant B")->required();
  k->add_option("--repeat", bench.config.repeat, "Timed repeats (at least 5)")
      ->check(CLI::Range(std::size_t{5}, std::size_t{100000}))
      ->capture_default_str();
  k->add_option("--tol", bench.config.tol, "Multiset equality tolerance")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  k->add_option("--dense-cap", bench.config.dense_cap, "Largest order timed densely")
      ->capture_default_str();
  k->add_option("--out", bench.out, "Output file, - for stdout")->capture_default_str();
  add_seed(k, bench.config.seed);

  std::vector<std::string> reversed(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
  std::reverse(reversed.begin(), reversed.end());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*b) return cmd_build(ctx, build);
    if (*s) return cmd_spectrum(ctx, spectrum);
    if (*g) return cmd_graph_wreath(ctx, gw);
    if (*l) return cmd_lamplighter(ctx, lamp);
    if (*y) return cmd_sylvester(ctx, syl);
    if (*k) return cmd_bench(ctx, bench);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::bad_alloc&) {
    err << "error: out of memory\n";
    return kExitCap;
  }
  return kExitUsage;
}

}  // namespace wreath::cli
