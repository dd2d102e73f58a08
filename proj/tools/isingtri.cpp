// isingtri: count satisfying states of triangulated polygons, run the
// verification suites, and export instances.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "isingtri/isingtri.hpp"

namespace {

using namespace isingtri;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string slurp(std::istream& in) { return {std::istreambuf_iterator<char>(in), {}}; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path);
  return slurp(in);
}

struct Input {
  std::string name;
  Triangulation tri;
};

Input load(const std::string& file) {
  if (file.empty() || file == "-") return {"<stdin>", parse_tri(slurp(std::cin))};
  try {
    return {file, parse_tri(read_file(file))};
  } catch (const ParseError& e) {
    throw UsageError(file + ": " + e.what());
  }
}

BoundaryEdge bottom_from(const std::vector<int>& b, const Triangulation& t) {
  if (b.empty()) return {0, 1};
  const BoundaryEdge e{b[0], b[1]};
  if (!is_boundary_edge(t, e))
    throw UsageError("--bottom " + std::to_string(b[0]) + " " + std::to_string(b[1]) + " is not a boundary edge");
  return e;
}

json vector_json(const SatisfyingVector& v) {
  json a = json::array();
  for (std::size_t i = 0; i < 4; ++i) a.push_back(v[i].get_str());
  return a;
}

std::string vector_tsv(const SatisfyingVector& v) {
  return v[0].get_str() + "\t" + v[1].get_str() + "\t" + v[2].get_str() + "\t" + v[3].get_str();
}

// ---------------------------------------------------------------------------

struct CountArgs {
  std::vector<std::string> files;
  bool use_stdin = false;
  bool as_json = false;
  std::vector<int> bottom;
};

int cmd_count(const CountArgs& a) {
  std::vector<std::string> sources = a.files;
  if (a.use_stdin || sources.empty()) sources.insert(sources.begin(), "-");
  json records = json::array();
  if (!a.as_json) std::cout << "# n\tm\tg\tv++\tv+-\tv-+\tv--\n";
  for (const auto& src : sources) {
    const Input in = load(src);
    const Triangulation& t = in.tri;
    const BoundaryEdge bottom = bottom_from(a.bottom, t);
    const SatisfyingVector v = t.is_degenerate() ? SatisfyingVector::ones() : satisfying_vector(t, bottom);
    const int m = interior_count(t);
    if (a.as_json) {
      records.push_back({{"source", in.name},
                         {"n", t.size()},
                         {"m", m},
                         {"g", v.total().get_str()},
                         {"bottom", {bottom.b1, bottom.b2}},
                         {"vector", vector_json(v)}});
    } else {
      std::cout << t.size() << '\t' << m << '\t' << v.total().get_str() << '\t' << vector_tsv(v) << '\n';
    }
  }
  if (a.as_json) std::cout << records.dump(2) << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct StripArgs {
  std::string ops;
  std::string file;
  bool emit_tri = false;
  bool as_json = false;
  std::vector<int> bottom;
};

std::string join(const std::vector<int>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + std::to_string(xs[i]);
  return s;
}

int cmd_strip(const StripArgs& a) {
  Triangulation t;
  BoundaryEdge bottom{0, 1};
  std::vector<Op> ops;
  if (!a.ops.empty()) {
    ops = parse_ops(a.ops);
    const RootedTriangulation r = evaluate_plan(ConstructionPlan::chain(ops));
    t = r.tri;
    bottom = r.bottom;
  } else {
    t = load(a.file).tri;
    bottom = bottom_from(a.bottom, t);
    const StripWord word = strip_decompose(t, bottom);
    ops = word.ops;
  }
  if (a.emit_tri) {
    std::cout << serialize_tri(t);
    return kExitOk;
  }
  const StripWord word = strip_word(ops);
  const TransferMatrix m = satisfying_matrix(ops);
  const SatisfyingVector v = m * SatisfyingVector::ones();
  const BigCount closed = strip_count(t.size());
  if (a.as_json) {
    json j{{"n", t.size()},
           {"ops", to_string(ops)},
           {"w", word.w},
           {"z", word.z},
           {"bottom", {bottom.b1, bottom.b2}},
           {"vector", vector_json(v)},
           {"g", v.total().get_str()},
           {"two_fib", closed.get_str()}};
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << "# n\tops\tw\tz\tg\t2F(n+1)\n";
    std::cout << t.size() << '\t' << to_string(ops) << '\t' << join(word.w) << '\t' << join(word.z) << '\t'
              << v.total().get_str() << '\t' << closed.get_str() << '\n';
  }
  return v.total() == closed ? kExitOk : kExitFailed;
}

// ---------------------------------------------------------------------------

std::string tri_block(const Triangulation& t, const std::string& header) { return "# " + header + "\n" + serialize_tri(t); }

int cmd_enumerate(int n, const std::string& format) {
  if (format == "tsv") std::cout << "# n\trank\tm\tg\n";
  bool first = true;
  for_each_triangulation(n, [&](const Triangulation& t, std::uint64_t rank) {
    if (format == "tri") {
      if (!first) std::cout << '\n';
      std::cout << tri_block(t, "rank " + std::to_string(rank));
    } else {
      std::cout << tsv_record(n, static_cast<unsigned long>(rank), interior_count(t), degeneracy(t)) << '\n';
    }
    first = false;
  });
  return kExitOk;
}

int cmd_random(int n, std::uint64_t seed, int count, const std::string& format) {
  if (count < 1) throw UsageError("--count must be positive");
  TriangulationSampler sampler(seed);
  if (format == "tsv") std::cout << "# n\trank\tm\tg\n";
  for (int i = 0; i < count; ++i) {
    const Triangulation t = sampler.sample(n);
    if (format == "tri") {
      if (i) std::cout << '\n';
      std::cout << (count > 1 ? tri_block(t, "sample " + std::to_string(i)) : serialize_tri(t));
    } else {
      std::cout << tsv_record(n, rank_of(t), interior_count(t), degeneracy(t)) << '\n';
    }
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
  int n_max = 10;
  std::string mode = "all";
  int jobs = 1;
  int random = 0;
  int random_n_max = 300;
  std::uint64_t seed = 1;
  int inject_fault = 0;
};

int cmd_verify(const VerifyArgs& a) {
  const auto mode = parse_verify_mode(a.mode);
  if (!mode) throw UsageError("unknown --mode " + a.mode);
  VerifyOptions opt;
  opt.n_max = a.n_max;
  opt.mode = *mode;
  opt.jobs = a.jobs;
  opt.random_samples = a.random;
  opt.random_n_max = a.random_n_max;
  opt.seed = a.seed;
  if (a.inject_fault > 0) {
    // Deliberately off-by-one on every triangulation of one size.
    const int bad = a.inject_fault;
    opt.counter = [bad](const Triangulation& t) {
      BigCount g = degeneracy(t);
      if (t.size() == bad) g += 1;
      return g;
    };
  }
  const VerifyReport report = run_verification(opt);
  std::cout << "# check\tcases\tfailures\n";
  for (const auto& [name, tally] : report.checks)
    std::cout << name << '\t' << tally.cases << '\t' << tally.failures << '\n';
  std::cout << "triangulations\t" << report.triangulations << '\n';
  if (report.passed()) {
    std::cout << "PASS\n";
    return kExitOk;
  }
  const auto& c = *report.counterexample;
  std::cout << "FAIL\n";
  std::cout << "# counterexample n=" << c.id.n << " rank=" << c.id.rank.get_str() << " check=" << c.check << '\n';
  std::cout << "# " << c.detail << '\n';
  std::cout << serialize_tri(c.triangulation);
  return kExitFailed;
}

// ---------------------------------------------------------------------------

std::string approx_phi_power(double exponent) {
  std::ostringstream os;
  os << std::setprecision(6) << std::pow(std::numbers::phi, exponent);
  return os.str();
}

int cmd_bounds(int n) {
  if (n < 3) throw UsageError("--n must be >= 3");
  const BigCount strip = strip_count(n);
  const auto global_halves = static_cast<unsigned>(n + 4);
  std::cout << "N\t" << n << '\n';
  std::cout << "2F(N+1)\t" << strip.get_str() << '\n';
  std::cout << "ceil(phi^((N+4)/2))\t" << ceil_phi_half_power(global_halves).get_str() << '\n';
  std::cout << "phi^((N+4)/2)\t~" << approx_phi_power((n + 4) / 2.0) << "\t(approximate)\n";
  std::cout << "2F(N+1) >= phi^((N+4)/2)\t" << (phi_power_leq(strip, global_halves) ? "true" : "false") << '\n';
  std::cout << "# m\tceil(phi^(N-m))\tphi^(N-m) >= phi^((N+4)/2)\t2F(N+1) >= phi^(N-m)\n";
  for (int m = 0; 2 * m <= n - 4; ++m) {
    const auto k_halves = static_cast<unsigned>(2 * (n - m));
    const bool dominates = k_halves >= global_halves;  // exponent comparison; exact
    std::cout << m << '\t' << ceil_phi_half_power(k_halves).get_str() << '\t' << (dominates ? "true" : "false")
              << '\t' << (phi_power_leq(strip, k_halves) ? "true" : "false") << '\n';
  }
  return kExitOk;
}

int cmd_export_dot(const std::string& file, bool dual) {
  const Triangulation t = load(file).tri;
  if (dual) {
    if (t.is_degenerate()) throw UsageError("the degenerate edge has no dual tree");
    std::cout << to_dot(dual_tree(t));
  } else {
    std::cout << to_dot(t);
  }
  return kExitOk;
}

int cmd_fib(int k) {
  if (k < 0) throw UsageError("--k must be >= 0");
  std::cout << "# k\tF(k)\tL(k)\n";
  std::cout << k << '\t' << fibonacci(static_cast<std::size_t>(k)).get_str() << '\t'
            << lucas(static_cast<std::size_t>(k)).get_str() << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact satisfying-state counts for the antiferromagnetic Ising model on triangulated polygons"};
  app.require_subcommand(1);

  CountArgs count_args;
  auto* count = app.add_subcommand("count", "Count satisfying states of .tri inputs");
  count->add_option("--file", count_args.files, "Input .tri file (repeatable)")->check(CLI::ExistingFile);
  count->add_flag("--stdin", count_args.use_stdin, "Read one .tri from stdin");
  count->add_flag("--json", count_args.as_json, "Emit JSON instead of TSV");
  count->add_option("--bottom", count_args.bottom, "Bottom boundary edge 'i j'")->expected(2);

  StripArgs strip_args;
  auto* strip = app.add_subcommand("strip", "Build a strip from a W/Z word, or decompose a strip into one");
  auto* strip_ops = strip->add_option("--ops", strip_args.ops, "Op word, e.g. WZZ");
  strip->add_option("--file", strip_args.file, "Strip .tri to decompose ('-' for stdin)")->excludes(strip_ops);
  strip->add_flag("--tri", strip_args.emit_tri, "Print the triangulation instead of the summary");
  strip->add_flag("--json", strip_args.as_json, "Emit JSON");
  strip->add_option("--bottom", strip_args.bottom, "Bottom boundary edge 'i j'")->expected(2);

  int enum_n = 0;
  std::string enum_format = "tsv";
  auto* enumerate = app.add_subcommand("enumerate", "List every triangulation of an n-gon in rank order");
  enumerate->add_option("--n", enum_n, "Polygon size (3..16)")->required();
  enumerate->add_option("--format", enum_format, "tsv or tri")->check(CLI::IsMember({"tsv", "tri"}));

  int rand_n = 0;
  std::uint64_t rand_seed = 0;
  int rand_count = 1;
  std::string rand_format = "tri";
  auto* random = app.add_subcommand("random", "Uniform random triangulation (seeded)");
  random->add_option("--n", rand_n, "Polygon size")->required()->check(CLI::Range(3, 1'000'000));
  random->add_option("--seed", rand_seed, "Seed")->required();
  random->add_option("--count", rand_count, "Number of samples");
  random->add_option("--format", rand_format, "tri or tsv")->check(CLI::IsMember({"tsv", "tri"}));

  VerifyArgs verify_args;
  auto* verify = app.add_subcommand("verify", "Run the invariant suites");
  verify->add_option("--n-max", verify_args.n_max, "Enumerate all n-gons up to this size");
  verify->add_option("--mode", verify_args.mode, "oracle, bounds, formulas or all")
      ->check(CLI::IsMember({"oracle", "bounds", "formulas", "all"}));
  verify->add_option("--jobs", verify_args.jobs, "Worker threads")->check(CLI::PositiveNumber);
  verify->add_option("--random", verify_args.random, "Additional uniform random samples");
  verify->add_option("--random-n-max", verify_args.random_n_max, "Largest random polygon size");
  verify->add_option("--seed", verify_args.seed, "Seed for random samples");
  verify->add_option("--inject-fault", verify_args.inject_fault, "Corrupt counts for this n (harness self-test)");

  int bounds_n = 0;
  auto* bounds = app.add_subcommand("bounds", "Exact lower bounds for polygon size N");
  bounds->add_option("--n", bounds_n, "Polygon size")->required();

  std::string dot_file;
  bool dot_dual = false;
  auto* dot = app.add_subcommand("export-dot", "Write a triangulation or its dual tree as DOT");
  dot->add_option("--file", dot_file, "Input .tri ('-' or omitted for stdin)");
  dot->add_flag("--dual", dot_dual, "Export the dual tree");

  int fib_k = 0;
  auto* fib = app.add_subcommand("fib", "Fibonacci and Lucas numbers");
  fib->add_option("--k", fib_k, "Index")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*count) return cmd_count(count_args);
    if (*strip) {
      if (strip_args.ops.empty() && strip_args.file.empty()) strip_args.file = "-";
      return cmd_strip(strip_args);
    }
    if (*enumerate) return cmd_enumerate(enum_n, enum_format);
    if (*random) return cmd_random(rand_n, rand_seed, rand_count, rand_format);
    if (*verify) return cmd_verify(verify_args);
    if (*bounds) return cmd_bounds(bounds_n);
    if (*dot) return cmd_export_dot(dot_file, dot_dual);
    if (*fib) return cmd_fib(fib_k);
  } catch (const ParseError& e) {
    std::cerr << "parse error: <stdin>: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InvalidTriangulation& e) {
    std::cerr << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
