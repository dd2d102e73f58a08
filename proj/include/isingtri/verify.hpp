#pragma once

// Invariant suites run over every triangulation up to a size bound plus
// optional random samples. Used by `isingtri verify` and the acceptance run.

#include <algorithm>
#include <exception>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "isingtri/catalog.hpp"
#include "isingtri/core.hpp"
#include "isingtri/oracle.hpp"
#include "isingtri/transfer.hpp"

namespace isingtri {

enum class VerifyMode { Oracle, Bounds, Formulas, All };

inline constexpr int kMaxOracleVerify = 14;

inline std::optional<VerifyMode> parse_verify_mode(std::string_view s) {
  if (s == "oracle") return VerifyMode::Oracle;
  if (s == "bounds") return VerifyMode::Bounds;
  if (s == "formulas") return VerifyMode::Formulas;
  if (s == "all") return VerifyMode::All;
  return std::nullopt;
}

using Counter = std::function<BigCount(const Triangulation&)>;

struct VerifyOptions {
  int n_max = 10;
  VerifyMode mode = VerifyMode::All;
  int random_samples = 0;
  int random_n_max = 300;
  std::uint64_t seed = 1;
  int jobs = 1;
  Counter counter;  // defaults to degeneracy(); replaceable for fault injection
};

struct Counterexample {
  TriangulationId id;
  Triangulation triangulation;
  std::string check;
  std::string detail;
};

struct CheckTally {
  std::uint64_t cases = 0;
  std::uint64_t failures = 0;
};

struct VerifyReport {
  std::map<std::string, CheckTally> checks;  // sorted by name
  std::uint64_t triangulations = 0;
  std::optional<Counterexample> counterexample;  // minimal by (n, rank)

  bool passed() const { return !counterexample; }
};

namespace detail {

struct Finding {
  TriangulationId id;
  std::string check;
  std::string detail;
};

class Checker {
 public:
  Checker(const VerifyOptions& opt, bool oracle, bool bounds, bool formulas)
      : opt_(opt), oracle_(oracle), bounds_(bounds), formulas_(formulas) {}

  void run(const Triangulation& t, const TriangulationId& id) {
    ++triangulations;
    const int n = t.size();
    const BigCount g = opt_.counter ? opt_.counter(t) : degeneracy(t);
    const int m = interior_count(t);

    if (oracle_ && n <= kMaxOracleVerify) {
      const BigCount brute = oracle::brute_count_satisfying(t);
      expect(id, t, "oracle.brute_force", g == brute, "transfer " + g.get_str() + " vs brute " + brute.get_str());
      const BigCount sets = oracle::count_intersecting_sets(t);
      expect(id, t, "oracle.intersecting_sets", g == 2 * sets,
             "transfer " + g.get_str() + " vs 2 x " + sets.get_str() + " intersecting sets");
    }
    if (bounds_) {
      expect(id, t, "bounds.global", phi_power_leq(g, static_cast<unsigned>(n + 4)),
             "g = " + g.get_str() + " < phi^((n+4)/2)");
      expect(id, t, "bounds.interior", phi_power_leq(g, static_cast<unsigned>(2 * (n - m))),
             "g = " + g.get_str() + " < phi^(n-m), m = " + std::to_string(m));
    }
    if (formulas_) {
      if (m == 0) {
        const BigCount want = strip_count(n);
        expect(id, t, "formulas.strip", g == want, "g = " + g.get_str() + " vs 2F(n+1) = " + want.get_str());
      } else if (m == 1) {
        const auto [n1, n2, n3] = arm_sizes(t);
        const BigCount want = one_interior_count(n1, n2, n3);
        expect(id, t, "formulas.one_interior", g == want,
               "g = " + g.get_str() + " vs closed form " + want.get_str() + " for arms " + std::to_string(n1) + "," +
                   std::to_string(n2) + "," + std::to_string(n3));
      }
      // Counting from any bottom edge gives the same total.
      if (n <= 64) {
        const BigCount base = degeneracy(t);
        bool same = true;
        for (const auto& e : boundary_edges(t)) same = same && satisfying_vector(t, e).total() == base;
        expect(id, t, "formulas.bottom_independence", same, "total depends on the bottom edge");
      }
    }
  }

  std::map<std::string, CheckTally> tallies;
  std::vector<Finding> findings;
  std::map<std::string, Triangulation> witnesses;  // keyed by rendered id
  std::uint64_t triangulations = 0;

 private:
  static std::tuple<int, int, int> arm_sizes(const Triangulation& t) {
    for (const Face& f : faces(t))
      if (f.interior) return {f.b - f.a, f.c - f.b, t.size() - f.c + f.a};
    throw std::logic_error("arm_sizes: no interior face");
  }

  void expect(const TriangulationId& id, const Triangulation& t, const std::string& check, bool ok,
              std::string detail) {
    auto& tally = tallies[check];
    ++tally.cases;
    if (ok) return;
    ++tally.failures;
    findings.push_back({id, check, std::move(detail)});
    witnesses.emplace(key(id), t);
  }

 public:
  static std::string key(const TriangulationId& id) { return std::to_string(id.n) + ":" + id.rank.get_str(); }

 private:
  const VerifyOptions& opt_;
  bool oracle_, bounds_, formulas_;
};

}  // namespace detail

/// Runs the selected suites. Work is striped across `jobs` threads by rank;
/// the report is identical for every job count.
inline VerifyReport run_verification(const VerifyOptions& opt) {
  const bool all = opt.mode == VerifyMode::All;
  const bool oracle = all || opt.mode == VerifyMode::Oracle;
  const bool bounds = all || opt.mode == VerifyMode::Bounds;
  const bool formulas = all || opt.mode == VerifyMode::Formulas;
  if (opt.n_max < 3 || opt.n_max > kMaxEnumerate)
    throw std::invalid_argument("verify: --n-max must lie in [3, " + std::to_string(kMaxEnumerate) + "]");
  if (oracle && opt.n_max > kMaxOracleVerify)
    throw std::invalid_argument("verify: oracle mode needs --n-max <= " + std::to_string(kMaxOracleVerify));
  if (opt.random_samples < 0) throw std::invalid_argument("verify: negative sample count");
  if (opt.random_samples > 0 && opt.random_n_max < 3) throw std::invalid_argument("verify: random n bound below 3");
  const int jobs = std::max(1, opt.jobs);

  // Random instances are drawn up front from one stream so the set does not
  // depend on the job count.
  std::vector<std::pair<TriangulationId, Triangulation>> samples;
  {
    std::mt19937_64 rng(opt.seed);
    TriangulationSampler sampler(opt.seed ^ 0x9e3779b97f4a7c15ULL);
    std::uniform_int_distribution<int> size(3, std::max(3, opt.random_n_max));
    for (int i = 0; i < opt.random_samples; ++i) {
      Triangulation t = sampler.sample(size(rng));
      samples.push_back({{t.size(), rank_of(t)}, std::move(t)});
    }
  }

  std::vector<detail::Checker> checkers;
  checkers.reserve(static_cast<std::size_t>(jobs));
  for (int j = 0; j < jobs; ++j) checkers.emplace_back(opt, oracle, bounds, formulas);

  auto work = [&](int j) {
    auto& c = checkers[static_cast<std::size_t>(j)];
    for (int n = 3; n <= opt.n_max; ++n)
      for_each_triangulation(n, [&](const Triangulation& t, std::uint64_t rank) {
        if (rank % static_cast<std::uint64_t>(jobs) == static_cast<std::uint64_t>(j))
          c.run(t, {n, static_cast<unsigned long>(rank)});
      });
    for (std::size_t i = static_cast<std::size_t>(j); i < samples.size(); i += static_cast<std::size_t>(jobs))
      c.run(samples[i].second, samples[i].first);
  };

  if (jobs == 1) {
    work(0);
  } else {
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(jobs));
    {
      std::vector<std::jthread> threads;
      for (int j = 0; j < jobs; ++j)
        threads.emplace_back([&, j] {
          try {
            work(j);
          } catch (...) {
            errors[static_cast<std::size_t>(j)] = std::current_exception();
          }
        });
    }
    for (const auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  VerifyReport report;
  std::vector<detail::Finding> findings;
  std::map<std::string, Triangulation> witnesses;
  for (auto& c : checkers) {
    report.triangulations += c.triangulations;
    for (const auto& [name, tally] : c.tallies) {
      report.checks[name].cases += tally.cases;
      report.checks[name].failures += tally.failures;
    }
    findings.insert(findings.end(), c.findings.begin(), c.findings.end());
    witnesses.merge(c.witnesses);
  }
  if (!findings.empty()) {
    const auto& f = *std::min_element(findings.begin(), findings.end(), [](const auto& x, const auto& y) {
      return std::tie(x.id.n, x.id.rank, x.check) < std::tie(y.id.n, y.id.rank, y.check);
    });
    report.counterexample = Counterexample{f.id, witnesses.at(detail::Checker::key(f.id)), f.check, f.detail};
  }
  return report;
}

}  // namespace isingtri
