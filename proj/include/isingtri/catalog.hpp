#pragma once

// Instance supply: exhaustive enumeration with stable ranks, exact uniform
// sampling, the .tri text format and DOT export.

#include <cmath>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <mutex>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "isingtri/construct.hpp"
#include "isingtri/core.hpp"

namespace isingtri {

inline constexpr int kMaxEnumerate = 16;

// ---------------------------------------------------------------------------
// Catalan numbers

/// Grow-only table of Catalan numbers, shared and thread safe.
class CatalanTable {
 public:
  CatalanTable() : values_{1} {}

  BigCount get(std::size_t k) {
    std::lock_guard lock(mutex_);
    while (values_.size() <= k) {
      const auto m = static_cast<unsigned long>(values_.size() - 1);
      BigCount next = values_.back() * (2 * (2 * m + 1));
      mpz_divexact_ui(next.get_mpz_t(), next.get_mpz_t(), m + 2);
      values_.push_back(std::move(next));
    }
    return values_[k];
  }

 private:
  std::mutex mutex_;
  std::vector<BigCount> values_;
};

inline BigCount catalan(std::size_t k) {
  static CatalanTable table;
  return table.get(k);
}

// ---------------------------------------------------------------------------
// Enumeration order. The face on (lo, hi) has apex lo + 1 + t where t is the
// number of triangles left of the apex; apexes ascend, and for a fixed apex
// the left part varies slowest.

struct TriangulationId {
  int n = 3;
  BigCount rank;

  friend bool operator==(const TriangulationId&, const TriangulationId&) = default;
  friend bool operator<(const TriangulationId& x, const TriangulationId& y) {
    return x.n != y.n ? x.n < y.n : x.rank < y.rank;
  }
};

namespace detail {

inline void require_enumerable(int n) {
  if (n < 3 || n > kMaxEnumerate)
    throw std::invalid_argument("enumerate_triangulations: n must lie in [3, " + std::to_string(kMaxEnumerate) +
                                "], got " + std::to_string(n));
}

struct Enumerator {
  int n;
  const std::function<void(const Triangulation&, std::uint64_t)>& visit;
  std::vector<Edge> diagonals;
  std::vector<std::pair<int, int>> pending;
  std::uint64_t rank = 0;

  void run() {
    if (pending.empty()) {
      visit(Triangulation(n, diagonals), rank++);
      return;
    }
    const auto [lo, hi] = pending.back();
    pending.pop_back();
    for (int k = lo + 1; k < hi; ++k) {
      const std::size_t mark_d = diagonals.size();
      const std::size_t mark_p = pending.size();
      if (k > lo + 1) diagonals.push_back({lo, k});
      if (hi > k + 1) diagonals.push_back({k, hi});
      if (hi - k >= 2) pending.emplace_back(k, hi);
      if (k - lo >= 2) pending.emplace_back(lo, k);  // popped first
      run();
      diagonals.resize(mark_d);
      pending.resize(mark_p);
    }
    pending.emplace_back(lo, hi);
  }
};

}  // namespace detail

/// Calls visit(T, rank) for every triangulation of the n-gon, in rank order.
inline void for_each_triangulation(int n, const std::function<void(const Triangulation&, std::uint64_t)>& visit) {
  detail::require_enumerable(n);
  detail::Enumerator e{n, visit, {}, {}, 0};
  e.diagonals.reserve(static_cast<std::size_t>(n - 3));
  e.pending.emplace_back(0, n - 1);
  e.run();
}

inline std::vector<Triangulation> enumerate_triangulations(int n) {
  std::vector<Triangulation> out;
  for_each_triangulation(n, [&](const Triangulation& t, std::uint64_t) { out.push_back(t); });
  return out;
}

namespace detail {

// Number of triangulations of the sub-polygon (lo, hi) before apex offset t.
// Summed from whichever end is nearer.
inline BigCount apex_offset(int triangles, int t) {
  auto block = [&](int s) -> BigCount {
    return catalan(static_cast<std::size_t>(s)) * catalan(static_cast<std::size_t>(triangles - 1 - s));
  };
  BigCount sum = 0;
  if (2 * t <= triangles) {
    for (int s = 0; s < t; ++s) sum += block(s);
    return sum;
  }
  for (int s = t; s < triangles; ++s) sum += block(s);
  return catalan(static_cast<std::size_t>(triangles)) - sum;
}

}  // namespace detail

/// Position of t in the enumeration order (for any n >= 3, not just n <= 16).
inline BigCount rank_of(const Triangulation& t) {
  require_valid(t);
  const int n = t.size();
  if (n < 3) throw std::invalid_argument("rank_of: n must be >= 3");

  // apex[lo] maps hi -> apex for the face standing on (lo, hi) below it.
  const auto nbrs = detail::neighbor_lists(t);
  auto apex_of = [&](int lo, int hi) {
    // The apex is the unique common neighbour strictly between lo and hi; it is
    // the largest neighbour of lo below hi.
    const auto& ns = nbrs[static_cast<std::size_t>(lo)];
    auto it = std::lower_bound(ns.begin(), ns.end(), hi);
    return *std::prev(it);
  };

  std::function<BigCount(int, int)> rank = [&](int lo, int hi) -> BigCount {
    const int triangles = hi - lo - 1;
    if (triangles <= 1) return 0;
    const int k = apex_of(lo, hi);
    const int t_left = k - lo - 1;
    const int t_right = triangles - 1 - t_left;
    return detail::apex_offset(triangles, t_left) + rank(lo, k) * catalan(static_cast<std::size_t>(t_right)) +
           rank(k, hi);
  };
  return rank(0, n - 1);
}

/// Inverse of rank_of.
inline Triangulation unrank_triangulation(int n, const BigCount& rank) {
  if (n < 3) throw std::invalid_argument("unrank_triangulation: n must be >= 3");
  if (rank < 0 || rank >= catalan(static_cast<std::size_t>(n - 2)))
    throw std::out_of_range("unrank_triangulation: rank out of range for n = " + std::to_string(n));
  std::vector<Edge> diagonals;
  std::vector<std::pair<std::pair<int, int>, BigCount>> stack{{{0, n - 1}, rank}};
  while (!stack.empty()) {
    auto [range, r] = std::move(stack.back());
    stack.pop_back();
    const auto [lo, hi] = range;
    const int triangles = hi - lo - 1;
    if (triangles <= 1) continue;
    int t = 0;
    for (;; ++t) {
      const BigCount block =
          catalan(static_cast<std::size_t>(t)) * catalan(static_cast<std::size_t>(triangles - 1 - t));
      if (r < block) break;
      r -= block;
    }
    const int k = lo + 1 + t;
    const BigCount right_size = catalan(static_cast<std::size_t>(triangles - 1 - t));
    BigCount left_rank, right_rank;
    mpz_fdiv_qr(left_rank.get_mpz_t(), right_rank.get_mpz_t(), r.get_mpz_t(), right_size.get_mpz_t());
    if (k > lo + 1) diagonals.push_back({lo, k});
    if (hi > k + 1) diagonals.push_back({k, hi});
    stack.push_back({{lo, k}, left_rank});
    stack.push_back({{k, hi}, right_rank});
  }
  return Triangulation(n, std::move(diagonals));
}

// ---------------------------------------------------------------------------
// Uniform sampling

/// Exactly uniform sampler over the triangulations of an n-gon. The apex of
/// each face is drawn with weight Catalan(left) * Catalan(right) by a fresh
/// uniform big-integer draw; the weights are scanned from both ends so a level
/// costs O(min(left, right)) big-integer steps.
class TriangulationSampler {
 public:
  explicit TriangulationSampler(std::uint64_t seed) : rng_(seed) {}

  Triangulation sample(int n) {
    if (n < 3) throw std::invalid_argument("random_triangulation: n must be >= 3");
    catalan(static_cast<std::size_t>(n - 2));  // warm the table once
    std::vector<Edge> diagonals;
    diagonals.reserve(static_cast<std::size_t>(n - 3));
    std::vector<std::pair<int, int>> stack{{0, n - 1}};
    while (!stack.empty()) {
      const auto [lo, hi] = stack.back();
      stack.pop_back();
      const int triangles = hi - lo - 1;
      if (triangles <= 0) continue;
      const int k = lo + 1 + split(triangles);
      if (k > lo + 1) diagonals.push_back({lo, k});
      if (hi > k + 1) diagonals.push_back({k, hi});
      stack.emplace_back(k, hi);
      stack.emplace_back(lo, k);
    }
    return Triangulation(n, std::move(diagonals));
  }

  /// Uniform integer in [0, bound), bound > 0. Rejection on the bit length, so
  /// the stream consumed is a function of the seed and bound only.
  BigCount uniform_below(const BigCount& bound) {
    const std::size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2);
    const std::size_t words = (bits + 63) / 64;
    std::vector<std::uint64_t> buf(words);
    BigCount r;
    for (;;) {
      for (auto& w : buf) w = rng_();
      const std::size_t top = bits % 64;
      if (top != 0) buf.back() &= (std::uint64_t{1} << top) - 1;
      // Least significant word first.
      mpz_import(r.get_mpz_t(), words, -1, sizeof(std::uint64_t), 0, 0, buf.data());
      if (r < bound) return r;
    }
  }

 private:
  // Returns t in [0, triangles) with P(t) = C(t) C(triangles-1-t) / C(triangles).
  int split(int triangles) {
    if (triangles == 1) return 0;
    const int L = triangles;
    BigCount r = uniform_below(catalan(static_cast<std::size_t>(L)));
    BigCount block = catalan(static_cast<std::size_t>(L - 1));  // P(0) = C(0) C(L-1)
    BigCount high = catalan(static_cast<std::size_t>(L));       // upper end of unscanned range
    BigCount low = 0;
    for (int t = 0;; ++t) {
      const int mirror = L - 1 - t;
      if (r < low + block) return t;
      low += block;
      if (mirror == t) break;  // unreachable: the middle block was the last one
      high -= block;
      if (r >= high) return mirror;
      if (mirror == t + 1) break;
      // P(t+1) = P(t) (2t+1)(b+1) / ((t+2)(2b-1)) with b = L-1-t.
      const auto tt = static_cast<unsigned long>(t);
      const auto b = static_cast<unsigned long>(mirror);
      block *= (2 * tt + 1) * (b + 1);
      mpz_divexact_ui(block.get_mpz_t(), block.get_mpz_t(), (tt + 2) * (2 * b - 1));
    }
    throw std::logic_error("TriangulationSampler: draw fell outside every block");
  }

  std::mt19937_64 rng_;
};

inline Triangulation random_triangulation(int n, std::uint64_t seed) { return TriangulationSampler(seed).sample(n); }

// ---------------------------------------------------------------------------
// .tri format

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

namespace detail {

inline std::string_view strip_comment(std::string_view s) {
  if (auto p = s.find('#'); p != std::string_view::npos) s = s.substr(0, p);
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<long long> read_ints(std::string_view s, int line) {
  std::vector<long long> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    if (i == s.size()) break;
    std::size_t j = i;
    if (s[j] == '-' || s[j] == '+') ++j;
    const std::size_t digits = j;
    while (j < s.size() && s[j] >= '0' && s[j] <= '9') ++j;
    if (j == digits || (j < s.size() && s[j] != ' ' && s[j] != '\t'))
      throw ParseError(line, "expected integers, got '" + std::string(s) + "'");
    if (j - digits > 12) throw ParseError(line, "integer too large");
    out.push_back(std::stoll(std::string(s.substr(i, j - i))));
    i = j;
  }
  return out;
}

}  // namespace detail

/// Parses the .tri format. Structural problems raise ParseError; a
/// well-formed file describing an invalid triangulation raises
/// InvalidTriangulation with every violation.
inline Triangulation parse_tri(std::string_view text) {
  int line_no = 0;
  int n = -1;
  int n_line = 0;
  std::vector<Edge> diagonals;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const auto line = detail::strip_comment(text.substr(pos, eol - pos));
    ++line_no;
    pos = eol + 1;
    if (line.empty()) continue;
    const auto ints = detail::read_ints(line, line_no);
    if (n < 0) {
      if (ints.size() != 1) throw ParseError(line_no, "first line must hold the vertex count");
      if (ints[0] < 2 || ints[0] > 1'000'000) throw ParseError(line_no, "vertex count out of range");
      n = static_cast<int>(ints[0]);
      n_line = line_no;
      continue;
    }
    if (ints.size() != 2) throw ParseError(line_no, "expected a diagonal 'i j'");
    for (long long v : ints)
      if (v < 0 || v >= n)
        throw ParseError(line_no, "vertex " + std::to_string(v) + " out of range [0, " + std::to_string(n) + ")");
    diagonals.push_back({static_cast<Vertex>(ints[0]), static_cast<Vertex>(ints[1])});
  }
  if (n < 0) throw ParseError(line_no == 0 ? 1 : line_no, "missing vertex count");
  (void)n_line;
  Triangulation t(n, std::move(diagonals));
  require_valid(t);
  return t;
}

/// Canonical form: n, then diagonals sorted lexicographically with i < j.
inline std::string serialize_tri(const Triangulation& t) {
  std::string out = std::to_string(t.size()) + "\n";
  for (const auto& e : t.diagonals()) out += std::to_string(e.a) + " " + std::to_string(e.b) + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// DOT export

/// Plane drawing with vertices on a circle (use `neato -n`). Diagonals dashed.
inline std::string to_dot(const Triangulation& t) {
  const int n = t.size();
  std::ostringstream os;
  os << std::fixed << std::setprecision(3);
  os << "graph triangulation {\n  layout=neato;\n  node [shape=circle, width=0.3, fixedsize=true];\n";
  const double radius = 1.0 + 0.12 * n;
  for (int v = 0; v < n; ++v) {
    const double a = std::numbers::pi / 2 + 2 * std::numbers::pi * v / n;
    os << "  " << v << " [pos=\"" << radius * std::cos(a) << "," << radius * std::sin(a) << "!\"];\n";
  }
  if (n == 2) {
    os << "  0 -- 1;\n";
  } else {
    for (int v = 0; v < n; ++v) os << "  " << std::min(v, (v + 1) % n) << " -- " << std::max(v, (v + 1) % n) << ";\n";
  }
  for (const auto& e : t.diagonals()) os << "  " << e.a << " -- " << e.b << " [style=dashed];\n";
  os << "}\n";
  return os.str();
}

/// Dual tree: faces as boxes labelled by their corners (interior faces
/// filled), boundary leaves as points.
inline std::string to_dot(const DualTree& tree) {
  std::ostringstream os;
  os << "graph dual {\n  node [fontsize=10];\n";
  for (int f = 0; f < tree.internal_count(); ++f) {
    const Face& face = tree.faces[static_cast<std::size_t>(f)];
    os << "  f" << f << " [shape=box, label=\"" << face.a << "," << face.b << "," << face.c << "\"";
    if (face.interior) os << ", style=filled, fillcolor=lightgray";
    os << "];\n";
  }
  for (int i = 0; i < tree.leaf_count(); ++i) os << "  l" << i << " [shape=point];\n";
  auto name = [&](int v) {
    return tree.is_leaf(v) ? "l" + std::to_string(v - tree.internal_count()) : "f" + std::to_string(v);
  };
  for (int v = 0; v < static_cast<int>(tree.adjacency.size()); ++v)
    for (int w : tree.adjacency[static_cast<std::size_t>(v)])
      if (v < w) os << "  " << name(v) << " -- " << name(w) << ";\n";
  os << "}\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// TSV records: n, rank, m, g

inline std::string tsv_record(int n, const BigCount& rank, int m, const BigCount& g) {
  return std::to_string(n) + "\t" + rank.get_str() + "\t" + std::to_string(m) + "\t" + g.get_str();
}

}  // namespace isingtri
