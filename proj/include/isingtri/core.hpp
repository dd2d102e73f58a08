#pragma once

// Domain types shared by every part of the library: triangulated convex
// polygons, boundary edges, faces, spin-pair indexing and the exact 4-vector /
// 4x4 counters used by the transfer-matrix engine.

#include <gmpxx.h>

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <iterator>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

namespace isingtri {

/// Exact nonnegative counter. Degeneracies grow like phi^n, so fixed-width
/// integers are not an option.
using BigCount = mpz_class;

/// Polygon vertex, 0-indexed counterclockwise.
using Vertex = int;

/// Unordered vertex pair, stored with a < b.
struct Edge {
  Vertex a = 0;
  Vertex b = 0;

  friend constexpr auto operator<=>(const Edge&, const Edge&) = default;
};

constexpr Edge make_edge(Vertex x, Vertex y) noexcept {
  return x < y ? Edge{x, y} : Edge{y, x};
}

/// Ordered pair (b1, b2) naming a boundary edge of the polygon. The order
/// matters to the construction operations: W replaces b1, Z replaces b2.
struct BoundaryEdge {
  Vertex b1 = 0;
  Vertex b2 = 1;

  friend constexpr bool operator==(const BoundaryEdge&, const BoundaryEdge&) = default;
};

/// True when {x, y} is a side of the n-gon. For n = 2 the single edge {0, 1}.
constexpr bool is_polygon_side(int n, Vertex x, Vertex y) noexcept {
  if (x < 0 || y < 0 || x >= n || y >= n || x == y) return false;
  const int d = x > y ? x - y : y - x;
  return d == 1 || d == n - 1;
}

class Triangulation {
 public:
  /// The degenerate triangulation: two vertices joined by an edge.
  Triangulation() = default;

  /// Stores n and the diagonals, each normalized to a < b and the list sorted.
  /// No validation happens here; see validate().
  Triangulation(int n, std::vector<Edge> diagonals) : n_(n), diagonals_(std::move(diagonals)) {
    for (auto& e : diagonals_) e = make_edge(e.a, e.b);
    std::sort(diagonals_.begin(), diagonals_.end());
  }

  static Triangulation degenerate() { return {}; }

  int size() const noexcept { return n_; }
  std::span<const Edge> diagonals() const noexcept { return diagonals_; }
  bool is_degenerate() const noexcept { return n_ == 2; }

  bool is_boundary(Vertex x, Vertex y) const noexcept { return is_polygon_side(n_, x, y); }

  bool has_diagonal(Vertex x, Vertex y) const {
    return std::binary_search(diagonals_.begin(), diagonals_.end(), make_edge(x, y));
  }

  friend bool operator==(const Triangulation&, const Triangulation&) = default;

 private:
  int n_ = 2;
  std::vector<Edge> diagonals_;
};

// ---------------------------------------------------------------------------
// Validation

enum class ViolationKind {
  TooFewVertices,
  VertexOutOfRange,
  Loop,
  BoundaryDiagonal,
  DuplicateDiagonal,
  WrongDiagonalCount,
  Crossing,
};

inline std::string_view to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::TooFewVertices: return "too-few-vertices";
    case ViolationKind::VertexOutOfRange: return "vertex-out-of-range";
    case ViolationKind::Loop: return "loop";
    case ViolationKind::BoundaryDiagonal: return "boundary-diagonal";
    case ViolationKind::DuplicateDiagonal: return "duplicate-diagonal";
    case ViolationKind::WrongDiagonalCount: return "wrong-diagonal-count";
    case ViolationKind::Crossing: return "crossing";
  }
  return "unknown";
}

struct Violation {
  ViolationKind kind;
  std::vector<Edge> edges;  // offending diagonal(s)
  std::string message;
};

namespace detail {

inline std::string edge_text(const Edge& e) {
  return "{" + std::to_string(e.a) + "," + std::to_string(e.b) + "}";
}

constexpr bool crosses(const Edge& x, const Edge& y) noexcept {
  return (x.a < y.a && y.a < x.b && x.b < y.b) || (y.a < x.a && x.a < y.b && y.b < x.b);
}

// Parenthesis check over well-formed, distinct chords: closing a chord that is
// not on top of the stack means some open chord interleaves with it.
inline bool chords_nest(int n, std::span<const Edge> chords) {
  std::vector<std::vector<Edge>> opens(static_cast<std::size_t>(n));
  std::vector<std::vector<Edge>> closes(static_cast<std::size_t>(n));
  for (const auto& c : chords) {
    opens[static_cast<std::size_t>(c.a)].push_back(c);
    closes[static_cast<std::size_t>(c.b)].push_back(c);
  }
  std::vector<Edge> stack;
  for (int v = 0; v < n; ++v) {
    auto& cl = closes[static_cast<std::size_t>(v)];
    std::sort(cl.begin(), cl.end(), [](const Edge& x, const Edge& y) { return x.a > y.a; });
    for (const auto& c : cl) {
      if (stack.empty() || stack.back() != c) return false;
      stack.pop_back();
    }
    auto& op = opens[static_cast<std::size_t>(v)];
    std::sort(op.begin(), op.end(), [](const Edge& x, const Edge& y) { return x.b > y.b; });
    for (const auto& c : op) stack.push_back(c);
  }
  return true;
}

}  // namespace detail

/// Every violated triangulation invariant, each naming the offending
/// diagonal(s). Empty when t is a valid triangulation of C_n (or the degenerate
/// edge when n = 2).
inline std::vector<Violation> validate(const Triangulation& t) {
  std::vector<Violation> out;
  const int n = t.size();
  if (n < 2) {
    out.push_back({ViolationKind::TooFewVertices, {}, "n = " + std::to_string(n) + " < 2"});
    return out;
  }
  std::vector<Edge> chords;
  const auto diags = t.diagonals();
  for (std::size_t i = 0; i < diags.size(); ++i) {
    const Edge& e = diags[i];
    if (e.a < 0 || e.b >= n) {
      out.push_back({ViolationKind::VertexOutOfRange, {e},
                     "diagonal " + detail::edge_text(e) + " has a vertex outside 0.." + std::to_string(n - 1)});
      continue;
    }
    if (e.a == e.b) {
      out.push_back({ViolationKind::Loop, {e}, "diagonal " + detail::edge_text(e) + " is a loop"});
      continue;
    }
    if (is_polygon_side(n, e.a, e.b)) {
      out.push_back({ViolationKind::BoundaryDiagonal, {e},
                     "diagonal " + detail::edge_text(e) + " is a boundary edge"});
      continue;
    }
    if (!chords.empty() && chords.back() == e) {
      out.push_back({ViolationKind::DuplicateDiagonal, {e},
                     "diagonal " + detail::edge_text(e) + " appears more than once"});
      continue;
    }
    chords.push_back(e);
  }
  const std::size_t expected = n >= 3 ? static_cast<std::size_t>(n - 3) : 0;
  if (diags.size() != expected) {
    out.push_back({ViolationKind::WrongDiagonalCount, {},
                   "expected " + std::to_string(expected) + " diagonals, found " + std::to_string(diags.size())});
  }
  if (!detail::chords_nest(n, chords)) {
    for (std::size_t i = 0; i < chords.size(); ++i) {
      for (std::size_t j = i + 1; j < chords.size(); ++j) {
        if (detail::crosses(chords[i], chords[j])) {
          out.push_back({ViolationKind::Crossing, {chords[i], chords[j]},
                         "diagonals " + detail::edge_text(chords[i]) + " and " + detail::edge_text(chords[j]) +
                             " cross"});
        }
      }
    }
  }
  return out;
}

class InvalidTriangulation : public std::invalid_argument {
 public:
  explicit InvalidTriangulation(std::vector<Violation> violations)
      : std::invalid_argument(describe(violations)), violations_(std::move(violations)) {}

  const std::vector<Violation>& violations() const noexcept { return violations_; }

 private:
  static std::string describe(const std::vector<Violation>& vs) {
    std::ostringstream os;
    os << "invalid triangulation:";
    for (const auto& v : vs) os << ' ' << v.message << ';';
    return os.str();
  }

  std::vector<Violation> violations_;
};

inline void require_valid(const Triangulation& t) {
  if (auto vs = validate(t); !vs.empty()) throw InvalidTriangulation(std::move(vs));
}

// ---------------------------------------------------------------------------
// Faces

/// Inner face with vertices a < b < c. interior is set when none of its three
/// edges lies on the polygon boundary.
struct Face {
  Vertex a = 0;
  Vertex b = 0;
  Vertex c = 0;
  bool interior = false;

  friend constexpr bool operator==(const Face&, const Face&) = default;
};

namespace detail {

inline std::vector<std::vector<Vertex>> neighbor_lists(const Triangulation& t) {
  const int n = t.size();
  std::vector<std::vector<Vertex>> adj(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const int j = (i + 1) % n;
    adj[static_cast<std::size_t>(i)].push_back(j);
    adj[static_cast<std::size_t>(j)].push_back(i);
  }
  for (const auto& e : t.diagonals()) {
    adj[static_cast<std::size_t>(e.a)].push_back(e.b);
    adj[static_cast<std::size_t>(e.b)].push_back(e.a);
  }
  for (auto& l : adj) std::sort(l.begin(), l.end());
  return adj;
}

}  // namespace detail

/// The n-2 inner faces, sorted lexicographically. Each polygon interval
/// [i, j] is split at the largest neighbor of i below j, which is the apex of
/// the face resting on chord {i, j}.
inline std::vector<Face> faces(const Triangulation& t) {
  if (t.is_degenerate()) throw std::invalid_argument("faces: degenerate triangulation has no faces");
  require_valid(t);
  const int n = t.size();
  const auto adj = detail::neighbor_lists(t);
  std::vector<Face> out;
  out.reserve(static_cast<std::size_t>(n - 2));
  std::vector<std::pair<Vertex, Vertex>> pending{{0, n - 1}};
  while (!pending.empty()) {
    const auto [i, j] = pending.back();
    pending.pop_back();
    const auto& nb = adj[static_cast<std::size_t>(i)];
    const auto it = std::lower_bound(nb.begin(), nb.end(), j);
    const Vertex k = *std::prev(it);
    const bool interior = !(k == i + 1 || j == k + 1 || (i == 0 && j == n - 1));
    out.push_back({i, k, j, interior});
    if (k - i >= 2) pending.emplace_back(i, k);
    if (j - k >= 2) pending.emplace_back(k, j);
  }
  std::sort(out.begin(), out.end(), [](const Face& x, const Face& y) {
    return std::tie(x.a, x.b, x.c) < std::tie(y.a, y.b, y.c);
  });
  return out;
}

/// |I(T)|: number of interior triangles. Zero for the degenerate edge.
inline int interior_count(const Triangulation& t) {
  if (t.is_degenerate()) return 0;
  const auto fs = faces(t);
  return static_cast<int>(std::count_if(fs.begin(), fs.end(), [](const Face& f) { return f.interior; }));
}

// ---------------------------------------------------------------------------
// Spin pairs and exact counters

enum class Spin : std::int8_t { Plus = 1, Minus = -1 };

/// Spin assignment of an ordered vertex pair. The serial order
/// (++, +-, -+, --) = (0, 1, 2, 3) indexes every vector and both matrix axes.
enum class SpinPair : std::uint8_t { PlusPlus = 0, PlusMinus = 1, MinusPlus = 2, MinusMinus = 3 };

inline constexpr std::array<SpinPair, 4> kSpinPairs{SpinPair::PlusPlus, SpinPair::PlusMinus,
                                                    SpinPair::MinusPlus, SpinPair::MinusMinus};

constexpr std::size_t index_of(SpinPair p) noexcept { return static_cast<std::size_t>(p); }

constexpr Spin first_spin(SpinPair p) noexcept {
  return index_of(p) < 2 ? Spin::Plus : Spin::Minus;
}
constexpr Spin second_spin(SpinPair p) noexcept {
  return index_of(p) % 2 == 0 ? Spin::Plus : Spin::Minus;
}
constexpr SpinPair spin_pair(Spin first, Spin second) noexcept {
  return static_cast<SpinPair>((first == Spin::Minus ? 2 : 0) + (second == Spin::Minus ? 1 : 0));
}

inline std::string_view to_string(SpinPair p) {
  static constexpr std::array<std::string_view, 4> names{"++", "+-", "-+", "--"};
  return names[index_of(p)];
}

/// Counts of satisfying states conditioned on the spins of one boundary edge.
class SatisfyingVector {
 public:
  SatisfyingVector() = default;
  SatisfyingVector(BigCount pp, BigCount pm, BigCount mp, BigCount mm)
      : v_{std::move(pp), std::move(pm), std::move(mp), std::move(mm)} {}

  /// The all-ones vector: a bare edge accepts every spin pair.
  static SatisfyingVector ones() { return {1, 1, 1, 1}; }

  BigCount& operator[](SpinPair p) noexcept { return v_[index_of(p)]; }
  const BigCount& operator[](SpinPair p) const noexcept { return v_[index_of(p)]; }
  BigCount& operator[](std::size_t i) noexcept { return v_[i]; }
  const BigCount& operator[](std::size_t i) const noexcept { return v_[i]; }

  BigCount total() const { return v_[0] + v_[1] + v_[2] + v_[3]; }

  /// v[++] = v[--] and v[+-] = v[-+].
  bool is_symmetric() const { return v_[0] == v_[3] && v_[1] == v_[2]; }

  std::string to_string() const {
    return v_[0].get_str() + "," + v_[1].get_str() + "," + v_[2].get_str() + "," + v_[3].get_str();
  }

  friend bool operator==(const SatisfyingVector&, const SatisfyingVector&) = default;

 private:
  std::array<BigCount, 4> v_{};
};

/// 4x4 exact matrix indexed by SpinPair on both axes.
class TransferMatrix {
 public:
  TransferMatrix() = default;

  static TransferMatrix identity() {
    TransferMatrix m;
    for (std::size_t i = 0; i < 4; ++i) m.a_[i][i] = 1;
    return m;
  }

  static TransferMatrix from_rows(const std::array<std::array<long, 4>, 4>& rows) {
    TransferMatrix m;
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) m.a_[i][j] = rows[i][j];
    return m;
  }

  BigCount& operator()(std::size_t row, std::size_t col) noexcept { return a_[row][col]; }
  const BigCount& operator()(std::size_t row, std::size_t col) const noexcept { return a_[row][col]; }
  BigCount& operator()(SpinPair row, SpinPair col) noexcept { return a_[index_of(row)][index_of(col)]; }
  const BigCount& operator()(SpinPair row, SpinPair col) const noexcept {
    return a_[index_of(row)][index_of(col)];
  }

  std::string to_string() const {
    std::string s;
    for (std::size_t i = 0; i < 4; ++i) {
      s += '[';
      for (std::size_t j = 0; j < 4; ++j) {
        if (j) s += ',';
        s += a_[i][j].get_str();
      }
      s += ']';
    }
    return s;
  }

  friend TransferMatrix operator*(const TransferMatrix& x, const TransferMatrix& y) {
    TransferMatrix r;
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t k = 0; k < 4; ++k) {
        if (x.a_[i][k] == 0) continue;
        for (std::size_t j = 0; j < 4; ++j) r.a_[i][j] += x.a_[i][k] * y.a_[k][j];
      }
    return r;
  }

  friend SatisfyingVector operator*(const TransferMatrix& m, const SatisfyingVector& v) {
    SatisfyingVector r;
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j)
        if (m.a_[i][j] != 0) r[i] += m.a_[i][j] * v[j];
    return r;
  }

  friend bool operator==(const TransferMatrix&, const TransferMatrix&) = default;

 private:
  std::array<std::array<BigCount, 4>, 4> a_{};
};

}  // namespace isingtri
