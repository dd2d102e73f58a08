#pragma once

// Exhaustive ground truth for small instances: spin-state enumeration,
// energies, groundstates and intersecting edge sets. Nothing here uses the
// transfer-matrix machinery; faces are recovered by brute-force triangle
// search rather than the face sweep in core.

#include <bit>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "isingtri/core.hpp"

namespace isingtri::oracle {

inline constexpr int kMaxExhaustive = 30;  // 2^n state loops
inline constexpr int kMaxBacktrack = 20;   // intersecting-set search

/// Packed spin assignment: bit v set means vertex v carries spin -1.
using SpinState = std::uint32_t;

constexpr Spin spin(SpinState s, Vertex v) noexcept { return (s >> v) & 1U ? Spin::Minus : Spin::Plus; }

namespace detail {

inline void require_size(const Triangulation& t, int limit, const char* what) {
  require_valid(t);
  if (t.size() > limit)
    throw std::invalid_argument(std::string(what) + ": n = " + std::to_string(t.size()) + " exceeds " +
                                std::to_string(limit));
}

}  // namespace detail

/// All edges: polygon sides followed by diagonals, sorted.
inline std::vector<Edge> edges(const Triangulation& t) {
  const int n = t.size();
  std::vector<Edge> out;
  if (n == 2) {
    out.push_back({0, 1});
  } else {
    for (int i = 0; i < n; ++i) out.push_back(make_edge(i, (i + 1) % n));
  }
  out.insert(out.end(), t.diagonals().begin(), t.diagonals().end());
  std::sort(out.begin(), out.end());
  return out;
}

/// Every 3-cycle of the graph. In a triangulated convex polygon these are
/// exactly the inner faces.
inline std::vector<std::array<Vertex, 3>> triangles(const Triangulation& t) {
  const int n = t.size();
  if (n > 64) throw std::invalid_argument("oracle::triangles: n > 64");
  std::vector<std::uint64_t> adj(static_cast<std::size_t>(n), 0);
  for (const auto& e : edges(t)) {
    adj[static_cast<std::size_t>(e.a)] |= std::uint64_t{1} << e.b;
    adj[static_cast<std::size_t>(e.b)] |= std::uint64_t{1} << e.a;
  }
  std::vector<std::array<Vertex, 3>> out;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      if (!((adj[static_cast<std::size_t>(a)] >> b) & 1U)) continue;
      for (int c = b + 1; c < n; ++c)
        if (((adj[static_cast<std::size_t>(a)] >> c) & 1U) && ((adj[static_cast<std::size_t>(b)] >> c) & 1U))
          out.push_back({a, b, c});
    }
  return out;
}

/// Edges whose endpoints carry equal spins.
inline std::vector<Edge> frustrated_edges(const Triangulation& t, SpinState s) {
  std::vector<Edge> out;
  for (const auto& e : edges(t))
    if (spin(s, e.a) == spin(s, e.b)) out.push_back(e);
  return out;
}

/// True iff every inner face has exactly one frustrated edge.
inline bool is_satisfying(const Triangulation& t, SpinState s) {
  for (const auto& f : triangles(t)) {
    const int frustrated = (spin(s, f[0]) == spin(s, f[1])) + (spin(s, f[1]) == spin(s, f[2])) +
                           (spin(s, f[0]) == spin(s, f[2]));
    if (frustrated != 1) return false;
  }
  return true;
}

namespace detail {

// A triangle frustrates exactly one edge iff it is not monochromatic, i.e. it
// has one or two minus spins.
template <typename Visit>
void for_each_satisfying(const Triangulation& t, Visit&& visit) {
  const int n = t.size();
  std::vector<SpinState> masks;
  for (const auto& f : triangles(t)) masks.push_back((1U << f[0]) | (1U << f[1]) | (1U << f[2]));
  const std::uint64_t states = std::uint64_t{1} << n;
  for (std::uint64_t w = 0; w < states; ++w) {
    const auto s = static_cast<SpinState>(w);
    bool ok = true;
    for (SpinState m : masks) {
      const int minus = std::popcount(s & m);
      if (minus == 0 || minus == 3) {
        ok = false;
        break;
      }
    }
    if (ok) visit(s);
  }
}

}  // namespace detail

/// g(T) by enumerating all 2^n states.
inline BigCount brute_count_satisfying(const Triangulation& t) {
  detail::require_size(t, kMaxExhaustive, "brute_count_satisfying");
  std::uint64_t count = 0;
  detail::for_each_satisfying(t, [&](SpinState) { ++count; });
  BigCount g;
  mpz_import(g.get_mpz_t(), 1, 1, sizeof(count), 0, 0, &count);
  return g;
}

inline std::vector<SpinState> satisfying_states(const Triangulation& t) {
  detail::require_size(t, kMaxExhaustive, "satisfying_states");
  std::vector<SpinState> out;
  detail::for_each_satisfying(t, [&](SpinState s) { out.push_back(s); });
  return out;
}

/// Satisfying states split by the spins of (bottom.b1, bottom.b2).
inline SatisfyingVector brute_satisfying_vector(const Triangulation& t, BoundaryEdge bottom) {
  detail::require_size(t, kMaxExhaustive, "brute_satisfying_vector");
  if (!t.is_boundary(bottom.b1, bottom.b2)) throw std::invalid_argument("brute_satisfying_vector: not a boundary edge");
  std::array<std::uint64_t, 4> c{};
  detail::for_each_satisfying(t, [&](SpinState s) { ++c[index_of(spin_pair(spin(s, bottom.b1), spin(s, bottom.b2)))]; });
  return {BigCount(std::to_string(c[0])), BigCount(std::to_string(c[1])), BigCount(std::to_string(c[2])),
          BigCount(std::to_string(c[3]))};
}

/// Energy with coupling c = -1 on every edge: sum of sigma(u) sigma(v),
/// i.e. frustrated minus unfrustrated edges.
inline long energy(const Triangulation& t, SpinState s) {
  long e = 0;
  for (const auto& edge : edges(t)) e += spin(s, edge.a) == spin(s, edge.b) ? 1 : -1;
  return e;
}

/// How frustration is tallied when looking for groundstates.
///  - PerFace: every inner face contributes its own frustrated edges, so a
///    diagonal shared by two faces counts twice. Each face frustrates at least
///    one edge, hence the minimum is n - 2 and the minimizers are exactly the
///    satisfying states whenever one exists.
///  - PerEdge: the plain edge Hamiltonian, each edge once. On a polygon the
///    boundary sides sit in a single face, so this can prefer states that
///    frustrate diagonals (the square's {0,2} states frustrate one edge).
enum class Frustration { PerFace, PerEdge };

struct GroundstateCensus {
  int min_frustrated = 0;
  BigCount minimizers;
  long min_energy = 0;  // sum of sigma(u) sigma(v) under the same tally
  std::vector<SpinState> groundstates;  // ascending
};

inline GroundstateCensus groundstate_census(const Triangulation& t, Frustration tally = Frustration::PerFace) {
  detail::require_size(t, kMaxExhaustive, "groundstate_census");
  const auto es = edges(t);
  // Weight of an edge = number of times it is counted.
  std::vector<int> weight(es.size(), 1);
  if (tally == Frustration::PerFace) {
    const auto tris = triangles(t);
    for (std::size_t i = 0; i < es.size(); ++i) {
      int w = 0;
      for (const auto& f : tris) {
        const auto in = [&](Vertex v) { return v == f[0] || v == f[1] || v == f[2]; };
        w += in(es[i].a) && in(es[i].b);
      }
      weight[i] = w;
    }
  }
  int total = 0;
  for (int w : weight) total += w;
  GroundstateCensus census;
  census.min_frustrated = std::numeric_limits<int>::max();
  const std::uint64_t states = std::uint64_t{1} << t.size();
  for (std::uint64_t w = 0; w < states; ++w) {
    const auto s = static_cast<SpinState>(w);
    int f = 0;
    for (std::size_t i = 0; i < es.size(); ++i)
      if ((((s >> es[i].a) ^ (s >> es[i].b)) & 1U) == 0) f += weight[i];
    if (f < census.min_frustrated) {
      census.min_frustrated = f;
      census.groundstates.clear();
    }
    if (f == census.min_frustrated) census.groundstates.push_back(s);
  }
  census.minimizers = static_cast<unsigned long>(census.groundstates.size());
  census.min_energy = 2L * census.min_frustrated - total;
  return census;
}

namespace detail {

struct IntersectingSearch {
  std::vector<std::array<int, 3>> face_edges;  // edge indices per face
  std::vector<std::int8_t> state;              // -1 unknown, 0 out, 1 in
  std::uint64_t chosen = 0;
  std::vector<std::uint64_t>* collect = nullptr;
  std::uint64_t count = 0;

  void run(std::size_t face) {
    if (face == face_edges.size()) {
      ++count;
      if (collect) collect->push_back(chosen);
      return;
    }
    const auto& fe = face_edges[face];
    int in = 0;
    std::array<int, 3> unknown{};
    int nu = 0;
    for (int e : fe) {
      if (state[static_cast<std::size_t>(e)] == 1) ++in;
      if (state[static_cast<std::size_t>(e)] == -1) unknown[static_cast<std::size_t>(nu++)] = e;
    }
    if (in > 1) return;
    if (in == 1) {
      for (int i = 0; i < nu; ++i) state[static_cast<std::size_t>(unknown[static_cast<std::size_t>(i)])] = 0;
      run(face + 1);
      for (int i = 0; i < nu; ++i) state[static_cast<std::size_t>(unknown[static_cast<std::size_t>(i)])] = -1;
      return;
    }
    for (int pick = 0; pick < nu; ++pick) {
      for (int i = 0; i < nu; ++i)
        state[static_cast<std::size_t>(unknown[static_cast<std::size_t>(i)])] = i == pick ? 1 : 0;
      const int e = unknown[static_cast<std::size_t>(pick)];
      chosen |= std::uint64_t{1} << e;
      run(face + 1);
      chosen &= ~(std::uint64_t{1} << e);
    }
    for (int i = 0; i < nu; ++i) state[static_cast<std::size_t>(unknown[static_cast<std::size_t>(i)])] = -1;
  }
};

inline IntersectingSearch make_search(const Triangulation& t) {
  const auto es = edges(t);
  auto index = [&](Vertex x, Vertex y) {
    return static_cast<int>(std::lower_bound(es.begin(), es.end(), make_edge(x, y)) - es.begin());
  };
  IntersectingSearch search;
  for (const auto& f : triangles(t)) search.face_edges.push_back({index(f[0], f[1]), index(f[1], f[2]), index(f[0], f[2])});
  search.state.assign(es.size(), -1);
  return search;
}

}  // namespace detail

/// Edge subsets (bitmask over edges(t)) that contain exactly one edge of
/// every inner face.
inline std::vector<std::uint64_t> intersecting_sets(const Triangulation& t) {
  detail::require_size(t, kMaxBacktrack, "intersecting_sets");
  auto search = detail::make_search(t);
  std::vector<std::uint64_t> out;
  search.collect = &out;
  search.run(0);
  std::sort(out.begin(), out.end());
  return out;
}

inline BigCount count_intersecting_sets(const Triangulation& t) {
  detail::require_size(t, kMaxBacktrack, "count_intersecting_sets");
  auto search = detail::make_search(t);
  search.run(0);
  return static_cast<unsigned long>(search.count);
}

/// Bitmask over edges(t) of the edges frustrated by s.
inline std::uint64_t frustrated_mask(const Triangulation& t, SpinState s) {
  const auto es = edges(t);
  std::uint64_t m = 0;
  for (std::size_t i = 0; i < es.size(); ++i)
    if (spin(s, es[i].a) == spin(s, es[i].b)) m |= std::uint64_t{1} << i;
  return m;
}

}  // namespace isingtri::oracle
