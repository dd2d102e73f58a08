#pragma once

// Counting engine: elementary transfer matrices, satisfying vectors, the
// vector merge operator, degeneracy, Fibonacci/Lucas closed forms and exact
// comparisons against powers of the golden ratio.

#include <cstddef>
#include <cstdint>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <stdexcept>
#include <vector>

#include "isingtri/construct.hpp"
#include "isingtri/core.hpp"

namespace isingtri {

namespace detail {

using Pattern = std::array<std::array<long, 4>, 4>;

// Rows indexed by the new bottom pair, columns by the old one.
inline constexpr Pattern kZPattern{{{0, 1, 0, 0}, {1, 1, 0, 0}, {0, 0, 1, 1}, {0, 0, 1, 0}}};
inline constexpr Pattern kWPattern{{{0, 0, 1, 0}, {0, 1, 0, 1}, {1, 0, 1, 0}, {0, 1, 0, 0}}};
inline constexpr Pattern kPiPattern{{{1, 0, 0, 0}, {0, 0, 1, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}}};

constexpr int frustrated_in_triangle(Spin x, Spin y, Spin z) noexcept {
  return (x == y ? 1 : 0) + (y == z ? 1 : 0) + (x == z ? 1 : 0);
}

}  // namespace detail

/// Elementary 0/1 matrix of W or Z.
inline TransferMatrix transfer_matrix(Op op) {
  return TransferMatrix::from_rows(op == Op::W ? detail::kWPattern : detail::kZPattern);
}

/// The involutive permutation swapping +- and -+; W = Pi Z Pi.
inline TransferMatrix permutation_matrix() { return TransferMatrix::from_rows(detail::kPiPattern); }

/// Builds the matrix of `op` from the satisfying-triangle predicate: entry
/// [row, col] is 1 iff the vertex shared by the old and new bottom edges gets
/// the same spin in both pairs and the created triangle frustrates exactly one
/// edge.
inline TransferMatrix transfer_matrix_from_predicate(Op op) {
  TransferMatrix m;
  for (SpinPair row : kSpinPairs) {
    for (SpinPair col : kSpinPairs) {
      // Old bottom (b1, b2) carries col; W's new bottom is (new, b2), Z's is (b1, new).
      const Spin b1 = first_spin(col);
      const Spin b2 = second_spin(col);
      bool ok;
      if (op == Op::W)
        ok = second_spin(row) == b2 && detail::frustrated_in_triangle(b1, b2, first_spin(row)) == 1;
      else
        ok = first_spin(row) == b1 && detail::frustrated_in_triangle(b1, b2, second_spin(row)) == 1;
      m(row, col) = ok ? 1 : 0;
    }
  }
  return m;
}

/// Binary exponentiation.
inline TransferMatrix power(TransferMatrix base, std::uint64_t k) {
  TransferMatrix result = TransferMatrix::identity();
  while (k > 0) {
    if (k & 1U) result = result * base;
    k >>= 1U;
    if (k > 0) base = base * base;
  }
  return result;
}

/// R * v for an elementary operation, using only additions.
inline SatisfyingVector apply_transfer(Op op, const SatisfyingVector& v) {
  const auto& pat = op == Op::W ? detail::kWPattern : detail::kZPattern;
  SatisfyingVector r;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      if (pat[i][j] != 0) r[i] += v[j];
  return r;
}

/// x . y = (x2 y3, x1 y2 + x3 y4, x4 y3 + x3 y1, x3 y2), 1-based components.
inline SatisfyingVector bullet(const SatisfyingVector& x, const SatisfyingVector& y) {
  return {x[1] * y[2], x[0] * y[1] + x[2] * y[3], x[3] * y[2] + x[2] * y[0], x[2] * y[1]};
}

/// Folds a plan bottom-up: Leaf -> (1,1,1,1), Apply -> R v, Merge -> l . r.
inline SatisfyingVector satisfying_vector(const ConstructionPlan& plan) {
  const auto& nodes = plan.nodes();
  if (nodes.empty()) throw std::invalid_argument("satisfying_vector: empty plan");
  const auto live = plan.reachable();
  std::vector<std::optional<SatisfyingVector>> value(nodes.size());
  auto take = [&](ConstructionPlan::NodeId id) {
    auto& slot = value[static_cast<std::size_t>(id)];
    if (!slot) throw std::invalid_argument("satisfying_vector: operand used twice");
    SatisfyingVector v = std::move(*slot);
    slot.reset();
    return v;
  };
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!live[i]) continue;
    const auto& node = nodes[i];
    switch (node.kind) {
      case ConstructionPlan::Kind::Leaf:
        value[i] = SatisfyingVector::ones();
        break;
      case ConstructionPlan::Kind::Apply:
        value[i] = apply_transfer(node.op, take(node.left));
        break;
      case ConstructionPlan::Kind::Merge: {
        auto l = take(node.left);
        auto r = take(node.right);
        value[i] = bullet(l, r);
        break;
      }
    }
  }
  return std::move(*value.back());
}

inline SatisfyingVector satisfying_vector(const Triangulation& t, BoundaryEdge bottom) {
  return satisfying_vector(decompose(t, bottom));
}

/// Product R_l ... R_1 for ops in application order; runs of equal ops are
/// raised by squaring.
inline TransferMatrix satisfying_matrix(std::span<const Op> ops) {
  if (ops.empty()) throw std::invalid_argument("satisfying_matrix: empty op sequence");
  TransferMatrix m = TransferMatrix::identity();
  std::size_t i = 0;
  while (i < ops.size()) {
    std::size_t j = i;
    while (j < ops.size() && ops[j] == ops[i]) ++j;
    m = power(transfer_matrix(ops[i]), j - i) * m;
    i = j;
  }
  return m;
}

/// Z^{z_m} Pi Z^{w_m} Pi ... Pi Z^{z_1} Pi Z^{w_1} Pi for the exponent form of
/// a strip.
inline TransferMatrix normal_form_matrix(std::span<const int> w, std::span<const int> z) {
  if (w.size() != z.size()) throw std::invalid_argument("normal_form_matrix: exponent lists differ in length");
  const TransferMatrix pi = permutation_matrix();
  const TransferMatrix zm = transfer_matrix(Op::Z);
  TransferMatrix m = TransferMatrix::identity();
  for (std::size_t j = 0; j < w.size(); ++j) {
    m = pi * power(zm, static_cast<std::uint64_t>(w[j])) * pi * m;
    m = power(zm, static_cast<std::uint64_t>(z[j])) * m;
  }
  return m;
}

/// Number of satisfying states g(T). The degenerate edge counts 4.
inline BigCount degeneracy(const Triangulation& t, BoundaryEdge bottom) {
  require_valid(t);
  if (t.is_degenerate()) return 4;
  return satisfying_vector(t, bottom).total();
}

inline BigCount degeneracy(const Triangulation& t) { return degeneracy(t, BoundaryEdge{0, 1}); }

// ---------------------------------------------------------------------------
// Fibonacci and Lucas numbers

/// Append-only memo of F_k (F_0 = 0, F_1 = 1) and L_k (L_0 = 2, L_1 = 1).
/// Safe to share between threads.
class FibCache {
 public:
  FibCache() : fib_{0, 1}, lucas_{2, 1} {}

  BigCount fibonacci(std::size_t k) {
    ensure(k);
    std::shared_lock lock(mutex_);
    return fib_[k];
  }

  BigCount lucas(std::size_t k) {
    ensure(k);
    std::shared_lock lock(mutex_);
    return lucas_[k];
  }

  std::size_t size() const {
    std::shared_lock lock(mutex_);
    return fib_.size();
  }

 private:
  void ensure(std::size_t k) {
    {
      std::shared_lock lock(mutex_);
      if (k < fib_.size()) return;
    }
    std::unique_lock lock(mutex_);
    while (fib_.size() <= k) {
      const std::size_t m = fib_.size();
      fib_.push_back(fib_[m - 1] + fib_[m - 2]);
      lucas_.push_back(lucas_[m - 1] + lucas_[m - 2]);
    }
  }

  mutable std::shared_mutex mutex_;
  std::vector<BigCount> fib_;
  std::vector<BigCount> lucas_;
};

inline FibCache& shared_fib_cache() {
  static FibCache cache;
  return cache;
}

inline BigCount fibonacci(std::size_t k) { return shared_fib_cache().fibonacci(k); }
inline BigCount lucas(std::size_t k) { return shared_fib_cache().lucas(k); }

inline int checked_int(int v, int lo, const char* what) {
  if (v < lo) throw std::invalid_argument(std::string(what) + " must be >= " + std::to_string(lo));
  return v;
}

/// 2 F_{n+1}: satisfying states of any strip of triangles on n vertices.
inline BigCount strip_count(int n) {
  checked_int(n, 3, "strip_count: n");
  return 2 * fibonacci(static_cast<std::size_t>(n) + 1);
}

/// 2 (F_{n+1} - F_{n1-1} F_{n2-1} F_{n3-1}) with n = n1 + n2 + n3: satisfying
/// states of a triangulation whose single interior triangle has arms of sizes
/// n1, n2, n3.
inline BigCount one_interior_count(int n1, int n2, int n3) {
  checked_int(n1, 2, "one_interior_count: n1");
  checked_int(n2, 2, "one_interior_count: n2");
  checked_int(n3, 2, "one_interior_count: n3");
  const auto n = static_cast<std::size_t>(n1 + n2 + n3);
  const BigCount prod = fibonacci(static_cast<std::size_t>(n1 - 1)) * fibonacci(static_cast<std::size_t>(n2 - 1)) *
                        fibonacci(static_cast<std::size_t>(n3 - 1));
  return 2 * (fibonacci(n + 1) - prod);
}

// ---------------------------------------------------------------------------
// Exact golden-ratio comparisons. phi^k = (L_k + F_k sqrt 5) / 2.

namespace detail {

// h >= phi^k  <=>  2h - L_k >= F_k sqrt 5  <=>  2h - L_k >= 0 and (2h - L_k)^2 >= 5 F_k^2.
inline bool at_least_phi_power(const BigCount& h, std::size_t k) {
  const BigCount t = 2 * h - lucas(k);
  if (t < 0) return false;
  const BigCount f = fibonacci(k);
  return t * t >= 5 * f * f;
}

// floor(phi^k) = floor((L_k + isqrt(5 F_k^2)) / 2) for k >= 1.
inline BigCount floor_phi_power(std::size_t k) {
  if (k == 0) return 1;
  const BigCount f = fibonacci(k);
  BigCount s = 5 * f * f;
  mpz_sqrt(s.get_mpz_t(), s.get_mpz_t());
  BigCount r = lucas(k) + s;
  mpz_fdiv_q_2exp(r.get_mpz_t(), r.get_mpz_t(), 1);
  return r;
}

}  // namespace detail

/// g >= phi^(k_halves / 2), decided without floating point. Odd k_halves
/// compare g^2 against phi^k_halves.
inline bool phi_power_leq(const BigCount& g, unsigned k_halves) {
  if (g < 0) return false;
  if (k_halves % 2 == 0) return detail::at_least_phi_power(g, k_halves / 2);
  return detail::at_least_phi_power(g * g, k_halves);
}

/// Smallest integer >= phi^(k_halves / 2).
inline BigCount ceil_phi_half_power(unsigned k_halves) {
  if (k_halves == 0) return 1;
  if (k_halves % 2 == 0) return detail::floor_phi_power(k_halves / 2) + 1;
  // phi^k is irrational, so g^2 >= phi^k iff g^2 > floor(phi^k).
  BigCount s = detail::floor_phi_power(k_halves);
  mpz_sqrt(s.get_mpz_t(), s.get_mpz_t());
  return s + 1;
}

}  // namespace isingtri
