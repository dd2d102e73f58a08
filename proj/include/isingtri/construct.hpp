#pragma once

// Constructive calculus for polygon triangulations: the elementary
// operations W and Z (glue a triangle onto the bottom edge), the merge
// operation T1 . T2, the plane dual tree, and decomposition of any rooted
// triangulation into a construction plan.

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "isingtri/core.hpp"

namespace isingtri {

enum class Op : std::uint8_t { W, Z };

constexpr char to_char(Op op) noexcept { return op == Op::W ? 'W' : 'Z'; }

inline Op op_from_char(char c) {
  if (c == 'W' || c == 'w') return Op::W;
  if (c == 'Z' || c == 'z') return Op::Z;
  throw std::invalid_argument(std::string("unknown operation '") + c + "'");
}

inline std::vector<Op> parse_ops(std::string_view text) {
  std::vector<Op> ops;
  ops.reserve(text.size());
  for (char c : text) ops.push_back(op_from_char(c));
  return ops;
}

inline std::string to_string(std::span<const Op> ops) {
  std::string s;
  s.reserve(ops.size());
  for (Op op : ops) s += to_char(op);
  return s;
}

inline bool is_boundary_edge(const Triangulation& t, BoundaryEdge e) {
  return t.is_boundary(e.b1, e.b2);
}

/// Boundary edges in counterclockwise orientation (i, i+1 mod n). The
/// degenerate triangulation has the single edge (0, 1).
inline std::vector<BoundaryEdge> boundary_edges(const Triangulation& t) {
  const int n = t.size();
  if (n == 2) return {{0, 1}};
  std::vector<BoundaryEdge> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out.push_back({i, (i + 1) % n});
  return out;
}

/// Result of W or Z: the grown triangulation, its new bottom edge and the
/// relabeling old vertex -> new vertex.
struct Extended {
  Triangulation tri;
  BoundaryEdge bottom;
  std::vector<Vertex> relabel;
};

struct Merged {
  Triangulation tri;
  BoundaryEdge bottom;
  std::vector<Vertex> relabel_left;
  std::vector<Vertex> relabel_right;
};

namespace detail {

inline void require_bottom(const Triangulation& t, BoundaryEdge e, const char* what) {
  if (!is_boundary_edge(t, e))
    throw std::invalid_argument(std::string(what) + ": (" + std::to_string(e.b1) + "," + std::to_string(e.b2) +
                                ") is not a boundary edge of the " + std::to_string(t.size()) + "-gon");
}

// Insert a new vertex between the endpoints of the bottom edge, keeping the
// counterclockwise labeling. The wrap edge {n-1, 0} appends the new vertex.
inline Extended grow(const Triangulation& t, BoundaryEdge bottom, Op op) {
  require_bottom(t, bottom, op == Op::W ? "apply_w" : "apply_z");
  const int n = t.size();
  const Edge side = make_edge(bottom.b1, bottom.b2);
  const bool wraps = n >= 3 && side.a == 0 && side.b == n - 1;
  const Vertex fresh = wraps ? n : side.a + 1;

  std::vector<Vertex> relabel(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) relabel[static_cast<std::size_t>(v)] = (wraps || v <= side.a) ? v : v + 1;
  auto r = [&](Vertex v) { return relabel[static_cast<std::size_t>(v)]; };

  std::vector<Edge> diags;
  diags.reserve(static_cast<std::size_t>(n - 1));
  for (const auto& e : t.diagonals()) diags.push_back(make_edge(r(e.a), r(e.b)));
  if (n >= 3) diags.push_back(make_edge(r(bottom.b1), r(bottom.b2)));

  const BoundaryEdge next = op == Op::W ? BoundaryEdge{fresh, r(bottom.b2)} : BoundaryEdge{r(bottom.b1), fresh};
  return {Triangulation(n + 1, std::move(diags)), next, std::move(relabel)};
}

// Boundary walk from `from` to `to` (endpoints of a boundary edge) that avoids
// the edge itself.
inline std::vector<Vertex> long_way(int n, Vertex from, Vertex to) {
  if (n == 2) return {from, to};
  const int step = (from == (to + 1) % n) ? 1 : n - 1;
  std::vector<Vertex> path;
  path.reserve(static_cast<std::size_t>(n));
  for (Vertex v = from;; v = (v + step) % n) {
    path.push_back(v);
    if (v == to) break;
  }
  return path;
}

}  // namespace detail

/// Operation W: new vertex joined to both bottom endpoints; the new bottom is
/// (new, b2).
inline Extended apply_w(const Triangulation& t, BoundaryEdge bottom) { return detail::grow(t, bottom, Op::W); }

/// Operation Z: mirror of W; the new bottom is (b1, new).
inline Extended apply_z(const Triangulation& t, BoundaryEdge bottom) { return detail::grow(t, bottom, Op::Z); }

inline Extended apply_op(Op op, const Triangulation& t, BoundaryEdge bottom) { return detail::grow(t, bottom, op); }

/// Operation merge: identifies b1.b2 with b2.b1 and adds the edge
/// {b1.b1, b2.b2}, which becomes the new bottom. Result vertices run
/// counterclockwise from the identified vertex (label 0) through the left
/// operand, then the right operand; the bottom is (n1-1, n1).
inline Merged merge(const Triangulation& left, BoundaryEdge lb, const Triangulation& right, BoundaryEdge rb) {
  detail::require_bottom(left, lb, "merge (left)");
  detail::require_bottom(right, rb, "merge (right)");
  const int n1 = left.size();
  const int n2 = right.size();
  const int n = n1 + n2 - 1;

  // Cycle: shared vertex, around the left operand to lb.b1, jump to rb.b2,
  // around the right operand back to the shared vertex.
  const auto path1 = detail::long_way(n1, lb.b2, lb.b1);
  const auto path2 = detail::long_way(n2, rb.b2, rb.b1);

  std::vector<Vertex> rl(static_cast<std::size_t>(n1));
  std::vector<Vertex> rr(static_cast<std::size_t>(n2));
  Vertex label = 0;
  for (Vertex v : path1) rl[static_cast<std::size_t>(v)] = label++;
  for (std::size_t i = 0; i + 1 < path2.size(); ++i) rr[static_cast<std::size_t>(path2[i])] = label++;
  rr[static_cast<std::size_t>(rb.b1)] = rl[static_cast<std::size_t>(lb.b2)];

  std::vector<Edge> diags;
  diags.reserve(static_cast<std::size_t>(n >= 3 ? n - 3 : 0));
  for (const auto& e : left.diagonals())
    diags.push_back(make_edge(rl[static_cast<std::size_t>(e.a)], rl[static_cast<std::size_t>(e.b)]));
  for (const auto& e : right.diagonals())
    diags.push_back(make_edge(rr[static_cast<std::size_t>(e.a)], rr[static_cast<std::size_t>(e.b)]));
  if (n1 >= 3) diags.push_back(make_edge(rl[static_cast<std::size_t>(lb.b1)], rl[static_cast<std::size_t>(lb.b2)]));
  if (n2 >= 3) diags.push_back(make_edge(rr[static_cast<std::size_t>(rb.b1)], rr[static_cast<std::size_t>(rb.b2)]));

  const BoundaryEdge bottom{rl[static_cast<std::size_t>(lb.b1)], rr[static_cast<std::size_t>(rb.b2)]};
  return {Triangulation(n, std::move(diags)), bottom, std::move(rl), std::move(rr)};
}

/// Reflection v -> -v mod n; bottom edges reflect with their orientation
/// preserved.
inline Triangulation mirrored(const Triangulation& t) {
  const int n = t.size();
  std::vector<Edge> diags;
  for (const auto& e : t.diagonals()) diags.push_back(make_edge((n - e.a) % n, (n - e.b) % n));
  return {n, std::move(diags)};
}

inline BoundaryEdge mirrored(int n, BoundaryEdge e) { return {(n - e.b2) % n, (n - e.b1) % n}; }

/// True when some dihedral relabeling maps (x, ex) onto (y, ey), sending
/// ex.b1 to ey.b1 and ex.b2 to ey.b2.
inline bool rooted_equivalent(const Triangulation& x, BoundaryEdge ex, const Triangulation& y, BoundaryEdge ey) {
  if (x.size() != y.size() || x.diagonals().size() != y.diagonals().size()) return false;
  if (!is_boundary_edge(x, ex) || !is_boundary_edge(y, ey)) return false;
  const int n = x.size();
  if (n == 2) return true;
  const int ox = ex.b2 == (ex.b1 + 1) % n ? 1 : -1;
  const int oy = ey.b2 == (ey.b1 + 1) % n ? 1 : -1;
  const int s = ox * oy;
  auto map = [&](Vertex v) { return (((ey.b1 + s * (v - ex.b1)) % n) + n) % n; };
  std::vector<Edge> diags;
  for (const auto& e : x.diagonals()) diags.push_back(make_edge(map(e.a), map(e.b)));
  std::sort(diags.begin(), diags.end());
  return std::equal(diags.begin(), diags.end(), y.diagonals().begin(), y.diagonals().end());
}

// ---------------------------------------------------------------------------
// Dual tree

/// Plane ternary tree of a triangulation. Nodes [0, n-2) are internal and
/// correspond to faces[i]; node n-2+i is the leaf for boundary edge
/// {i, i+1 mod n}. Internal adjacency lists follow the face's edges in
/// counterclockwise order (ab, bc, ca).
struct DualTree {
  int polygon_size = 0;
  std::vector<Face> faces;
  std::vector<std::vector<int>> adjacency;

  int internal_count() const noexcept { return static_cast<int>(faces.size()); }
  int leaf_count() const noexcept { return static_cast<int>(adjacency.size()) - internal_count(); }
  bool is_leaf(int node) const noexcept { return node >= internal_count(); }
  int leaf_node(int boundary_index) const noexcept { return internal_count() + boundary_index; }
};

namespace detail {

inline std::uint64_t edge_key(int n, Vertex x, Vertex y) {
  const Edge e = make_edge(x, y);
  return static_cast<std::uint64_t>(e.a) * static_cast<std::uint64_t>(n) + static_cast<std::uint64_t>(e.b);
}

inline int boundary_index(int n, Vertex x, Vertex y) {
  const Edge e = make_edge(x, y);
  return (e.a == 0 && e.b == n - 1) ? n - 1 : e.a;
}

}  // namespace detail

inline DualTree dual_tree(const Triangulation& t) {
  DualTree tree;
  const int n = t.size();
  tree.polygon_size = n;
  tree.faces = faces(t);
  const int internal = n - 2;
  tree.adjacency.assign(static_cast<std::size_t>(internal + n), {});

  // diagonal key -> (face, slot) of the first face seen on it
  std::unordered_map<std::uint64_t, std::pair<int, std::size_t>> pending;
  pending.reserve(static_cast<std::size_t>(n));
  for (int f = 0; f < internal; ++f) {
    const Face& face = tree.faces[static_cast<std::size_t>(f)];
    const std::array<std::pair<Vertex, Vertex>, 3> sides{{{face.a, face.b}, {face.b, face.c}, {face.c, face.a}}};
    auto& adj = tree.adjacency[static_cast<std::size_t>(f)];
    for (const auto& [x, y] : sides) {
      if (t.is_boundary(x, y)) {
        const int leaf = internal + detail::boundary_index(n, x, y);
        tree.adjacency[static_cast<std::size_t>(leaf)].push_back(f);
        adj.push_back(leaf);
        continue;
      }
      const auto key = detail::edge_key(n, x, y);
      if (auto it = pending.find(key); it != pending.end()) {
        const auto [g, slot] = it->second;
        tree.adjacency[static_cast<std::size_t>(g)][slot] = f;
        adj.push_back(g);
        pending.erase(it);
      } else {
        pending.emplace(key, std::make_pair(f, adj.size()));
        adj.push_back(-1);
      }
    }
  }
  return tree;
}

/// Violated DualTree invariants; empty when the structure is a plane ternary
/// tree matching its triangulation.
inline std::vector<std::string> check_dual_tree(const DualTree& tree) {
  std::vector<std::string> problems;
  const int n = tree.polygon_size;
  if (tree.internal_count() != n - 2) problems.push_back("internal node count != n-2");
  if (tree.leaf_count() != n) problems.push_back("leaf count != n");
  std::size_t edge_ends = 0;
  for (int v = 0; v < static_cast<int>(tree.adjacency.size()); ++v) {
    const auto& adj = tree.adjacency[static_cast<std::size_t>(v)];
    edge_ends += adj.size();
    const std::size_t want = tree.is_leaf(v) ? 1 : 3;
    if (adj.size() != want) problems.push_back("node " + std::to_string(v) + " has wrong degree");
    for (int u : adj) {
      if (u < 0 || u >= static_cast<int>(tree.adjacency.size())) {
        problems.push_back("node " + std::to_string(v) + " has a dangling neighbor");
        continue;
      }
      const auto& back = tree.adjacency[static_cast<std::size_t>(u)];
      if (std::find(back.begin(), back.end(), v) == back.end())
        problems.push_back("adjacency " + std::to_string(v) + "-" + std::to_string(u) + " not symmetric");
      if (!tree.is_leaf(v) && !tree.is_leaf(u)) {
        const Face& f = tree.faces[static_cast<std::size_t>(v)];
        const Face& g = tree.faces[static_cast<std::size_t>(u)];
        const std::array<Vertex, 3> fv{f.a, f.b, f.c};
        int shared = 0;
        for (Vertex x : fv) shared += (x == g.a || x == g.b || x == g.c) ? 1 : 0;
        if (shared != 2) problems.push_back("adjacent faces do not share an edge");
      }
    }
  }
  if (edge_ends != 2 * (tree.adjacency.size() - 1)) problems.push_back("edge count is not nodes-1");
  // Connectivity: a graph with nodes-1 edges that is connected is a tree.
  if (!tree.adjacency.empty()) {
    std::vector<char> seen(tree.adjacency.size(), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int u : tree.adjacency[static_cast<std::size_t>(v)]) {
        if (u < 0 || u >= static_cast<int>(seen.size()) || seen[static_cast<std::size_t>(u)]) continue;
        seen[static_cast<std::size_t>(u)] = 1;
        ++reached;
        stack.push_back(u);
      }
    }
    if (reached != tree.adjacency.size()) problems.push_back("dual tree is disconnected");
  }
  for (int f = 0; f < tree.internal_count(); ++f) {
    const auto& adj = tree.adjacency[static_cast<std::size_t>(f)];
    const bool has_leaf = std::any_of(adj.begin(), adj.end(), [&](int u) { return tree.is_leaf(u); });
    if (has_leaf == tree.faces[static_cast<std::size_t>(f)].interior)
      problems.push_back("face " + std::to_string(f) + " interior flag disagrees with leaf adjacency");
  }
  return problems;
}

// ---------------------------------------------------------------------------
// Construction plans

/// Expression tree over Leaf / Apply(W|Z) / Merge stored in post-order:
/// children always precede their parent and the root is the last node.
class ConstructionPlan {
 public:
  enum class Kind : std::uint8_t { Leaf, Apply, Merge };
  using NodeId = std::int32_t;

  struct Node {
    Kind kind = Kind::Leaf;
    Op op = Op::W;
    NodeId left = -1;   // Apply child, or Merge left operand
    NodeId right = -1;  // Merge right operand
    std::optional<BoundaryEdge> bottom;  // edge in the decomposed triangulation, when known
  };

  NodeId add_leaf(std::optional<BoundaryEdge> bottom = std::nullopt) {
    nodes_.push_back({Kind::Leaf, Op::W, -1, -1, bottom});
    return last();
  }

  NodeId add_apply(Op op, NodeId child, std::optional<BoundaryEdge> bottom = std::nullopt) {
    require_existing(child);
    nodes_.push_back({Kind::Apply, op, child, -1, bottom});
    return last();
  }

  NodeId add_merge(NodeId left, NodeId right, std::optional<BoundaryEdge> bottom = std::nullopt) {
    require_existing(left);
    require_existing(right);
    nodes_.push_back({Kind::Merge, Op::W, left, right, bottom});
    return last();
  }

  static ConstructionPlan leaf() {
    ConstructionPlan p;
    p.add_leaf();
    return p;
  }

  static ConstructionPlan apply(Op op, ConstructionPlan child) {
    const NodeId c = child.root();
    child.add_apply(op, c);
    return child;
  }

  static ConstructionPlan merge(const ConstructionPlan& left, const ConstructionPlan& right) {
    ConstructionPlan p = left;
    const NodeId l = p.root();
    const auto offset = static_cast<NodeId>(p.nodes_.size());
    for (Node node : right.nodes_) {
      if (node.left >= 0) node.left += offset;
      if (node.right >= 0) node.right += offset;
      p.nodes_.push_back(node);
    }
    p.add_merge(l, p.root());
    return p;
  }

  /// Apply-chain for an op sequence in application order: ops[0] acts on the
  /// bare edge first.
  static ConstructionPlan chain(std::span<const Op> ops) {
    ConstructionPlan p;
    NodeId cur = p.add_leaf();
    for (Op op : ops) cur = p.add_apply(op, cur);
    return p;
  }

  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  const Node& node(NodeId id) const { return nodes_.at(static_cast<std::size_t>(id)); }
  NodeId root() const {
    if (nodes_.empty()) throw std::logic_error("empty construction plan");
    return last();
  }
  bool empty() const noexcept { return nodes_.empty(); }
  std::size_t size() const noexcept { return nodes_.size(); }

  std::size_t count(Kind k) const {
    return static_cast<std::size_t>(
        std::count_if(nodes_.begin(), nodes_.end(), [k](const Node& n) { return n.kind == k; }));
  }

  /// Vertices of the evaluated triangulation: applies + merges + 2.
  int vertex_count() const { return static_cast<int>(count(Kind::Apply) + count(Kind::Merge)) + 2; }

  /// Merges whose operands are both non-leaves; these are the only places a
  /// prospective interior triangle is created.
  std::size_t proper_merge_count() const {
    std::size_t k = 0;
    for (const auto& n : nodes_)
      if (n.kind == Kind::Merge && nodes_[static_cast<std::size_t>(n.left)].kind != Kind::Leaf &&
          nodes_[static_cast<std::size_t>(n.right)].kind != Kind::Leaf)
        ++k;
    return k;
  }

  /// Post-order node ids reachable from the root. Hand-built plans may carry
  /// unreachable nodes; evaluation only walks these.
  std::vector<char> reachable() const {
    std::vector<char> mark(nodes_.size(), 0);
    if (mark.empty()) return mark;
    mark.back() = 1;
    for (std::size_t i = nodes_.size(); i-- > 0;) {
      if (!mark[i]) continue;
      const Node& n = nodes_[i];
      if (n.left >= 0) mark[static_cast<std::size_t>(n.left)] = 1;
      if (n.right >= 0) mark[static_cast<std::size_t>(n.right)] = 1;
    }
    return mark;
  }

  /// Nested s-expression, e.g. (merge (apply W (leaf)) (leaf)).
  std::string to_sexpr() const {
    std::string out;
    if (nodes_.empty()) return out;
    // Work items are node ids (>= 0) or literal text pushed as negative
    // markers: -1 = ")", -2 = " ".
    std::vector<NodeId> stack{root()};
    while (!stack.empty()) {
      const NodeId id = stack.back();
      stack.pop_back();
      if (id == -1) {
        out += ')';
        continue;
      }
      if (id == -2) {
        out += ' ';
        continue;
      }
      const Node& n = node(id);
      switch (n.kind) {
        case Kind::Leaf:
          out += "(leaf)";
          break;
        case Kind::Apply:
          out += "(apply ";
          out += to_char(n.op);
          out += ' ';
          stack.push_back(-1);
          stack.push_back(n.left);
          break;
        case Kind::Merge:
          out += "(merge ";
          stack.push_back(-1);
          stack.push_back(n.right);
          stack.push_back(-2);
          stack.push_back(n.left);
          break;
      }
    }
    return out;
  }

  static ConstructionPlan parse_sexpr(std::string_view text);

 private:
  NodeId last() const { return static_cast<NodeId>(nodes_.size()) - 1; }
  void require_existing(NodeId id) const {
    if (id < 0 || id >= static_cast<NodeId>(nodes_.size()))
      throw std::invalid_argument("construction plan: child id out of range");
  }

  std::vector<Node> nodes_;
};

namespace detail {

inline void skip_space(std::string_view s, std::size_t& i) {
  while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\n' || s[i] == '\r')) ++i;
}

inline std::string_view read_word(std::string_view s, std::size_t& i) {
  const std::size_t start = i;
  while (i < s.size() && s[i] != ' ' && s[i] != '(' && s[i] != ')' && s[i] != '\t' && s[i] != '\n' && s[i] != '\r')
    ++i;
  return s.substr(start, i - start);
}

[[noreturn]] inline void sexpr_error(std::size_t pos, const std::string& what) {
  throw std::invalid_argument("plan s-expression at offset " + std::to_string(pos) + ": " + what);
}

}  // namespace detail

inline ConstructionPlan ConstructionPlan::parse_sexpr(std::string_view text) {
  // Shift-reduce over the token stream: an open frame collects child ids
  // until its closing paren.
  struct Open {
    Kind kind;
    Op op;
    std::vector<NodeId> children;
  };
  ConstructionPlan plan;
  std::vector<Open> stack;
  std::optional<NodeId> result;
  std::size_t i = 0;
  for (;;) {
    detail::skip_space(text, i);
    if (i >= text.size()) break;
    if (result && stack.empty()) detail::sexpr_error(i, "trailing input");
    if (text[i] == '(') {
      ++i;
      detail::skip_space(text, i);
      const auto head = detail::read_word(text, i);
      Open frame{Kind::Leaf, Op::W, {}};
      if (head == "leaf") {
        frame.kind = Kind::Leaf;
      } else if (head == "apply") {
        frame.kind = Kind::Apply;
        detail::skip_space(text, i);
        const auto op = detail::read_word(text, i);
        if (op.size() != 1) detail::sexpr_error(i, "expected W or Z");
        try {
          frame.op = op_from_char(op[0]);
        } catch (const std::invalid_argument&) {
          detail::sexpr_error(i, "expected W or Z");
        }
      } else if (head == "merge") {
        frame.kind = Kind::Merge;
      } else {
        detail::sexpr_error(i, "unknown head '" + std::string(head) + "'");
      }
      stack.push_back(std::move(frame));
    } else if (text[i] == ')') {
      ++i;
      if (stack.empty()) detail::sexpr_error(i, "unbalanced ')'");
      Open frame = std::move(stack.back());
      stack.pop_back();
      const std::size_t want = frame.kind == Kind::Leaf ? 0 : frame.kind == Kind::Apply ? 1 : 2;
      if (frame.children.size() != want) detail::sexpr_error(i, "wrong number of operands");
      NodeId id;
      switch (frame.kind) {
        case Kind::Leaf: id = plan.add_leaf(); break;
        case Kind::Apply: id = plan.add_apply(frame.op, frame.children[0]); break;
        default: id = plan.add_merge(frame.children[0], frame.children[1]); break;
      }
      if (stack.empty())
        result = id;
      else
        stack.back().children.push_back(id);
    } else {
      detail::sexpr_error(i, "unexpected character");
    }
  }
  if (!stack.empty() || !result) detail::sexpr_error(i, "incomplete expression");
  return plan;
}

// ---------------------------------------------------------------------------
// Decomposition and evaluation

struct RootedTriangulation {
  Triangulation tri;
  BoundaryEdge bottom;
};

/// Construction plan for (t, bottom). The face on each bottom edge (p, q)
/// with apex v becomes Merge(plan(p, v), plan(v, q)); a bare-edge left
/// operand turns the node into Apply(W, .), a bare-edge right operand into
/// Apply(Z, .), and two bare edges into Apply(W, Leaf).
inline ConstructionPlan decompose(const Triangulation& t, BoundaryEdge bottom) {
  require_valid(t);
  detail::require_bottom(t, bottom, "decompose");
  ConstructionPlan plan;
  const int n = t.size();
  if (n == 2) {
    plan.add_leaf(bottom);
    return plan;
  }

  // Third vertices of the (one or two) faces on each edge.
  std::unordered_map<std::uint64_t, std::array<Vertex, 2>> apexes;
  apexes.reserve(static_cast<std::size_t>(3 * n));
  auto record = [&](Vertex x, Vertex y, Vertex apex) {
    auto [it, inserted] = apexes.try_emplace(detail::edge_key(n, x, y), std::array<Vertex, 2>{apex, -1});
    if (!inserted) it->second[1] = apex;
  };
  for (const Face& f : faces(t)) {
    record(f.a, f.b, f.c);
    record(f.b, f.c, f.a);
    record(f.a, f.c, f.b);
  }

  // Sub-polygons are arcs walked in direction `dir` from q to p.
  const int dir = (bottom.b2 == (bottom.b1 + 1) % n) ? 1 : -1;
  auto step = [&](Vertex v) { return ((v + dir) % n + n) % n; };
  auto offset = [&](Vertex from, Vertex x) { return (((x - from) * dir) % n + n) % n; };
  auto is_bare = [&](Vertex p, Vertex q) { return p == step(q); };
  auto apex_of = [&](Vertex p, Vertex q) {
    const int len = offset(q, p) + 1;
    for (Vertex x : apexes.at(detail::edge_key(n, p, q))) {
      if (x < 0) continue;
      const int off = offset(q, x);
      if (off >= 1 && off <= len - 2) return x;
    }
    throw std::logic_error("decompose: no face on the inner side of a chord");
  };

  using NodeId = ConstructionPlan::NodeId;
  enum class Shape : std::uint8_t { Fresh, LeftBare, RightBare, Both };
  struct Frame {
    Vertex p, q, apex;
    Shape shape;
  };
  std::vector<Frame> stack{{bottom.b1, bottom.b2, -1, Shape::Fresh}};
  std::vector<NodeId> done;
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    const BoundaryEdge here{f.p, f.q};
    if (f.shape == Shape::Fresh) {
      if (is_bare(f.p, f.q)) {
        done.push_back(plan.add_leaf(here));
        continue;
      }
      const Vertex v = apex_of(f.p, f.q);
      const bool left_bare = is_bare(f.p, v);
      const bool right_bare = is_bare(v, f.q);
      if (left_bare && right_bare) {
        const NodeId leaf = plan.add_leaf(BoundaryEdge{v, f.q});
        done.push_back(plan.add_apply(Op::W, leaf, here));
      } else if (left_bare) {
        stack.push_back({f.p, f.q, v, Shape::LeftBare});
        stack.push_back({v, f.q, -1, Shape::Fresh});
      } else if (right_bare) {
        stack.push_back({f.p, f.q, v, Shape::RightBare});
        stack.push_back({f.p, v, -1, Shape::Fresh});
      } else {
        stack.push_back({f.p, f.q, v, Shape::Both});
        stack.push_back({v, f.q, -1, Shape::Fresh});
        stack.push_back({f.p, v, -1, Shape::Fresh});
      }
      continue;
    }
    if (f.shape == Shape::Both) {
      const NodeId r = done.back();
      done.pop_back();
      const NodeId l = done.back();
      done.pop_back();
      done.push_back(plan.add_merge(l, r, here));
    } else {
      const NodeId c = done.back();
      done.pop_back();
      done.push_back(plan.add_apply(f.shape == Shape::LeftBare ? Op::W : Op::Z, c, here));
    }
  }
  return plan;
}

/// Decomposition at the canonical bottom edge (0, 1).
inline ConstructionPlan decompose(const Triangulation& t) { return decompose(t, BoundaryEdge{0, 1}); }

/// Rebuilds the rooted triangulation a plan describes, in the canonical
/// counterclockwise labeling produced by the operations.
inline RootedTriangulation evaluate_plan(const ConstructionPlan& plan) {
  const auto& nodes = plan.nodes();
  if (nodes.empty()) throw std::invalid_argument("evaluate_plan: empty plan");
  const auto live = plan.reachable();
  std::vector<std::optional<RootedTriangulation>> value(nodes.size());
  auto take = [&](ConstructionPlan::NodeId id) {
    auto& slot = value[static_cast<std::size_t>(id)];
    if (!slot) throw std::invalid_argument("evaluate_plan: operand used twice");
    RootedTriangulation r = std::move(*slot);
    slot.reset();
    return r;
  };
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!live[i]) continue;
    const auto& node = nodes[i];
    switch (node.kind) {
      case ConstructionPlan::Kind::Leaf:
        value[i] = RootedTriangulation{Triangulation::degenerate(), BoundaryEdge{0, 1}};
        break;
      case ConstructionPlan::Kind::Apply: {
        auto child = take(node.left);
        auto grown = apply_op(node.op, child.tri, child.bottom);
        value[i] = RootedTriangulation{std::move(grown.tri), grown.bottom};
        break;
      }
      case ConstructionPlan::Kind::Merge: {
        auto l = take(node.left);
        auto r = take(node.right);
        auto m = merge(l.tri, l.bottom, r.tri, r.bottom);
        value[i] = RootedTriangulation{std::move(m.tri), m.bottom};
        break;
      }
    }
  }
  return std::move(*value.back());
}

/// Exponent form Z^{z_m} W^{w_m} ... Z^{z_1} W^{w_1} of a strip, read in
/// application order.
struct StripWord {
  std::vector<Op> ops;  // ops[0] applied first
  std::vector<int> w;   // w[j] = w_{j+1}
  std::vector<int> z;   // z[j] = z_{j+1}
};

/// Run-length exponents of an op sequence: alternating W-runs and Z-runs,
/// starting with a (possibly empty) W-run and ending with a (possibly empty)
/// Z-run.
inline StripWord strip_word(std::span<const Op> ops) {
  StripWord word;
  word.ops.assign(ops.begin(), ops.end());
  std::size_t i = 0;
  while (i < ops.size()) {
    int wr = 0, zr = 0;
    while (i < ops.size() && ops[i] == Op::W) ++wr, ++i;
    while (i < ops.size() && ops[i] == Op::Z) ++zr, ++i;
    word.w.push_back(wr);
    word.z.push_back(zr);
  }
  return word;
}

class NotAStrip : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// W/Z word that rebuilds (t, bottom) from a bare edge. Requires
/// |I(t)| = 0 and a bottom edge on an end triangle of the strip (a face with
/// two boundary edges); no W/Z word can end on a middle triangle.
inline StripWord strip_decompose(const Triangulation& t, BoundaryEdge bottom) {
  require_valid(t);
  detail::require_bottom(t, bottom, "strip_decompose");
  if (interior_count(t) > 0) throw NotAStrip("strip_decompose: triangulation has interior triangles");
  const auto plan = decompose(t, bottom);
  std::vector<Op> ops;
  ops.reserve(plan.size());
  for (const auto& node : plan.nodes()) {
    if (node.kind == ConstructionPlan::Kind::Merge)
      throw NotAStrip("strip_decompose: bottom edge lies on a middle triangle of the strip");
    if (node.kind == ConstructionPlan::Kind::Apply) ops.push_back(node.op);
  }
  return strip_word(ops);
}

}  // namespace isingtri
