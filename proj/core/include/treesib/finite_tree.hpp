#ifndef TREESIB_FINITE_TREE_HPP
#define TREESIB_FINITE_TREE_HPP

#include <compare>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace treesib {

enum class ErrorKind {
  InvalidArgument,
  Unsupported,
  NotValidated,
  IsElliptic,
  NotParabolic,
  IsRay,
  NonRegularDirection,
  Internal,
};

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

private:
  ErrorKind kind_;
};

// Finite tree with a distinguished root. Vertices are dense integers
// 0..size()-1, the root is always vertex 0, and parent(v) < v is not
// required; children keep construction order.
class FiniteRootedTree {
public:
  // parents[0] must be -1; every other entry names an existing vertex and
  // the relation must be acyclic and connected.
  explicit FiniteRootedTree(std::vector<int> parents);

  static FiniteRootedTree single();
  // Chain with `edges` edges rooted at one end; edges == 0 gives single().
  static FiniteRootedTree path(int edges);
  // Root with `leaves` children; leaves == 0 gives single().
  static FiniteRootedTree star(int leaves);
  // Balanced-parenthesis form, "()" is a single vertex. Vertices are
  // numbered in parse (depth-first) order, so parse(encode()) == *this.
  static FiniteRootedTree parse(std::string_view code);

  int size() const { return static_cast<int>(parents_.size()); }
  int root() const { return 0; }
  int parent(int v) const { return parents_.at(v); }
  const std::vector<int>& children(int v) const { return children_.at(v); }
  int degree(int v) const;
  int height() const;
  int depth(int v) const;
  bool trivial() const { return size() == 1; }

  std::string encode() const;

  bool operator==(const FiniteRootedTree& other) const {
    return parents_ == other.parents_;
  }

private:
  std::vector<int> parents_;
  std::vector<std::vector<int>> children_;
};

// Equal codes characterize rooted isomorphism; text.size() == 2 * vertices.
struct CanonicalCode {
  std::string text;
  auto operator<=>(const CanonicalCode&) const = default;
};

CanonicalCode canonical_code(const FiniteRootedTree& t);

bool is_isomorphic_rooted(const FiniteRootedTree& a, const FiniteRootedTree& b);

// Image vertex in b for every vertex of a, or empty.
using VertexMap = std::vector<int>;

// Injective adjacency-preserving map with root(a) -> root(b). Such a map
// always sends children to children, so the search matches child lists
// via maximum bipartite matching.
std::optional<VertexMap> embeds_rooted(const FiniteRootedTree& a,
                                       const FiniteRootedTree& b);

// Injective adjacency-preserving map with no root constraint; realized by
// re-anchoring b at every vertex (the source root choice is immaterial).
std::optional<VertexMap> embeds_unrooted(const FiniteRootedTree& a,
                                         const FiniteRootedTree& b);

}  // namespace treesib

#endif
