#ifndef TREESIB_PRESENTATION_HPP
#define TREESIB_PRESENTATION_HPP

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "treesib/finite_tree.hpp"

namespace treesib {

// A decoration sequence assigns a finite rooted tree to every spine position
// n = 0, 1, 2, ... of an arm.  Either eventually periodic (explicit prefix,
// then a nonempty period repeated forever) or generated by an affine size
// rule n -> a*n + b applied to a fixed shape (Path(m) = m edges rooted at an
// end, Star(m) = m leaves; m = 0 is the trivial tree).
class DecorationSeq {
 public:
  enum class Kind { Periodic, Generated };
  enum class Shape { Path, Star };

  static DecorationSeq periodic(std::vector<FiniteRootedTree> prefix,
                                std::vector<FiniteRootedTree> period);
  // a = 0 carries no growth and is normalized to periodic form.
  static DecorationSeq generated(Shape shape, long long a, long long b);

  Kind kind() const { return kind_; }
  bool is_periodic() const { return kind_ == Kind::Periodic; }
  bool is_generated() const { return kind_ == Kind::Generated; }

  const std::vector<FiniteRootedTree>& prefix() const { return prefix_; }
  const std::vector<FiniteRootedTree>& period() const { return period_; }
  Shape shape() const { return shape_; }
  long long slope() const { return slope_; }
  long long offset() const { return offset_; }

  // The decoration at spine position n >= 0.
  FiniteRootedTree at(long long n) const;
  // True when at(n) is the single-vertex tree for every n >= from.
  bool trivial_from(long long from = 0) const;

 private:
  DecorationSeq() = default;
  Kind kind_ = Kind::Periodic;
  std::vector<FiniteRootedTree> prefix_;
  std::vector<FiniteRootedTree> period_;
  Shape shape_ = Shape::Path;
  long long slope_ = 0;
  long long offset_ = 0;
};

FiniteRootedTree shape_tree(DecorationSeq::Shape shape, long long size);

struct Arm {
  std::string name;
  int attach = 0;  // core vertex the spine hangs from
  DecorationSeq seq;
};

// Address of a vertex in the presented (infinite) tree.  The decoration root
// at (arm, pos) is identified with the spine vertex, so decoration addresses
// carry node >= 1 only.  Unused fields are normalized so the default
// comparison is a total order.
struct Vertex {
  enum class Kind : int { Core = 0, Spine = 1, Dec = 2 };
  Kind kind = Kind::Core;
  int core = 0;       // Core only
  int arm = -1;       // Spine/Dec
  long long pos = 0;  // Spine/Dec
  int node = 0;       // Dec only, >= 1

  static Vertex core_vertex(int c) { return Vertex{Kind::Core, c, -1, 0, 0}; }
  static Vertex spine(int arm, long long pos) {
    return Vertex{Kind::Spine, -1, arm, pos, 0};
  }
  static Vertex dec(int arm, long long pos, int node) {
    return Vertex{Kind::Dec, -1, arm, pos, node};
  }
  auto operator<=>(const Vertex&) const = default;
};

struct End {
  int arm = 0;
  auto operator<=>(const End&) const = default;
};

// Infinite family of spine positions carrying degree >= 3, all on one arm.
struct RakeWitness {
  int arm = 0;
  long long start = 0;
  long long stride = 1;
};

struct NearlyFiniteReport {
  bool value = false;
  std::optional<RakeWitness> rake;  // present ⟺ value is false
};

struct EndRegularity {
  bool regular = false;
  // Regular: equimorphy classes among decorations plus one core-side class.
  int class_count = 0;
  // NonRegular: consecutive position pairs (n, n') with the decoration at n
  // embedding into the one at n' but not conversely.
  std::vector<std::pair<long long, long long>> witness_pairs;
};

struct IsoVerdict {
  enum class Kind { Isomorphic, Distinct, AgreeToDepth };
  Kind kind = Kind::Distinct;
  // Distinct: least depth whose truncation codes differ.
  // Isomorphic / AgreeToDepth: the deepest probed depth.
  int depth = 0;
};

// A finite ball of the presented tree, rooted at the basepoint, with the
// address of every ball vertex.
struct Truncation {
  FiniteRootedTree tree;
  std::vector<Vertex> vertex_of;
  std::optional<int> index_of(const Vertex& v) const;
};

// Finite core tree (rooted at the basepoint, core vertex 0) plus decorated
// arms.  Encodes an infinite locally finite tree with one end per arm.
class TreePresentation {
 public:
  TreePresentation(FiniteRootedTree core, std::vector<Arm> arms,
                   std::vector<std::string> core_names = {},
                   std::string name = "");

  const FiniteRootedTree& core() const { return core_; }
  const std::vector<Arm>& arms() const { return arms_; }
  const Arm& arm(int i) const;
  int arm_count() const { return static_cast<int>(arms_.size()); }
  Vertex basepoint() const { return Vertex::core_vertex(0); }
  const std::string& name() const { return name_; }
  const std::string& core_name(int c) const;
  const std::vector<std::string>& core_names() const { return core_names_; }
  std::optional<int> core_index(std::string_view name) const;
  std::optional<int> arm_index(std::string_view name) const;

  bool valid_vertex(const Vertex& v) const;
  FiniteRootedTree decoration_at(int arm, long long pos) const;
  std::vector<Vertex> neighbors(const Vertex& v) const;
  int degree(const Vertex& v) const;

  int core_distance(int a, int b) const;
  int core_diameter() const;

 private:
  FiniteRootedTree core_;
  std::vector<Arm> arms_;
  std::vector<std::string> core_names_;
  std::string name_;
  std::vector<std::vector<int>> core_adj_;
  std::vector<std::vector<int>> arms_at_;
  std::vector<std::vector<int>> core_dist_;
};

// Ball of radius d around the basepoint, rooted there.  Vertices are visited
// breadth-first in a fixed neighbor order, so the result is deterministic.
Truncation truncate_with_map(const TreePresentation& p, int d);
FiniteRootedTree truncate(const TreePresentation& p, int d);

long long tree_distance(const TreePresentation& p, const Vertex& u,
                        const Vertex& v);

std::vector<End> ends(const TreePresentation& p);

// Nearly finite ⟺ finite tree with finitely many rays attached ⟺ no arm
// carries nontrivial decorations at infinitely many positions.
NearlyFiniteReport is_nearly_finite(const TreePresentation& p);
std::optional<RakeWitness> find_rake(const TreePresentation& p);

// The branch subtree hanging off spine position n >= 1 of an arm: the
// decoration rooted at its gluing vertex.  Position 0 faces the core and is
// not a finite branch; requesting it is Unsupported.
FiniteRootedTree branch_subtree(const TreePresentation& p, int arm,
                                long long n);

EndRegularity end_regularity(const TreePresentation& p, int arm);

// Compares canonical codes of truncations at depths 0..D* where D* covers
// both cores, prefixes, two full period cycles and decoration depth.  Codes
// that differ prove Distinct; full agreement proves Isomorphic for periodic
// presentations and is reported as AgreeToDepth when a generated arm is
// involved.
IsoVerdict is_isomorphic_presentation(const TreePresentation& p,
                                      const TreePresentation& q);

// True when the presented tree is a one-way infinite path.
bool is_ray(const TreePresentation& p);

// lcm of all periodic arm period lengths (at least 1).
long long period_lcm(const TreePresentation& p);

}  // namespace treesib

#endif
