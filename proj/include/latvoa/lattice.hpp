// Exact lattice, cone, fan and reflexive-polytope arithmetic.
#pragma once

#include <compare>
#include <map>
#include <optional>
#include <vector>

#include "latvoa/common.hpp"

namespace latvoa {

// Which of the two dual lattices a vector lives in.
enum class Side : uint8_t { M, N };

inline Side other_side(Side s) { return s == Side::M ? Side::N : Side::M; }

struct LatticeVector {
  Side side = Side::M;
  std::vector<int64_t> c;

  int rank() const { return static_cast<int>(c.size()); }
  bool is_zero() const;
  auto operator<=>(const LatticeVector&) const = default;
};

LatticeVector lv(Side side, std::vector<int64_t> coords);
LatticeVector add(const LatticeVector& a, const LatticeVector& b);
LatticeVector sub(const LatticeVector& a, const LatticeVector& b);
LatticeVector scale(int64_t k, const LatticeVector& a);
LatticeVector negate(const LatticeVector& a);
std::string to_string(const LatticeVector& v);

// Integral pairing of an M-vector against an N-vector (either order).
int64_t pairing(const LatticeVector& a, const LatticeVector& b);

int64_t dot(const std::vector<int64_t>& a, const std::vector<int64_t>& b);

// Divides by the gcd of the coordinates; zero stays zero.
LatticeVector primitivize(const LatticeVector& v);

struct Cone {
  Side side = Side::N;  // side of the generators
  int rank = 0;
  std::vector<LatticeVector> generators;     // primitive, sorted, deduped
  std::vector<LatticeVector> facet_normals;  // dual side; v in cone iff v.n >= 0 for all n
  std::optional<LatticeVector> degree;       // deg_C on the dual side, if Gorenstein

  int dim() const;  // dimension of the linear span of the generators
  bool is_simplicial() const { return dim() == static_cast<int>(generators.size()); }
  auto operator<=>(const Cone&) const = default;
};

// Builds a cone from generator coordinate lists: primitivizes, dedupes and
// caches facet normals. Rank above 4 is rejected.
Cone make_cone(Side side, int rank, const std::vector<std::vector<int64_t>>& gens);

// Dual cone {v on the other side : v.g >= 0 for all generators g}, by double
// description over the generator half-spaces. The result may be non-pointed;
// lineality directions appear as opposite generator pairs.
Cone dual_cone(const Cone& c);

bool cone_contains(const Cone& c, const LatticeVector& v);

// Unique integral vector pairing to 1 with every generator, or NotGorenstein.
// For non-spanning generator sets the solution in the generator row span is
// used, which makes the choice deterministic.
LatticeVector degree_vector(const Cone& c);

// Box elements of a simplicial cone with a degree vector: all n in C with
// n - g outside C for every generator g. Always contains 0.
std::vector<LatticeVector> box_elements(const Cone& c);

// Lattice index [N : Z<generators>] of a simplicial full-dimensional cone.
int64_t cone_lattice_index(const Cone& c);

struct Fan {
  Side side = Side::N;
  int rank = 0;
  std::vector<Cone> cones;  // closed under faces, pairwise intersections are faces

  std::vector<const Cone*> maximal_cones() const;
  bool contains_point(const LatticeVector& v) const;  // member of the support |fan|
  // True iff some cone contains both vectors.
  bool common_cone(const LatticeVector& a, const LatticeVector& b) const;
  // Same test after extending every cone by the +-deg_star line (whole-lattice
  // degeneration: cones become C* + R deg*).
  bool common_cone_mod(const LatticeVector& a, const LatticeVector& b,
                       const LatticeVector& deg_star) const;
};

// Validates conditions (a) pointedness, (b) intersections are faces,
// (c) closure under faces, then returns the fan.
Fan make_fan(Side side, int rank, const std::vector<Cone>& cones);

// All faces of a cone (including itself and the zero cone), as generator subsets
// cut out by facet normals.
std::vector<Cone> cone_faces(const Cone& c);

// Intersection of two cones (their common face when both lie in a fan).
Cone intersect_cones(const Cone& a, const Cone& b);

struct Polytope {
  Side side = Side::M;
  int rank = 0;
  std::vector<LatticeVector> points;  // lattice points, includes all vertices

  std::vector<LatticeVector> vertices() const;
};

Polytope make_polytope(Side side, int rank, const std::vector<std::vector<int64_t>>& pts);

// Polar dual {n : m.n >= -1 for all m}: returns the dual's vertex set, or
// NotReflexive when some dual vertex is non-integral. Requires 0 interior.
Polytope polar_dual(const Polytope& p);

// All lattice points of the polytope (bounding-box enumeration + facet test).
std::vector<LatticeVector> lattice_points(const Polytope& p);

// Cone over P x {1} in rank+1; generators are the lifted points.
Cone cone_over_polytope(const Polytope& p);

struct HeightCertificate {
  bool valid = false;
  std::string violation;  // empty when valid
};

// Checks that h extends to a function linear on each maximal cone and strictly
// convex across cones, by exact rational checks on all generator pairs.
HeightCertificate validate_height_function(const Fan& fan,
                                           const std::map<LatticeVector, Rational>& h);

// Enumerates lattice points v on `side` with height.v == h and v contained in
// the given cone, where every point at height 1 of the cone lies in the convex
// hull of `height_one` (used to bound the search box).
std::vector<LatticeVector> cone_slice_points(const Cone& cone, const LatticeVector& height,
                                             int64_t h,
                                             const std::vector<LatticeVector>& height_one);

}  // namespace latvoa
