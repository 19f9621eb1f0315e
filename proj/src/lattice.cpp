#include "latvoa/lattice.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace latvoa {

std::string rational_to_string(const Rational& r) {
  std::ostringstream os;
  os << numerator(r);
  if (denominator(r) != 1) os << "/" << denominator(r);
  return os.str();
}

Rational parse_rational(const std::string& s) {
  try {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(BigInt(s));
    BigInt num(s.substr(0, slash));
    BigInt den(s.substr(slash + 1));
    if (den == 0) throw InputError("zero denominator in '" + s + "'");
    return Rational(num, den);
  } catch (const std::exception& e) {
    throw InputError("cannot parse rational '" + s + "'");
  }
}

void Fnv64::feed_bytes(const void* data, std::size_t n) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h_ ^= p[i];
    h_ *= 1099511628211ull;
  }
}

void Fnv64::feed(const std::string& s) {
  feed(static_cast<uint64_t>(s.size()));
  feed_bytes(s.data(), s.size());
}

void Fnv64::feed(int64_t v) { feed(static_cast<uint64_t>(v)); }

void Fnv64::feed(uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
  feed_bytes(b, 8);
}

std::string Fnv64::hex() const {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 0; i < 16; ++i) out[15 - i] = digits[(h_ >> (4 * i)) & 0xf];
  return out;
}

bool LatticeVector::is_zero() const {
  return std::all_of(c.begin(), c.end(), [](int64_t x) { return x == 0; });
}

LatticeVector lv(Side side, std::vector<int64_t> coords) { return LatticeVector{side, std::move(coords)}; }

static void check_same_rank(const LatticeVector& a, const LatticeVector& b) {
  if (a.rank() != b.rank()) throw InputError("lattice vector rank mismatch");
}

LatticeVector add(const LatticeVector& a, const LatticeVector& b) {
  check_same_rank(a, b);
  if (a.side != b.side) throw InputError("cannot add vectors on opposite sides");
  LatticeVector r = a;
  for (int i = 0; i < a.rank(); ++i) r.c[i] += b.c[i];
  return r;
}

LatticeVector sub(const LatticeVector& a, const LatticeVector& b) { return add(a, negate(b)); }

LatticeVector scale(int64_t k, const LatticeVector& a) {
  LatticeVector r = a;
  for (auto& x : r.c) x *= k;
  return r;
}

LatticeVector negate(const LatticeVector& a) { return scale(-1, a); }

std::string to_string(const LatticeVector& v) {
  std::ostringstream os;
  os << "(";
  for (int i = 0; i < v.rank(); ++i) os << (i ? "," : "") << v.c[i];
  os << ")";
  return os.str();
}

int64_t dot(const std::vector<int64_t>& a, const std::vector<int64_t>& b) {
  if (a.size() != b.size()) throw InputError("rank mismatch in dot product");
  int64_t s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

int64_t pairing(const LatticeVector& a, const LatticeVector& b) {
  check_same_rank(a, b);
  if (a.side == b.side) throw InputError("pairing requires one M-vector and one N-vector");
  return dot(a.c, b.c);
}

LatticeVector primitivize(const LatticeVector& v) {
  int64_t g = 0;
  for (auto x : v.c) g = std::gcd(g, x < 0 ? -x : x);
  if (g <= 1) return v;
  LatticeVector r = v;
  for (auto& x : r.c) x /= g;
  return r;
}

// ---------------------------------------------------------------------------
// small dense rational elimination, used throughout this module

using RMat = std::vector<std::vector<Rational>>;

// Reduces to row echelon form in place; returns pivot column indices.
static std::vector<int> row_echelon(RMat& m) {
  std::vector<int> pivots;
  if (m.empty()) return pivots;
  int rows = static_cast<int>(m.size());
  int cols = static_cast<int>(m[0].size());
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int sel = -1;
    for (int i = r; i < rows; ++i)
      if (m[i][c] != 0) {
        sel = i;
        break;
      }
    if (sel < 0) continue;
    std::swap(m[r], m[sel]);
    Rational inv = Rational(1) / m[r][c];
    for (int j = c; j < cols; ++j) m[r][j] *= inv;
    for (int i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      Rational f = m[i][c];
      for (int j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

static int mat_rank(RMat m) { return static_cast<int>(row_echelon(m).size()); }

// Solves A x = b exactly. Returns one solution (free variables set to 0),
// or nullopt when inconsistent.
static std::optional<std::vector<Rational>> solve_system(const RMat& a,
                                                         const std::vector<Rational>& b) {
  int rows = static_cast<int>(a.size());
  int cols = rows ? static_cast<int>(a[0].size()) : 0;
  RMat aug(rows, std::vector<Rational>(cols + 1));
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) aug[i][j] = a[i][j];
    aug[i][cols] = b[i];
  }
  auto pivots = row_echelon(aug);
  for (std::size_t k = 0; k < pivots.size(); ++k)
    if (pivots[k] == cols) return std::nullopt;  // pivot in the rhs column
  std::vector<Rational> x(cols, Rational(0));
  for (std::size_t k = 0; k < pivots.size(); ++k) {
    int c = pivots[k];
    x[c] = aug[k][cols];
    for (int j = c + 1; j < cols; ++j) x[c] -= aug[k][j] * x[j];
  }
  // echelon is fully reduced, so back substitution above is already exact
  return x;
}

// Basis of the null space {x : A x = 0}.
static std::vector<std::vector<Rational>> null_space(const RMat& a) {
  int rows = static_cast<int>(a.size());
  int cols = rows ? static_cast<int>(a[0].size()) : 0;
  RMat m = a;
  auto pivots = row_echelon(m);
  std::vector<bool> is_pivot(cols, false);
  for (int c : pivots) is_pivot[c] = true;
  std::vector<std::vector<Rational>> basis;
  for (int free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<Rational> v(cols, Rational(0));
    v[free] = 1;
    for (int k = static_cast<int>(pivots.size()) - 1; k >= 0; --k) {
      int c = pivots[k];
      Rational s(0);
      for (int j = c + 1; j < cols; ++j) s += m[k][j] * v[j];
      v[c] = -s;
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

static std::vector<int64_t> make_integral(const std::vector<Rational>& v) {
  BigInt lcm = 1;
  for (const auto& x : v) lcm = lcm / gcd(lcm, denominator(x)) * denominator(x);
  std::vector<int64_t> out;
  out.reserve(v.size());
  BigInt g = 0;
  std::vector<BigInt> scaled;
  for (const auto& x : v) {
    BigInt s = numerator(x) * (lcm / denominator(x));
    g = gcd(g, s);
    scaled.push_back(s);
  }
  if (g == 0) g = 1;
  for (auto& s : scaled) out.push_back(static_cast<int64_t>(s / g));
  return out;
}

// ---------------------------------------------------------------------------
// cones

int Cone::dim() const {
  if (generators.empty()) return 0;
  RMat m;
  for (const auto& g : generators) {
    std::vector<Rational> row;
    for (auto x : g.c) row.emplace_back(x);
    m.push_back(std::move(row));
  }
  return mat_rank(std::move(m));
}

// Extreme rays of {x : a_i . x >= 0}: candidate rays are null directions of
// (rank-1)-subsets of the constraints; lineality directions contribute both signs.
static std::vector<LatticeVector> extreme_rays(Side side, int rank,
                                               const std::vector<LatticeVector>& normals) {
  std::set<LatticeVector> rays;
  auto feasible = [&](const std::vector<int64_t>& v) {
    for (const auto& n : normals)
      if (dot(n.c, v) < 0) return false;
    return true;
  };
  // lineality: null space of the full constraint matrix
  RMat all;
  for (const auto& n : normals) {
    std::vector<Rational> row;
    for (auto x : n.c) row.emplace_back(x);
    all.push_back(std::move(row));
  }
  if (all.empty()) all.push_back(std::vector<Rational>(rank, Rational(0)));
  for (const auto& dir : null_space(all)) {
    auto v = make_integral(dir);
    rays.insert(primitivize(lv(side, v)));
    for (auto& x : v) x = -x;
    rays.insert(primitivize(lv(side, v)));
  }
  int k = static_cast<int>(normals.size());
  std::vector<int> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  // all subsets of constraints of size rank-1 (rank <= 4 keeps this tiny)
  std::vector<int> subset;
  auto recurse = [&](auto&& self, int start, int need) -> void {
    if (need == 0) {
      RMat m;
      for (int i : subset) {
        std::vector<Rational> row;
        for (auto x : normals[i].c) row.emplace_back(x);
        m.push_back(std::move(row));
      }
      if (m.empty()) m.push_back(std::vector<Rational>(rank, Rational(0)));
      auto ns = null_space(m);
      if (ns.size() != 1) return;  // need exactly a line
      auto v = make_integral(ns[0]);
      LatticeVector cand = primitivize(lv(side, v));
      if (!cand.is_zero() && feasible(cand.c)) rays.insert(cand);
      auto neg = negate(cand);
      if (!neg.is_zero() && feasible(neg.c)) rays.insert(neg);
      return;
    }
    for (int i = start; i <= k - need; ++i) {
      subset.push_back(i);
      self(self, i + 1, need - 1);
      subset.pop_back();
    }
  };
  if (rank >= 1) recurse(recurse, 0, rank - 1);
  // drop rays that are positive combinations of others (non-extreme), rank<=2
  // subsets can produce interior candidates for degenerate inputs
  std::vector<LatticeVector> out(rays.begin(), rays.end());
  return out;
}

Cone make_cone(Side side, int rank, const std::vector<std::vector<int64_t>>& gens) {
  if (rank > 4) throw CapabilityError("cone arithmetic supports rank <= 4");
  Cone c;
  c.side = side;
  c.rank = rank;
  std::set<LatticeVector> gset;
  for (const auto& g : gens) {
    if (static_cast<int>(g.size()) != rank) throw InputError("generator rank mismatch");
    LatticeVector v = primitivize(lv(side, g));
    if (!v.is_zero()) gset.insert(v);
  }
  c.generators.assign(gset.begin(), gset.end());
  // facet normals = generators of the dual cone
  std::vector<LatticeVector> dual_gens = extreme_rays(other_side(side), rank, c.generators);
  c.facet_normals = std::move(dual_gens);
  return c;
}

Cone dual_cone(const Cone& c) {
  Cone d;
  d.side = other_side(c.side);
  d.rank = c.rank;
  d.generators = c.facet_normals;
  d.facet_normals = extreme_rays(c.side, c.rank, d.generators);
  return d;
}

bool cone_contains(const Cone& c, const LatticeVector& v) {
  if (v.side != c.side) throw InputError("membership test on the wrong side");
  for (const auto& n : c.facet_normals)
    if (dot(n.c, v.c) < 0) return false;
  // facet normals cut out the smallest cone containing the span; points outside
  // the span must still be rejected
  if (c.dim() < c.rank) {
    RMat m;
    std::vector<Rational> rhs;
    for (int i = 0; i < c.rank; ++i) {
      std::vector<Rational> row;
      for (const auto& g : c.generators) row.emplace_back(g.c[i]);
      m.push_back(std::move(row));
      rhs.emplace_back(v.c[i]);
    }
    auto sol = solve_system(m, rhs);
    if (!sol) return false;
    for (const auto& x : *sol)
      if (x < 0) return false;
  }
  return true;
}

LatticeVector degree_vector(const Cone& c) {
  if (c.generators.empty()) {
    return lv(other_side(c.side), std::vector<int64_t>(c.rank, 0));
  }
  // solve m . g = 1 for all generators; pick the solution inside the row span
  // of the generators so lower-dimensional cones get a deterministic answer
  RMat a;
  std::vector<Rational> b;
  for (const auto& g : c.generators) {
    std::vector<Rational> row;
    for (auto x : g.c) row.emplace_back(x);
    a.push_back(std::move(row));
    b.emplace_back(1);
  }
  int ngen = static_cast<int>(c.generators.size());
  // m = sum_i y_i g_i ; solve (G G^T) y = 1
  RMat gram(ngen, std::vector<Rational>(ngen));
  for (int i = 0; i < ngen; ++i)
    for (int j = 0; j < ngen; ++j) gram[i][j] = Rational(dot(c.generators[i].c, c.generators[j].c));
  auto y = solve_system(gram, b);
  if (!y) throw NotGorensteinError("no degree vector: gram system inconsistent");
  std::vector<Rational> m(c.rank, Rational(0));
  for (int i = 0; i < ngen; ++i)
    for (int k = 0; k < c.rank; ++k) m[k] += (*y)[i] * Rational(c.generators[i].c[k]);
  std::vector<int64_t> out(c.rank);
  for (int k = 0; k < c.rank; ++k) {
    if (denominator(m[k]) != 1)
      throw NotGorensteinError("degree vector is non-integral: " + rational_to_string(m[k]) +
                               " at coordinate " + std::to_string(k));
    out[k] = static_cast<int64_t>(numerator(m[k]));
  }
  LatticeVector deg = lv(other_side(c.side), out);
  for (const auto& g : c.generators)
    if (dot(deg.c, g.c) != 1) throw NotGorensteinError("degree vector check failed");
  return deg;
}

int64_t cone_lattice_index(const Cone& c) {
  int n = static_cast<int>(c.generators.size());
  if (n != c.rank || !c.is_simplicial())
    throw CapabilityError("lattice index needs a simplicial full-dimensional cone");
  // integer determinant by fraction-free elimination on a copy
  std::vector<std::vector<BigInt>> m(n, std::vector<BigInt>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m[i][j] = c.generators[i].c[j];
  BigInt det = 1, prev = 1;
  int sign = 1;
  for (int k = 0; k < n; ++k) {
    int sel = -1;
    for (int i = k; i < n; ++i)
      if (m[i][k] != 0) {
        sel = i;
        break;
      }
    if (sel < 0) return 0;
    if (sel != k) {
      std::swap(m[sel], m[k]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
    prev = m[k][k];
  }
  det = m[n - 1][n - 1] * sign;
  if (det < 0) det = -det;
  return static_cast<int64_t>(det);
}

std::vector<LatticeVector> box_elements(const Cone& c) {
  if (!c.is_simplicial()) throw CapabilityError("box elements require a simplicial cone");
  if (c.generators.empty()) return {lv(c.side, std::vector<int64_t>(c.rank, 0))};
  int ngen = static_cast<int>(c.generators.size());
  // n = sum alpha_i g_i with 0 <= alpha_i < 1: enumerate integer points of the
  // half-open parallelepiped via a bounding box in ambient coordinates
  std::vector<int64_t> lo(c.rank, 0), hi(c.rank, 0);
  for (const auto& g : c.generators)
    for (int k = 0; k < c.rank; ++k) {
      lo[k] += std::min<int64_t>(0, g.c[k]);
      hi[k] += std::max<int64_t>(0, g.c[k]);
    }
  std::vector<LatticeVector> out;
  std::vector<int64_t> cur(c.rank, 0);
  auto coords_in_box = [&](const LatticeVector& v) {
    // express v in generator coordinates, demand 0 <= alpha_i < 1
    RMat a;
    std::vector<Rational> b;
    for (int i = 0; i < c.rank; ++i) {
      std::vector<Rational> row;
      for (const auto& g : c.generators) row.emplace_back(g.c[i]);
      a.push_back(std::move(row));
      b.emplace_back(v.c[i]);
    }
    auto sol = solve_system(a, b);
    if (!sol) return false;
    // consistency for non-full-dimensional cones
    std::vector<Rational> back(c.rank, Rational(0));
    for (int i = 0; i < ngen; ++i)
      for (int k = 0; k < c.rank; ++k) back[k] += (*sol)[i] * Rational(c.generators[i].c[k]);
    for (int k = 0; k < c.rank; ++k)
      if (back[k] != Rational(v.c[k])) return false;
    for (const auto& alpha : *sol)
      if (alpha < 0 || alpha >= 1) return false;
    return true;
  };
  auto walk = [&](auto&& self, int pos) -> void {
    if (pos == c.rank) {
      LatticeVector v = lv(c.side, cur);
      if (coords_in_box(v)) out.push_back(v);
      return;
    }
    for (int64_t x = lo[pos]; x <= hi[pos]; ++x) {
      cur[pos] = x;
      self(self, pos + 1);
    }
  };
  walk(walk, 0);
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// fans

std::vector<Cone> cone_faces(const Cone& c) {
  std::set<Cone> faces;
  faces.insert(c);
  // every face is cut out by a subset of facet normals vanishing on it
  for (const auto& n : c.facet_normals) {
    std::vector<std::vector<int64_t>> kept;
    for (const auto& g : c.generators)
      if (dot(n.c, g.c) == 0) kept.push_back(g.c);
    faces.insert(make_cone(c.side, c.rank, kept));
  }
  // iterate to closure (faces of faces)
  bool grew = true;
  while (grew) {
    grew = false;
    std::set<Cone> next = faces;
    for (const auto& f : faces) {
      for (const auto& n : f.facet_normals) {
        std::vector<std::vector<int64_t>> kept;
        for (const auto& g : f.generators)
          if (dot(n.c, g.c) == 0) kept.push_back(g.c);
        Cone sub = make_cone(f.side, f.rank, kept);
        if (next.insert(sub).second) grew = true;
      }
    }
    faces.swap(next);
  }
  faces.insert(make_cone(c.side, c.rank, {}));
  return {faces.begin(), faces.end()};
}

// Intersection of two cones as a cone (H-representation join).
Cone intersect_cones(const Cone& a, const Cone& b) {
  std::vector<LatticeVector> normals = a.facet_normals;
  normals.insert(normals.end(), b.facet_normals.begin(), b.facet_normals.end());
  // also constrain to span(a) and span(b): add +-normals of each span
  auto span_constraints = [&](const Cone& c, std::vector<LatticeVector>& into) {
    RMat m;
    for (const auto& g : c.generators) {
      std::vector<Rational> row;
      for (auto x : g.c) row.emplace_back(x);
      m.push_back(std::move(row));
    }
    if (m.empty()) m.push_back(std::vector<Rational>(c.rank, Rational(0)));
    for (const auto& dir : null_space(m)) {
      auto v = make_integral(dir);
      into.push_back(lv(other_side(c.side), v));
      into.push_back(negate(lv(other_side(c.side), v)));
    }
  };
  span_constraints(a, normals);
  span_constraints(b, normals);
  auto rays = extreme_rays(a.side, a.rank, normals);
  // intersection of pointed cones is pointed; keep only rays inside both
  std::vector<std::vector<int64_t>> gens;
  for (const auto& r : rays)
    if (cone_contains(a, r) && cone_contains(b, r)) gens.push_back(r.c);
  return make_cone(a.side, a.rank, gens);
}

static bool is_face_of(const Cone& face, const Cone& c) {
  // face of c: some supporting normal of c vanishes exactly on it
  for (const auto& g : face.generators)
    if (!cone_contains(c, g)) return false;
  if (face.generators == c.generators) return true;
  for (const auto& n : c.facet_normals) {
    bool on_face = true;
    for (const auto& g : face.generators)
      if (dot(n.c, g.c) != 0) on_face = false;
    if (!on_face) continue;
    std::vector<std::vector<int64_t>> kept;
    for (const auto& g : c.generators)
      if (dot(n.c, g.c) == 0) kept.push_back(g.c);
    Cone cut = make_cone(c.side, c.rank, kept);
    if (cut.generators == face.generators) return true;
    if (is_face_of(face, cut)) return true;
  }
  return false;
}

Fan make_fan(Side side, int rank, const std::vector<Cone>& cones) {
  Fan fan;
  fan.side = side;
  fan.rank = rank;
  std::set<Cone> present(cones.begin(), cones.end());
  for (const auto& c : cones) {
    if (c.side != side || c.rank != rank) throw InputError("fan cone on wrong side or rank");
    // (a) pointedness: no opposite pair of directions
    for (const auto& g : c.generators)
      if (cone_contains(c, negate(g)))
        throw InputError("fan cone is not pointed: contains a line through " + to_string(g));
    // (c) closure under faces
    for (const auto& f : cone_faces(c))
      if (!present.count(f)) {
        std::string gens;
        for (const auto& g : f.generators) gens += to_string(g);
        throw InputError("fan is not closed under faces: missing face {" + gens + "}");
      }
  }
  // (b) pairwise intersections are faces of both
  for (std::size_t i = 0; i < cones.size(); ++i)
    for (std::size_t j = i + 1; j < cones.size(); ++j) {
      Cone inter = intersect_cones(cones[i], cones[j]);
      if (!is_face_of(inter, cones[i]) || !is_face_of(inter, cones[j]))
        throw InputError("fan cones intersect in a non-face");
    }
  fan.cones = {present.begin(), present.end()};
  return fan;
}

std::vector<const Cone*> Fan::maximal_cones() const {
  std::vector<const Cone*> out;
  for (const auto& c : cones) {
    bool maximal = true;
    for (const auto& d : cones) {
      if (&c == &d || d.generators == c.generators) continue;
      bool contained = true;
      for (const auto& g : c.generators)
        if (!cone_contains(d, g)) contained = false;
      if (contained && d.generators.size() >= c.generators.size()) maximal = false;
    }
    if (maximal) out.push_back(&c);
  }
  return out;
}

bool Fan::contains_point(const LatticeVector& v) const {
  for (const auto& c : cones)
    if (cone_contains(c, v)) return true;
  return false;
}

bool Fan::common_cone(const LatticeVector& a, const LatticeVector& b) const {
  for (const auto& c : cones)
    if (cone_contains(c, a) && cone_contains(c, b)) return true;
  return false;
}

bool Fan::common_cone_mod(const LatticeVector& a, const LatticeVector& b,
                          const LatticeVector& deg_star) const {
  // membership in C* + R deg*: all facet normals orthogonal to deg* must be >= 0
  auto in_extended = [&](const Cone& c, const LatticeVector& v) {
    for (const auto& n : c.facet_normals)
      if (dot(n.c, deg_star.c) == 0 && dot(n.c, v.c) < 0) return false;
    return true;
  };
  for (const auto& c : cones)
    if (in_extended(c, a) && in_extended(c, b)) return true;
  return false;
}

// ---------------------------------------------------------------------------
// polytopes

Polytope make_polytope(Side side, int rank, const std::vector<std::vector<int64_t>>& pts) {
  Polytope p;
  p.side = side;
  p.rank = rank;
  std::set<LatticeVector> s;
  for (const auto& q : pts) {
    if (static_cast<int>(q.size()) != rank) throw InputError("polytope point rank mismatch");
    s.insert(lv(side, q));
  }
  p.points.assign(s.begin(), s.end());
  return p;
}

// facets as pairs (normal n, offset c) with n.x >= c on the polytope and
// equality on the facet; exact enumeration over point subsets (rank <= 3)
struct Facet {
  std::vector<Rational> normal;
  Rational offset;
};

static std::vector<Facet> polytope_facets(const Polytope& p) {
  if (p.rank > 3) throw CapabilityError("polytope facet enumeration supports rank <= 3");
  int d = p.rank;
  int npts = static_cast<int>(p.points.size());
  if (npts < d + 1) throw InputError("polytope is not full-dimensional");
  std::vector<Facet> facets;
  auto seen = [&](const Facet& f) {
    for (const auto& g : facets) {
      if (g.offset != f.offset) continue;
      if (g.normal == f.normal) return true;
    }
    return false;
  };
  std::vector<int> subset;
  auto try_subset = [&]() {
    // affine hull of the subset: solve n.x = c for all chosen points; the
    // normal is determined up to scale when the subset spans a hyperplane
    RMat m;
    for (int i : subset) {
      std::vector<Rational> row;
      for (auto x : p.points[i].c) row.emplace_back(x);
      row.emplace_back(-1);  // [n ; c] with n.x - c = 0
      m.push_back(std::move(row));
    }
    auto ns = null_space(m);
    if (ns.size() != 1) return;
    std::vector<Rational> n(ns[0].begin(), ns[0].end() - 1);
    Rational c = ns[0].back();
    // orient so every point satisfies n.x >= c
    int sgn = 0;
    for (const auto& q : p.points) {
      Rational v(0);
      for (int k = 0; k < d; ++k) v += n[k] * Rational(q.c[k]);
      if (v > c) {
        if (sgn < 0) return;  // points on both sides: not a facet
        sgn = 1;
      } else if (v < c) {
        if (sgn > 0) return;
        sgn = -1;
      }
    }
    if (sgn == 0) return;  // degenerate
    if (sgn < 0) {
      for (auto& x : n) x = -x;
      c = -c;
    }
    // normalize deterministically: first nonzero entry of (n, c) positive and
    // cleared to a primitive integer vector
    std::vector<Rational> full = n;
    full.push_back(c);
    auto ints = make_integral(full);
    Facet f;
    f.normal.assign(d, Rational(0));
    for (int k = 0; k < d; ++k) f.normal[k] = ints[k];
    f.offset = ints[d];
    if (!seen(f)) facets.push_back(f);
  };
  auto rec = [&](auto&& self, int start, int need) -> void {
    if (need == 0) {
      try_subset();
      return;
    }
    for (int i = start; i <= npts - need; ++i) {
      subset.push_back(i);
      self(self, i + 1, need - 1);
      subset.pop_back();
    }
  };
  rec(rec, 0, d);
  if (facets.empty()) throw InputError("polytope has no facets (degenerate input)");
  return facets;
}

std::vector<LatticeVector> Polytope::vertices() const {
  // a point is a vertex iff it is the unique minimizer of some facet-adjacent
  // direction; cheaper exact test: p is a vertex iff removing it changes the
  // facet description. For the small polytopes here: p is a vertex iff it lies
  // on >= rank facets whose normals span.
  auto facets = polytope_facets(*this);
  std::vector<LatticeVector> out;
  for (const auto& q : points) {
    RMat active;
    for (const auto& f : facets) {
      Rational v(0);
      for (int k = 0; k < rank; ++k) v += f.normal[k] * Rational(q.c[k]);
      if (v == f.offset) active.push_back(f.normal);
    }
    if (!active.empty() && mat_rank(active) == rank) out.push_back(q);
  }
  return out;
}

Polytope polar_dual(const Polytope& p) {
  // 0 must be interior: strictly inside every facet
  auto facets = polytope_facets(p);
  for (const auto& f : facets) {
    if (f.offset >= 0) throw InputError("polar dual requires 0 in the interior");
  }
  // vertices of the polar are -normal/offset per facet of p
  std::vector<std::vector<int64_t>> verts;
  for (const auto& f : facets) {
    std::vector<int64_t> v(p.rank);
    for (int k = 0; k < p.rank; ++k) {
      Rational x = f.normal[k] / (-f.offset);
      if (denominator(x) != 1)
        throw NotReflexiveError("polar dual vertex is non-integral at facet normal");
      v[k] = static_cast<int64_t>(numerator(x));
    }
    verts.push_back(v);
  }
  return make_polytope(other_side(p.side), p.rank, verts);
}

std::vector<LatticeVector> lattice_points(const Polytope& p) {
  auto facets = polytope_facets(p);
  std::vector<int64_t> lo(p.rank, 0), hi(p.rank, 0);
  for (const auto& q : p.points)
    for (int k = 0; k < p.rank; ++k) {
      lo[k] = std::min(lo[k], q.c[k]);
      hi[k] = std::max(hi[k], q.c[k]);
    }
  std::vector<LatticeVector> out;
  std::vector<int64_t> cur(p.rank, 0);
  auto walk = [&](auto&& self, int pos) -> void {
    if (pos == p.rank) {
      for (const auto& f : facets) {
        Rational v(0);
        for (int k = 0; k < p.rank; ++k) v += f.normal[k] * Rational(cur[k]);
        if (v < f.offset) return;
      }
      out.push_back(lv(p.side, cur));
      return;
    }
    for (int64_t x = lo[pos]; x <= hi[pos]; ++x) {
      cur[pos] = x;
      self(self, pos + 1);
    }
  };
  walk(walk, 0);
  std::sort(out.begin(), out.end());
  return out;
}

Cone cone_over_polytope(const Polytope& p) {
  std::vector<std::vector<int64_t>> gens;
  for (const auto& q : p.points) {
    std::vector<int64_t> g = q.c;
    g.push_back(1);
    gens.push_back(g);
  }
  return make_cone(p.side, p.rank + 1, gens);
}

HeightCertificate validate_height_function(const Fan& fan,
                                           const std::map<LatticeVector, Rational>& h) {
  HeightCertificate cert;
  auto maximal = fan.maximal_cones();
  std::vector<std::vector<Rational>> linear_forms;
  for (const auto* c : maximal) {
    RMat a;
    std::vector<Rational> b;
    for (const auto& g : c->generators) {
      auto it = h.find(g);
      if (it == h.end()) {
        cert.violation = "no height value for generator " + to_string(g);
        return cert;
      }
      std::vector<Rational> row;
      for (auto x : g.c) row.emplace_back(x);
      a.push_back(std::move(row));
      b.push_back(it->second);
    }
    auto form = solve_system(a, b);
    if (!form) {
      cert.violation = "heights are not linear on a maximal cone";
      return cert;
    }
    linear_forms.push_back(*form);
  }
  // strict convexity: for every maximal cone, every generator outside it must
  // lie strictly above the cone's linear form
  for (std::size_t i = 0; i < maximal.size(); ++i) {
    for (const auto& [g, hg] : h) {
      if (cone_contains(*maximal[i], g)) continue;
      Rational lin(0);
      for (int k = 0; k < fan.rank; ++k) lin += linear_forms[i][k] * Rational(g.c[k]);
      if (!(lin < hg)) {
        cert.violation = "not strictly convex: generator " + to_string(g) +
                         " fails against cone " + std::to_string(i);
        return cert;
      }
    }
  }
  // pairwise subadditivity check on generators in different cones
  for (const auto& [g1, h1] : h) {
    for (const auto& [g2, h2] : h) {
      if (g1 <= g2) continue;
      if (fan.common_cone(g1, g2)) continue;
      LatticeVector s = add(g1, g2);
      // evaluate the piecewise-linear function at s
      std::optional<Rational> val;
      for (std::size_t i = 0; i < maximal.size(); ++i) {
        if (!cone_contains(*maximal[i], s)) continue;
        Rational lin(0);
        for (int k = 0; k < fan.rank; ++k) lin += linear_forms[i][k] * Rational(s.c[k]);
        val = lin;
        break;
      }
      if (!val) continue;  // sum leaves the support
      if (!(*val < h1 + h2)) {
        cert.violation = "subadditivity fails for pair " + to_string(g1) + ", " + to_string(g2);
        return cert;
      }
    }
  }
  cert.valid = true;
  return cert;
}

std::vector<LatticeVector> cone_slice_points(const Cone& cone, const LatticeVector& height,
                                             int64_t h,
                                             const std::vector<LatticeVector>& height_one) {
  if (h < 0) return {};
  if (h == 0) {
    // apex slice of a pointed cone
    LatticeVector zero = lv(cone.side, std::vector<int64_t>(cone.rank, 0));
    if (cone_contains(cone, zero)) return {zero};
    return {};
  }
  std::vector<int64_t> lo(cone.rank), hi(cone.rank);
  for (int k = 0; k < cone.rank; ++k) {
    int64_t mn = height_one.empty() ? 0 : height_one[0].c[k];
    int64_t mx = mn;
    for (const auto& q : height_one) {
      mn = std::min(mn, q.c[k]);
      mx = std::max(mx, q.c[k]);
    }
    lo[k] = mn * h - (mn < 0 ? 0 : 0);
    hi[k] = mx * h;
    if (mn > 0) lo[k] = 0;  // safe widening, membership test filters
    if (mx < 0) hi[k] = 0;
  }
  std::vector<LatticeVector> out;
  std::vector<int64_t> cur(cone.rank, 0);
  auto walk = [&](auto&& self, int pos) -> void {
    if (pos == cone.rank) {
      LatticeVector v = lv(cone.side, cur);
      if (dot(height.c, v.c) != h) return;
      if (cone_contains(cone, v)) out.push_back(v);
      return;
    }
    for (int64_t x = lo[pos]; x <= hi[pos]; ++x) {
      cur[pos] = x;
      self(self, pos + 1);
    }
  };
  walk(walk, 0);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace latvoa
