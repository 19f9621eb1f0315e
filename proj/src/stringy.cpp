#include "latvoa/stringy.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace latvoa {

std::string to_string(const StringForm& f) {
  std::ostringstream os;
  os << "x^" << to_string(f.m) << " y^" << to_string(f.n) << " e[";
  for (std::size_t i = 0; i < f.word.size(); ++i) os << (i ? "," : "") << f.word[i] + 1;
  os << "]";
  return os.str();
}

int StringComplexSlice::find(const StringForm& f) const {
  auto it = std::lower_bound(basis.begin(), basis.end(), f);
  if (it == basis.end() || !(*it == f)) return -1;
  return static_cast<int>(it - basis.begin());
}

int64_t StringComplexSlice::j_grade(const StringForm& f) const {
  return static_cast<int64_t>(f.word.size()) + dot(deg.c, f.n.c);
}

namespace {

// w ^ e_i with sign; nullopt when i repeats. e_i enters from the right.
std::optional<std::pair<std::vector<int>, int>> wedge_basis(const std::vector<int>& w, int i) {
  auto pos = std::lower_bound(w.begin(), w.end(), i);
  if (pos != w.end() && *pos == i) return std::nullopt;
  std::vector<int> out = w;
  int idx = static_cast<int>(pos - w.begin());
  out.insert(out.begin() + idx, i);
  int crossings = static_cast<int>(w.size()) - idx;
  return std::make_pair(out, (crossings % 2) ? -1 : 1);
}

}  // namespace

StringComplexSlice build_string_complex(const Cone& cone_nside,
                                        const std::vector<WeightedPoint>& g_values,
                                        int64_t m_box_cap, int64_t n_height_cap) {
  StringComplexSlice sl;
  sl.cone = cone_nside;
  sl.dual = dual_cone(cone_nside);
  sl.deg = degree_vector(cone_nside);
  sl.m_box_cap = m_box_cap;
  sl.n_height_cap = n_height_cap;
  const int rank = cone_nside.rank;

  std::vector<WeightedPoint> gs;
  for (const auto& wp : g_values)
    if (cone_contains(cone_nside, wp.point)) gs.push_back(wp);

  std::vector<LatticeVector> ms;
  {
    std::vector<int64_t> cur(rank, 0);
    auto walk = [&](auto&& self, int pos) -> void {
      if (pos == rank) {
        LatticeVector m = lv(Side::M, cur);
        if (cone_contains(sl.dual, m)) ms.push_back(m);
        return;
      }
      for (int64_t x = -m_box_cap; x <= m_box_cap; ++x) {
        cur[pos] = x;
        self(self, pos + 1);
      }
    };
    walk(walk, 0);
  }
  std::vector<LatticeVector> height_one;
  for (const auto& wp : g_values) height_one.push_back(wp.point);
  for (const auto& g : cone_nside.generators) height_one.push_back(g);
  std::vector<LatticeVector> ns;
  for (int64_t h = 0; h <= n_height_cap; ++h)
    for (const auto& n : cone_slice_points(cone_nside, sl.deg, h, height_one)) ns.push_back(n);

  for (const auto& m : ms)
    for (const auto& n : ns) {
      if (dot(m.c, n.c) != 0) continue;
      for (int mask = 0; mask < (1 << rank); ++mask) {
        StringForm f;
        f.m = m;
        f.n = n;
        for (int i = 0; i < rank; ++i)
          if (mask & (1 << i)) f.word.push_back(i);
        sl.basis.push_back(std::move(f));
      }
    }
  std::sort(sl.basis.begin(), sl.basis.end());

  const int dim = static_cast<int>(sl.basis.size());
  sl.brst0 = SparseMatrix::zero(dim, dim);
  sl.derham = SparseMatrix::zero(dim, dim);
  for (int col = 0; col < dim; ++col) {
    const StringForm& f = sl.basis[col];
    for (const auto& wp : gs) {
      LatticeVector n2 = add(f.n, wp.point);
      if (dot(f.m.c, n2.c) != 0) continue;       // truncated module action
      if (dot(sl.deg.c, n2.c) > n_height_cap) continue;  // height quotient
      int sign = 1;
      for (std::size_t j = 0; j < f.word.size(); ++j) {
        int64_t comp = wp.point.c[f.word[j]];
        if (comp != 0) {
          StringForm out = f;
          out.n = n2;
          out.word.erase(out.word.begin() + j);
          int row = sl.find(out);
          if (row < 0) throw MathError("string complex: contraction image missing");
          sl.brst0.set(row, col, wp.value * Rational(comp * sign));
        }
        sign = -sign;
      }
    }
    for (int i = 0; i < rank; ++i) {
      if (f.m.c[i] == 0) continue;
      auto wedged = wedge_basis(f.word, i);
      if (!wedged) continue;
      StringForm out = f;
      out.word = wedged->first;
      int row = sl.find(out);
      if (row < 0) throw MathError("string complex: wedge image missing");
      sl.derham.set(row, col, Rational(f.m.c[i] * wedged->second));
    }
  }
  if (!multiply(sl.brst0, sl.brst0).is_zero()) throw MathError("string complex: brst0^2 != 0");
  if (!multiply(sl.derham, sl.derham).is_zero()) throw MathError("string complex: d^2 != 0");
  if (!add(multiply(sl.brst0, sl.derham), multiply(sl.derham, sl.brst0)).is_zero())
    throw MathError("string complex: {brst0, d} != 0");
  return sl;
}

namespace {

SparseMatrix submatrix(const SparseMatrix& m, const std::vector<int>& rows,
                       const std::vector<int>& cols) {
  std::map<int, int> rowof;
  for (std::size_t i = 0; i < rows.size(); ++i) rowof[rows[i]] = static_cast<int>(i);
  SparseMatrix out =
      SparseMatrix::zero(static_cast<int>(rows.size()), static_cast<int>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (const auto& [r, v] : m.col[cols[j]]) {
      auto it = rowof.find(r);
      if (it != rowof.end()) out.set(it->second, static_cast<int>(j), v);
    }
  return out;
}

}  // namespace

std::map<std::pair<int64_t, int>, int> j_bigrading(const StringComplexSlice& slice) {
  std::map<std::pair<int64_t, int>, std::vector<int>> piece;
  for (int i = 0; i < static_cast<int>(slice.basis.size()); ++i) {
    const auto& f = slice.basis[i];
    piece[{slice.j_grade(f), static_cast<int>(f.word.size())}].push_back(i);
  }
  std::map<std::pair<int64_t, int>, int> dims;
  for (const auto& [key, idx] : piece) {
    auto [J, q] = key;
    std::vector<int> above, below;
    if (auto it = piece.find({J, q + 1}); it != piece.end()) above = it->second;
    if (auto it = piece.find({J, q - 1}); it != piece.end()) below = it->second;
    int rk_in = rank(submatrix(slice.brst0, idx, above));
    int rk_out = rank(submatrix(slice.brst0, below, idx));
    int h = static_cast<int>(idx.size()) - rk_in - rk_out;
    if (h != 0) dims[{J, q}] = h;
  }
  return dims;
}

// ---------------------------------------------------------------------------
// hypercohomology

namespace {

struct Subquotient {
  int ambient = 0;
  std::vector<std::vector<Rational>> reps;
  std::vector<std::vector<Rational>> im_basis;
  int dim() const { return static_cast<int>(reps.size()); }
};

std::vector<std::vector<Rational>> independent_subset(
    const std::vector<std::vector<Rational>>& vecs, int ambient) {
  std::vector<std::vector<Rational>> out;
  for (const auto& v : vecs) {
    SparseMatrix test = SparseMatrix::zero(ambient, static_cast<int>(out.size()) + 1);
    for (std::size_t j = 0; j < out.size(); ++j)
      for (int r = 0; r < ambient; ++r)
        if (out[j][r] != 0) test.set(r, static_cast<int>(j), out[j][r]);
    for (int r = 0; r < ambient; ++r)
      if (v[r] != 0) test.set(r, static_cast<int>(out.size()), v[r]);
    if (rank(test) == static_cast<int>(out.size()) + 1) out.push_back(v);
  }
  return out;
}

// ker(d_out)/im(d_in) with explicit representatives
Subquotient homology_spot(const SparseMatrix& d_in, const SparseMatrix& d_out) {
  Subquotient sq;
  sq.ambient = d_out.cols;
  std::vector<std::vector<Rational>> images;
  for (int c = 0; c < d_in.cols; ++c) {
    std::vector<Rational> v(sq.ambient, Rational(0));
    bool nz = false;
    for (const auto& [r, val] : d_in.col[c]) {
      v[r] = val;
      nz = true;
    }
    if (nz) images.push_back(std::move(v));
  }
  sq.im_basis = independent_subset(images, sq.ambient);
  std::vector<std::vector<Rational>> pool = sq.im_basis;
  for (const auto& k : kernel_basis(d_out)) {
    auto trial = pool;
    trial.push_back(k);
    if (independent_subset(trial, sq.ambient).size() > pool.size()) {
      pool.push_back(k);
      sq.reps.push_back(k);
    }
  }
  return sq;
}

std::vector<Rational> subquotient_coords(const Subquotient& sq, const std::vector<Rational>& y) {
  int n = sq.dim(), m = static_cast<int>(sq.im_basis.size());
  SparseMatrix a = SparseMatrix::zero(sq.ambient, n + m);
  for (int j = 0; j < n; ++j)
    for (int r = 0; r < sq.ambient; ++r)
      if (sq.reps[j][r] != 0) a.set(r, j, sq.reps[j][r]);
  for (int j = 0; j < m; ++j)
    for (int r = 0; r < sq.ambient; ++r)
      if (sq.im_basis[j][r] != 0) a.set(r, n + j, sq.im_basis[j][r]);
  auto x = solve_linear(a, y);
  if (!x) throw MathError("subquotient: vector is not a cycle modulo boundaries");
  return std::vector<Rational>(x->begin(), x->begin() + n);
}

}  // namespace

StringHyperResult string_hypercohomology(const Fan& fan,
                                         const std::vector<WeightedPoint>& g_values,
                                         const std::vector<int64_t>& box_schedule,
                                         int stabilize_s, int64_t j_cap) {
  StringHyperResult res;
  auto maximal = fan.maximal_cones();
  const int ncharts = static_cast<int>(maximal.size());
  const int rank_ = fan.rank;

  struct CechCell {
    std::vector<int> tuple;
    Cone cone;
  };
  std::vector<CechCell> cells;
  {
    std::vector<int> tuple;
    auto rec = [&](auto&& self, int start) -> void {
      if (!tuple.empty()) {
        Cone inter = *maximal[tuple[0]];
        for (std::size_t i = 1; i < tuple.size(); ++i)
          inter = intersect_cones(inter, *maximal[tuple[i]]);
        cells.push_back({tuple, inter});
      }
      for (int i = start; i < ncharts; ++i) {
        tuple.push_back(i);
        self(self, i + 1);
        tuple.pop_back();
      }
    };
    rec(rec, 0);
  }

  auto compute = [&](int64_t box) {
    std::map<std::string, int64_t> flat;
    std::vector<StringComplexSlice> slices;
    for (const auto& cell : cells)
      slices.push_back(build_string_complex(cell.cone, g_values, box, j_cap + 1));
    std::set<std::pair<LatticeVector, int64_t>> keys;
    for (std::size_t ci = 0; ci < cells.size(); ++ci)
      for (const auto& f : slices[ci].basis) {
        int64_t t = dot(slices[ci].deg.c, f.n.c);
        if (t <= j_cap) keys.insert({f.m, t});
      }
    std::map<std::pair<int, int64_t>, int64_t> dims;
    for (const auto& [mvec, t] : keys) {
      std::map<std::pair<int, int>, std::vector<int>> piece;  // (cell, q) -> indices
      for (std::size_t ci = 0; ci < cells.size(); ++ci)
        for (int i = 0; i < static_cast<int>(slices[ci].basis.size()); ++i) {
          const auto& f = slices[ci].basis[i];
          if (f.m == mvec && dot(slices[ci].deg.c, f.n.c) == t)
            piece[{static_cast<int>(ci), static_cast<int>(f.word.size())}].push_back(i);
        }
      std::map<std::pair<int, int>, Subquotient> H;
      for (int ci = 0; ci < static_cast<int>(cells.size()); ++ci)
        for (int q = 0; q <= rank_; ++q) {
          auto it = piece.find({ci, q});
          if (it == piece.end() || it->second.empty()) continue;
          std::vector<int> above, below;
          if (auto i2 = piece.find({ci, q + 1}); i2 != piece.end()) above = i2->second;
          if (auto i2 = piece.find({ci, q - 1}); i2 != piece.end()) below = i2->second;
          SparseMatrix din = submatrix(slices[ci].brst0, it->second, above);
          SparseMatrix dout = submatrix(slices[ci].brst0, below, it->second);
          H[{ci, q}] = homology_spot(din, dout);
        }
      // grid cells (p = Cech level, q); members are (cell, q) subquotients
      std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> grid;
      for (const auto& [key, sq] : H)
        if (sq.dim() > 0)
          grid[{static_cast<int>(cells[key.first].tuple.size()) - 1, key.second}].push_back(key);
      DoubleComplex dc;
      std::map<std::pair<int, int>, int> grid_cell;
      std::map<std::pair<int, int>, std::map<std::pair<int, int>, int>> offsets;
      for (const auto& [pq, members] : grid) {
        int total = 0;
        for (const auto& key : members) {
          offsets[pq][key] = total;
          total += H[key].dim();
        }
        grid_cell[pq] = static_cast<int>(dc.cells.size());
        dc.cells.push_back({pq.first, pq.second, total});
      }
      auto grid_dim = [&](std::pair<int, int> pq) {
        auto it = grid_cell.find(pq);
        return it == grid_cell.end() ? 0 : dc.cells[it->second].dim;
      };
      for (const auto& [pq, members] : grid) {
        // vertical: induced wedge differential
        std::pair<int, int> up{pq.first, pq.second + 1};
        if (grid_dim(up) > 0) {
          SparseMatrix V = SparseMatrix::zero(grid_dim(up), grid_dim(pq));
          for (const auto& key : members) {
            auto [ci, q] = key;
            std::pair<int, int> upkey{ci, q + 1};
            auto hit = H.find(upkey);
            if (hit == H.end() || hit->second.dim() == 0) continue;
            SparseMatrix dmat =
                submatrix(slices[ci].derham, piece[{ci, q + 1}], piece[{ci, q}]);
            for (int j = 0; j < H[key].dim(); ++j) {
              auto coords = subquotient_coords(hit->second, dmat.apply(H[key].reps[j]));
              for (int i = 0; i < hit->second.dim(); ++i)
                if (coords[i] != 0)
                  V.set(offsets[up][upkey] + i, offsets[pq][key] + j, coords[i]);
            }
          }
          dc.vertical[grid_cell[pq]] = V;
        }
        // horizontal: signed Cech restrictions
        std::pair<int, int> right{pq.first + 1, pq.second};
        if (grid_dim(right) > 0) {
          SparseMatrix Hm = SparseMatrix::zero(grid_dim(right), grid_dim(pq));
          for (const auto& key : members) {
            auto [ci, q] = key;
            const auto& tuple = cells[ci].tuple;
            for (int cj = 0; cj < static_cast<int>(cells.size()); ++cj) {
              const auto& t2 = cells[cj].tuple;
              if (t2.size() != tuple.size() + 1) continue;
              int omitted = -1;
              {
                std::size_t a = 0;
                bool ok = true;
                for (std::size_t b = 0; b < t2.size(); ++b) {
                  if (a < tuple.size() && tuple[a] == t2[b])
                    ++a;
                  else if (omitted < 0)
                    omitted = static_cast<int>(b);
                  else {
                    ok = false;
                    break;
                  }
                }
                if (!ok || a != tuple.size() || omitted < 0) continue;
              }
              std::pair<int, int> dkey{cj, q};
              auto hit = H.find(dkey);
              if (hit == H.end() || hit->second.dim() == 0) continue;
              const auto& src_rows = piece[{ci, q}];
              const auto& dst_rows = piece.count(dkey) ? piece[dkey] : std::vector<int>{};
              if (dst_rows.empty()) continue;
              SparseMatrix R = SparseMatrix::zero(static_cast<int>(dst_rows.size()),
                                                  static_cast<int>(src_rows.size()));
              for (std::size_t sj = 0; sj < src_rows.size(); ++sj) {
                const StringForm& f = slices[ci].basis[src_rows[sj]];
                if (!cone_contains(cells[cj].cone, f.n)) continue;
                int di = slices[cj].find(f);
                if (di < 0) throw MathError("cech restriction image missing");
                for (std::size_t dj = 0; dj < dst_rows.size(); ++dj)
                  if (dst_rows[dj] == di)
                    R.set(static_cast<int>(dj), static_cast<int>(sj), Rational(1));
              }
              Rational sign = (omitted % 2) ? Rational(-1) : Rational(1);
              for (int j = 0; j < H[key].dim(); ++j) {
                auto coords = subquotient_coords(hit->second, R.apply(H[key].reps[j]));
                for (int i = 0; i < hit->second.dim(); ++i)
                  if (coords[i] != 0)
                    Hm.set(offsets[right][dkey] + i, offsets[pq][key] + j, coords[i] * sign);
              }
            }
          }
          dc.horizontal[grid_cell[pq]] = Hm;
        }
      }
      for (const auto& [k, v] : dc.total_cohomology_by_degree())
        if (v != 0) dims[{k, t}] += v;
    }
    for (const auto& [k, v] : dims) {
      std::ostringstream os;
      os << "k=" << k.first << " t=" << k.second;
      flat[os.str()] = v;
    }
    return flat;
  };

  auto rep = stabilize(compute, box_schedule, stabilize_s);
  res.stabilized = rep.stabilized;
  res.protocol = rep.summary();
  for (const auto& [key, v] : rep.value) {
    int k = 0;
    long long t = 0;
    if (sscanf(key.c_str(), "k=%d t=%lld", &k, &t) == 2) res.dims[{k, t}] = v;
  }
  return res;
}

}  // namespace latvoa
