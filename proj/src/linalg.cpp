#include "latvoa/linalg.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace latvoa {

SparseMatrix SparseMatrix::zero(int rows, int cols) {
  SparseMatrix m;
  m.rows = rows;
  m.cols = cols;
  m.col.resize(cols);
  return m;
}

SparseMatrix SparseMatrix::identity(int n) {
  SparseMatrix m = zero(n, n);
  for (int i = 0; i < n; ++i) m.col[i].emplace_back(i, Rational(1));
  return m;
}

void SparseMatrix::set(int r, int c, const Rational& v) {
  if (v == 0) return;
  if (r < 0 || r >= rows || c < 0 || c >= cols) throw MathError("sparse entry out of range");
  auto& column = col[c];
  auto it = std::lower_bound(column.begin(), column.end(), r,
                             [](const auto& e, int row) { return e.first < row; });
  if (it != column.end() && it->first == r) {
    it->second += v;
    if (it->second == 0) column.erase(it);
  } else {
    column.insert(it, {r, v});
  }
}

Rational SparseMatrix::get(int r, int c) const {
  for (const auto& [row, v] : col[c])
    if (row == r) return v;
  return Rational(0);
}

int SparseMatrix::nnz() const {
  int n = 0;
  for (const auto& c : col) n += static_cast<int>(c.size());
  return n;
}

bool SparseMatrix::is_zero() const { return nnz() == 0; }

std::vector<Rational> SparseMatrix::apply(const std::vector<Rational>& x) const {
  if (static_cast<int>(x.size()) != cols) throw MathError("apply: size mismatch");
  std::vector<Rational> y(rows, Rational(0));
  for (int c = 0; c < cols; ++c) {
    if (x[c] == 0) continue;
    for (const auto& [r, v] : col[c]) y[r] += v * x[c];
  }
  return y;
}

SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.cols != b.rows) throw MathError("multiply: dimension mismatch");
  SparseMatrix out = SparseMatrix::zero(a.rows, b.cols);
  for (int c = 0; c < b.cols; ++c) {
    std::map<int, Rational> acc;
    for (const auto& [k, vb] : b.col[c])
      for (const auto& [r, va] : a.col[k]) acc[r] += va * vb;
    for (const auto& [r, v] : acc)
      if (v != 0) out.col[c].emplace_back(r, v);
  }
  return out;
}

SparseMatrix add(const SparseMatrix& a, const SparseMatrix& b, const Rational& fb) {
  if (a.rows != b.rows || a.cols != b.cols) throw MathError("add: dimension mismatch");
  SparseMatrix out = SparseMatrix::zero(a.rows, a.cols);
  for (int c = 0; c < a.cols; ++c) {
    std::map<int, Rational> acc;
    for (const auto& [r, v] : a.col[c]) acc[r] += v;
    for (const auto& [r, v] : b.col[c]) acc[r] += v * fb;
    for (const auto& [r, v] : acc)
      if (v != 0) out.col[c].emplace_back(r, v);
  }
  return out;
}

// ---------------------------------------------------------------------------
// exact sparse elimination with Markowitz-style minimal-fill pivoting
//
// Entries stay exact rationals throughout (gmp keeps them canonical); pivots
// minimize (nnz_row - 1) * (nnz_col - 1) with deterministic tie-breaking.

namespace {

struct EliminationResult {
  int rank = 0;
  std::vector<int> pivot_cols;                        // in elimination order
  std::vector<std::map<int, Rational>> echelon_rows;  // eliminated rows, in order
};

EliminationResult eliminate(const SparseMatrix& m) {
  std::vector<std::map<int, Rational>> rows(m.rows);
  for (int c = 0; c < m.cols; ++c)
    for (const auto& [r, v] : m.col[c]) rows[r][c] = v;

  EliminationResult res;
  std::vector<bool> row_done(m.rows, false);
  std::vector<int> col_count(m.cols, 0);
  for (int r = 0; r < m.rows; ++r)
    for (const auto& [c, v] : rows[r]) col_count[c]++;
  for (;;) {
    int best_r = -1, best_c = -1;
    long best_score = -1;
    for (int r = 0; r < m.rows; ++r) {
      if (row_done[r] || rows[r].empty()) continue;
      long rn = static_cast<long>(rows[r].size());
      for (const auto& [c, v] : rows[r]) {
        long score = (rn - 1) * (col_count[c] - 1);
        if (best_score < 0 || score < best_score ||
            (score == best_score && (r < best_r || (r == best_r && c < best_c)))) {
          best_score = score;
          best_r = r;
          best_c = c;
        }
      }
    }
    if (best_r < 0) break;
    row_done[best_r] = true;
    res.pivot_cols.push_back(best_c);
    const Rational pivot = rows[best_r].at(best_c);
    for (int r = 0; r < m.rows; ++r) {
      if (row_done[r] || rows[r].empty()) continue;
      auto it = rows[r].find(best_c);
      if (it == rows[r].end()) continue;
      const Rational factor = it->second / pivot;
      for (const auto& [c, v] : rows[best_r]) {
        auto i2 = rows[r].find(c);
        if (i2 == rows[r].end()) {
          Rational nv = -factor * v;
          if (nv != 0) {
            rows[r].emplace(c, nv);
            col_count[c]++;
          }
        } else {
          i2->second -= factor * v;
          if (i2->second == 0) {
            rows[r].erase(i2);
            col_count[c]--;
          }
        }
      }
    }
    for (const auto& [c, v] : rows[best_r]) col_count[c]--;
    res.echelon_rows.push_back(rows[best_r]);
    rows[best_r].clear();
  }
  res.rank = static_cast<int>(res.pivot_cols.size());
  return res;
}

}  // namespace

int rank(const SparseMatrix& m) { return eliminate(m).rank; }

std::vector<std::vector<Rational>> kernel_basis(const SparseMatrix& m) {
  auto res = eliminate(m);
  std::vector<bool> is_pivot(m.cols, false);
  for (int c : res.pivot_cols) is_pivot[c] = true;
  std::vector<std::vector<Rational>> basis;
  for (int free = 0; free < m.cols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<Rational> x(m.cols, Rational(0));
    x[free] = 1;
    // back-substitute through the echelon rows in reverse elimination order
    for (int k = static_cast<int>(res.echelon_rows.size()) - 1; k >= 0; --k) {
      const auto& row = res.echelon_rows[k];
      int pc = res.pivot_cols[k];
      Rational s(0);
      for (const auto& [c, v] : row) {
        if (c == pc) continue;
        if (x[c] != 0) s += v * x[c];
      }
      auto it = row.find(pc);
      x[pc] = -s / it->second;
    }
    basis.push_back(std::move(x));
  }
  return basis;
}

std::optional<std::vector<Rational>> solve_linear(const SparseMatrix& m,
                                                  const std::vector<Rational>& b) {
  if (static_cast<int>(b.size()) != m.rows) throw MathError("solve_linear: size mismatch");
  // eliminate the augmented matrix; a pivot in the rhs column means inconsistent
  SparseMatrix aug = SparseMatrix::zero(m.rows, m.cols + 1);
  aug.col = m.col;
  aug.col.resize(m.cols + 1);
  for (int r = 0; r < m.rows; ++r)
    if (b[r] != 0) aug.col[m.cols].emplace_back(r, b[r]);
  auto res = eliminate(aug);
  std::vector<Rational> x(m.cols, Rational(0));
  // solve pivots in reverse order; the rhs column participates as value -1
  for (int k = static_cast<int>(res.echelon_rows.size()) - 1; k >= 0; --k) {
    int pc = res.pivot_cols[k];
    const auto& row = res.echelon_rows[k];
    if (pc == m.cols) return std::nullopt;
    Rational s(0);
    for (const auto& [c, v] : row) {
      if (c == pc) continue;
      if (c == m.cols)
        s -= v;
      else if (x[c] != 0)
        s += v * x[c];
    }
    x[pc] = -s / row.at(pc);
  }
  return x;
}

int cohomology_dim(const SparseMatrix& d) {
  if (d.rows != d.cols) throw MathError("cohomology_dim expects an endomorphism");
  if (!multiply(d, d).is_zero()) throw MathError("operator is not nilpotent: d^2 != 0");
  return d.rows - 2 * rank(d);
}

std::vector<int> charge_graded_cohomology(const std::vector<int>& dims,
                                          const std::vector<SparseMatrix>& maps) {
  if (maps.size() + 1 != dims.size())
    throw MathError("charge_graded_cohomology: need one map between consecutive slices");
  for (std::size_t i = 0; i + 1 < maps.size(); ++i)
    if (!multiply(maps[i + 1], maps[i]).is_zero())
      throw MathError("charge_graded_cohomology: consecutive composition is nonzero");
  std::vector<int> h(dims.size());
  for (std::size_t i = 0; i < dims.size(); ++i) {
    int rank_out = (i < maps.size()) ? rank(maps[i]) : 0;
    int rank_in = (i > 0) ? rank(maps[i - 1]) : 0;
    h[i] = dims[i] - rank_out - rank_in;
  }
  return h;
}

// ---------------------------------------------------------------------------
// double complex

int DoubleComplex::cell_at(int col, int row) const {
  for (std::size_t i = 0; i < cells.size(); ++i)
    if (cells[i].col == col && cells[i].row == row) return static_cast<int>(i);
  return -1;
}

SparseMatrix DoubleComplex::total_operator() const {
  // offsets into the total space
  std::vector<int> offset(cells.size() + 1, 0);
  for (std::size_t i = 0; i < cells.size(); ++i) offset[i + 1] = offset[i] + cells[i].dim;
  int total = offset[cells.size()];
  SparseMatrix D = SparseMatrix::zero(total, total);
  auto place = [&](int from, int to, const SparseMatrix& m, const Rational& sign) {
    if (m.rows != cells[to].dim || m.cols != cells[from].dim)
      throw MathError("double complex: differential shape mismatch");
    for (int c = 0; c < m.cols; ++c)
      for (const auto& [r, v] : m.col[c]) D.set(offset[to] + r, offset[from] + c, v * sign);
  };
  for (const auto& [i, m] : horizontal) {
    int to = cell_at(cells[i].col + 1, cells[i].row);
    if (to < 0) throw MathError("double complex: missing horizontal target cell");
    place(i, to, m, Rational(1));
  }
  for (const auto& [i, m] : vertical) {
    int to = cell_at(cells[i].col, cells[i].row + 1);
    if (to < 0) throw MathError("double complex: missing vertical target cell");
    // odd-numbered columns carry the (-1) twist so small squares anticommute
    place(i, to, m, (cells[i].col % 2) ? Rational(-1) : Rational(1));
  }
  // validate anticommutation square by square (with the twist this is D^2 = 0)
  if (!multiply(D, D).is_zero())
    throw MathError("double complex: squares do not anticommute after the sign twist");
  return D;
}

std::map<int, int> DoubleComplex::total_cohomology_by_degree() const {
  // group cells by total degree and compute ker/im per degree
  std::map<int, std::vector<int>> by_degree;
  for (std::size_t i = 0; i < cells.size(); ++i)
    by_degree[cells[i].col + cells[i].row].push_back(static_cast<int>(i));
  SparseMatrix D = total_operator();
  std::vector<int> offset(cells.size() + 1, 0);
  for (std::size_t i = 0; i < cells.size(); ++i) offset[i + 1] = offset[i] + cells[i].dim;
  // extract degree-k -> degree-k+1 submatrices
  auto degree_dims = [&](int k) {
    int d = 0;
    if (by_degree.count(k))
      for (int i : by_degree.at(k)) d += cells[i].dim;
    return d;
  };
  auto submatrix = [&](int k) {
    int rows_k1 = degree_dims(k + 1), cols_k = degree_dims(k);
    SparseMatrix s = SparseMatrix::zero(rows_k1, cols_k);
    if (!rows_k1 || !cols_k) return s;
    std::map<int, int> row_of, col_of;  // global index -> local
    int rr = 0;
    for (int i : by_degree.at(k + 1))
      for (int t = 0; t < cells[i].dim; ++t) row_of[offset[i] + t] = rr++;
    int cc = 0;
    for (int i : by_degree.at(k))
      for (int t = 0; t < cells[i].dim; ++t) col_of[offset[i] + t] = cc++;
    for (const auto& [g, local] : col_of)
      for (const auto& [r, v] : D.col[g]) {
        auto it = row_of.find(r);
        if (it != row_of.end()) s.set(it->second, local, v);
      }
    return s;
  };
  std::map<int, int> h;
  if (by_degree.empty()) return h;
  int kmin = by_degree.begin()->first, kmax = by_degree.rbegin()->first;
  std::map<int, int> ranks;
  for (int k = kmin; k <= kmax; ++k) ranks[k] = rank(submatrix(k));
  for (int k = kmin; k <= kmax; ++k) {
    int rk_out = ranks.count(k) ? ranks[k] : 0;
    int rk_in = ranks.count(k - 1) ? ranks[k - 1] : 0;
    h[k] = degree_dims(k) - rk_out - rk_in;
  }
  return h;
}

int DoubleComplex::total_cohomology() const {
  int total = 0;
  for (const auto& [k, v] : total_cohomology_by_degree()) total += v;
  return total;
}

// ---------------------------------------------------------------------------
// stabilization

std::string StabilizationReport::summary() const {
  std::ostringstream os;
  if (stabilized)
    os << "stabilized at cutoff " << settled_cutoff;
  else
    os << "not stabilized within the schedule";
  return os.str();
}

StabilizationReport stabilize(
    const std::function<std::map<std::string, int64_t>(int64_t)>& compute,
    const std::vector<int64_t>& schedule, int s) {
  if (s < 1) throw InputError("stabilization requires s >= 1");
  StabilizationReport rep;
  int run = 0;
  for (int64_t cutoff : schedule) {
    auto value = compute(cutoff);
    if (!rep.history.empty() && rep.history.back().value == value)
      ++run;
    else
      run = 1;
    rep.history.push_back({cutoff, value});
    if (run >= s) {
      rep.stabilized = true;
      rep.settled_cutoff = rep.history[rep.history.size() - s].cutoff;
      rep.value = value;
      return rep;
    }
  }
  if (!rep.history.empty()) rep.value = rep.history.back().value;
  return rep;
}

}  // namespace latvoa
