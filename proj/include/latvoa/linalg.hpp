// Exact sparse rational linear algebra, cohomology of nilpotent operators,
// double complexes and the truncation-stabilization protocol.
#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "latvoa/common.hpp"

namespace latvoa {

// Column-major sparse matrix over the rationals. No stored zeros.
struct SparseMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<std::vector<std::pair<int, Rational>>> col;  // (row, value), row-sorted

  static SparseMatrix zero(int rows, int cols);
  static SparseMatrix identity(int n);
  void set(int r, int c, const Rational& v);  // add to entry
  Rational get(int r, int c) const;
  int nnz() const;
  std::vector<Rational> apply(const std::vector<Rational>& x) const;
  bool is_zero() const;
};

SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b);
SparseMatrix add(const SparseMatrix& a, const SparseMatrix& b, const Rational& fb = Rational(1));

// Exact rank by sparse rational elimination with Markowitz-style minimal
// fill-in pivoting.
int rank(const SparseMatrix& m);

// Exact basis of {x : M x = 0}.
std::vector<std::vector<Rational>> kernel_basis(const SparseMatrix& m);

// One exact solution of M x = b (free variables zero), or nullopt.
std::optional<std::vector<Rational>> solve_linear(const SparseMatrix& m,
                                                  const std::vector<Rational>& b);

// dim ker - dim im of a nilpotent endomorphism of one block; verifies d^2 = 0.
int cohomology_dim(const SparseMatrix& d);

// Graded complex ... -> V_i -> V_{i+1} -> ...: checks consecutive compositions
// vanish and returns ker/im dimensions per slice.
std::vector<int> charge_graded_cohomology(const std::vector<int>& dims,
                                          const std::vector<SparseMatrix>& maps);

// A finite double complex given by cells on a (column, row) grid. Vertical
// differentials in odd columns are sign-twisted so squares anticommute; the
// constructor validates the anticommutation and total d^2 = 0.
struct DoubleComplexCell {
  int col = 0, row = 0, dim = 0;
};

struct DoubleComplex {
  std::vector<DoubleComplexCell> cells;
  // horizontal[i]: cell i -> cell at (col+1, row); vertical[i]: -> (col, row+1)
  std::map<int, SparseMatrix> horizontal;
  std::map<int, SparseMatrix> vertical;

  int cell_at(int col, int row) const;  // -1 when absent
  // Assembles the total operator with the odd-column sign twist and checks
  // squares anticommute; throws MathError otherwise.
  SparseMatrix total_operator() const;
  // Cohomology of the total complex graded by col+row.
  std::map<int, int> total_cohomology_by_degree() const;
  int total_cohomology() const;
};

// ---------------------------------------------------------------------------
// stabilization protocol

struct StabilizationEntry {
  int64_t cutoff;
  std::map<std::string, int64_t> value;
};

struct StabilizationReport {
  std::vector<StabilizationEntry> history;
  bool stabilized = false;
  int64_t settled_cutoff = 0;  // first cutoff of the settled run
  std::map<std::string, int64_t> value;

  std::string summary() const;
};

// Runs `compute` over the cutoff schedule until `s` consecutive equal results
// or the schedule is exhausted; never silently returns the last value.
StabilizationReport stabilize(
    const std::function<std::map<std::string, int64_t>(int64_t)>& compute,
    const std::vector<int64_t>& schedule, int s);

}  // namespace latvoa
