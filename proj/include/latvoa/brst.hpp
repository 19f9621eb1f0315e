// BRST_f, BRST_g, BRST_{f,g} assembly, nilpotency checks, the regular-sequence
// ideal membership solve, and homotopy operators.
#pragma once

#include "latvoa/fields.hpp"

namespace latvoa {

// One weighted lattice point: a term f_m x^m or g_n y^n.
struct WeightedPoint {
  LatticeVector point;
  Rational value;
};

// f-side terms: f_m (m.Phi)(z) e^{int m.B(z)} for m in Delta.
std::vector<CompositeFieldTerm> brst_f_terms(const std::vector<WeightedPoint>& delta);

// g-side terms: g_n (n.Psi)(z) e^{int n.A(z)} for n in Delta*, with an optional
// fan degeneration (extended by deg* for whole-lattice computations).
std::vector<CompositeFieldTerm> brst_g_terms(
    const std::vector<WeightedPoint>& delta_star, const Fan* degeneration = nullptr,
    const std::optional<std::vector<int64_t>>& extend_deg_star = std::nullopt);

struct BrstSpec {
  std::vector<CompositeFieldTerm> terms;
};

BlockOperator build_brst(const BrstSpec& spec, const Block& source, const Block& target,
                         const std::function<bool(const FockState&)>& may_drop = nullptr);

struct NilpotencyResult {
  bool nilpotent = false;
  std::optional<FockState> witness;  // basis state with d(d(state)) != 0
};

// Square of the operator on a family closed under two applications.
NilpotencyResult check_nilpotent(const BlockOperator& op);

// ---------------------------------------------------------------------------
// regular-sequence ideal membership (Prop: x^{k m0} in (F_1,...,F_r) with
// F_i = sum_m f_m (m.n_i) x^m, minimal k <= rank)

struct IdealSolution {
  int64_t k = 0;
  // h_i as maps exponent -> coefficient; exponents lie at deg*-height k-1 in K
  std::vector<std::map<LatticeVector, Rational>> h;
};

struct IdealProblem {
  std::vector<WeightedPoint> delta;     // f values on Delta (height-one points of K)
  LatticeVector m0;                     // vertex of Delta
  std::vector<LatticeVector> n_basis;   // basis of N
  const Cone* cone_m = nullptr;         // K
  LatticeVector deg_star;               // grading on K
};

// Finds minimal k <= rank with an exact solution and verifies it by
// resubstitution; throws GenericityError when no k <= rank works.
IdealSolution solve_ideal_membership(const IdealProblem& prob);

// ---------------------------------------------------------------------------
// homotopy operators

// Simple homotopy for rank 1: the grading-preserving mode of Phi(z)e^{-int A(z)}.
std::vector<CompositeFieldTerm> homotopy_simple_terms();

// R_{m0}: grading-preserving mode of
// e^{-int k m0.B(z)} sum_i h_i(e^{int Delta.B}) n_i.Psi(z).
std::vector<CompositeFieldTerm> homotopy_rm0_terms(const IdealProblem& prob,
                                                   const IdealSolution& sol);

// Homotopy operators act at the z^0 coefficient rather than the residue;
// this wrapper pins that convention.
BlockOperator build_homotopy(const std::vector<CompositeFieldTerm>& terms, const Block& source,
                             const Block& target,
                             const std::function<bool(const FockState&)>& may_drop = nullptr);

// Verifies a support condition entry by entry: for every nonzero entry,
// grade(row) - grade(col) must satisfy the comparison with `delta`.
enum class ShiftCheck { Exactly, AtLeast };
bool operator_shift_holds(const BlockOperator& op,
                          const std::function<int64_t(const FockState&)>& grade, int64_t delta,
                          ShiftCheck how);

}  // namespace latvoa
