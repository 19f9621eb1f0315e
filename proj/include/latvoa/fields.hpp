// Free-field modes, lattice vertex operators with cocycle and fan degeneration,
// composite field modes, and quadratic fields (L, J, G, Q families) on blocks.
#pragma once

#include "latvoa/fock.hpp"
#include "latvoa/linalg.hpp"

namespace latvoa {

struct VertexOpSpec {
  std::vector<int64_t> m_shift;  // coefficient of B in the exponent
  std::vector<int64_t> n_shift;  // coefficient of A in the exponent
  const Fan* degeneration = nullptr;
  // when set, the fan rule is applied with every cone extended by R deg*
  std::optional<std::vector<int64_t>> extend_deg_star;
  // negative-control hook: drops the cocycle (-1)^{m.n1}, which breaks the
  // anticommutation of mixed BRST terms
  bool cocycle_off = false;
};

// map power of z -> coefficient state
struct SeriesSlice {
  std::map<int64_t, StateVector> powers;
};

// Expansion of :e^{int(m.B+n.A)}:(z) applied to a basis state, for powers in
// [pmin, pmax]. Charge shift (m1,n1) -> (m1+m, n1+n), global cocycle sign
// (-1)^{m.n1}, leading power m.n1 + n.m1; creation modes carry positive
// relative powers. A configured degeneration zeroes the slice unless the
// n-shift and the state's n-charge lie in a common cone.
SeriesSlice vertex_op_series(const VertexOpSpec& spec, const FockState& s, int64_t pmin,
                             int64_t pmax);

struct CompositeFieldTerm {
  // optional fermion prefactor: Phi with an M-side coefficient vector,
  // Psi with an N-side coefficient vector
  std::optional<std::pair<Species, std::vector<int64_t>>> prefactor;
  VertexOpSpec vop;
  Rational scalar = Rational(1);
};

// Coefficient of z^{zpow} of (prefactor field) x (vertex operator) applied to v.
// zpow = -1 is the residue mode used by BRST operators; zpow = 0 is the
// grading-preserving mode used by homotopy operators.
StateVector field_mode_apply(const CompositeFieldTerm& term, const StateVector& v, int64_t zpow);

inline StateVector residue_mode(const CompositeFieldTerm& term, const StateVector& v) {
  return field_mode_apply(term, v, -1);
}

StateVector apply_terms(const std::vector<CompositeFieldTerm>& terms, const StateVector& v,
                        int64_t zpow);

// ---------------------------------------------------------------------------
// block operators

struct BlockOperator {
  const Block* source = nullptr;
  const Block* target = nullptr;
  SparseMatrix mat;
};

// Assembles the matrix of sum_i terms_i at mode zpow between blocks. States in
// the image that are missing from the target block raise MathError unless a
// drop predicate accepts them (quotient truncation).
BlockOperator assemble_operator(
    const std::vector<CompositeFieldTerm>& terms, const Block& source, const Block& target,
    int64_t zpow,
    const std::function<bool(const FockState&)>& may_drop = nullptr);

// ---------------------------------------------------------------------------
// quadratic fields

enum class QField { L, J, G, Q, LXA, LXB, LN2 };
const char* qfield_name(QField f);

// Matrix of the k-th mode of the normal-ordered field on the block.
// L   = :B.A: + :dPhi.Psi:
// J   = :Phi.Psi: + deg.B - deg*.A
// Q   = :A.Phi: - deg.dPhi
// G   = :B.Psi: - deg*.dPsi
// LXA = L - deg*.dA
// LXB = :B.A: - :Phi.dPsi: - deg.dB
// LN2 = :B.A: + (1/2)(:dPhi.Psi: - :Phi.dPsi:) - (1/2)deg*.dA - (1/2)deg.dB
// Both deg and deg* default to zero vectors when the formula needs them and
// the config omits them -> InputError.
BlockOperator quadratic_field_mode(QField which, int k, const Block& source, const Block& target,
                                   const GradingConfig& cfg);

// ---------------------------------------------------------------------------
// mirror involution

// The signed swap |m,n> -> (-1)^{m.n} |n,m> with A<->B and Phi[k] -> Psi[k-1],
// Psi[k] -> Phi[k+1]; fermion reordering signs are included.
StateVector mirror_swap(const FockState& s);
// Conjugates term data: swaps shift sides and prefactor species.
CompositeFieldTerm mirror_term(const CompositeFieldTerm& t);

}  // namespace latvoa
