#include "latvoa/brst.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace latvoa {

std::vector<CompositeFieldTerm> brst_f_terms(const std::vector<WeightedPoint>& delta) {
  std::vector<CompositeFieldTerm> terms;
  for (const auto& wp : delta) {
    if (wp.value == 0) continue;
    if (wp.point.side != Side::M) throw InputError("f-term point must lie in M");
    CompositeFieldTerm t;
    t.prefactor = {Species::Phi, wp.point.c};
    t.vop.m_shift = wp.point.c;
    t.vop.n_shift.assign(wp.point.c.size(), 0);
    t.scalar = wp.value;
    terms.push_back(std::move(t));
  }
  return terms;
}

std::vector<CompositeFieldTerm> brst_g_terms(
    const std::vector<WeightedPoint>& delta_star, const Fan* degeneration,
    const std::optional<std::vector<int64_t>>& extend_deg_star) {
  std::vector<CompositeFieldTerm> terms;
  for (const auto& wp : delta_star) {
    if (wp.value == 0) continue;
    if (wp.point.side != Side::N) throw InputError("g-term point must lie in N");
    CompositeFieldTerm t;
    t.prefactor = {Species::Psi, wp.point.c};
    t.vop.n_shift = wp.point.c;
    t.vop.m_shift.assign(wp.point.c.size(), 0);
    t.vop.degeneration = degeneration;
    t.vop.extend_deg_star = extend_deg_star;
    t.scalar = wp.value;
    terms.push_back(std::move(t));
  }
  return terms;
}

BlockOperator build_brst(const BrstSpec& spec, const Block& source, const Block& target,
                         const std::function<bool(const FockState&)>& may_drop) {
  return assemble_operator(spec.terms, source, target, -1, may_drop);
}

NilpotencyResult check_nilpotent(const BlockOperator& op) {
  NilpotencyResult res;
  if (op.source != op.target)
    throw InputError("nilpotency check needs an endomorphism of a closed family");
  SparseMatrix sq = multiply(op.mat, op.mat);
  if (sq.is_zero()) {
    res.nilpotent = true;
    return res;
  }
  for (int c = 0; c < sq.cols; ++c)
    if (!sq.col[c].empty()) {
      res.witness = op.source->basis[c];
      break;
    }
  return res;
}

// ---------------------------------------------------------------------------
// ideal membership

IdealSolution solve_ideal_membership(const IdealProblem& prob) {
  if (!prob.cone_m) throw InputError("ideal membership needs the cone K");
  if (prob.m0.side != Side::M) throw InputError("m0 must lie in M");
  bool m0_in_delta = false;
  for (const auto& wp : prob.delta) m0_in_delta |= (wp.point == prob.m0);
  if (!m0_in_delta) throw InputError("m0 must be a point of Delta");
  const int rank_n = static_cast<int>(prob.n_basis.size());
  std::vector<LatticeVector> height_one;
  for (const auto& wp : prob.delta) height_one.push_back(wp.point);

  for (int64_t k = 1; k <= rank_n; ++k) {
    // unknowns: c_{i,mu} with mu at height k-1; equations indexed by nu at height k
    auto mus = cone_slice_points(*prob.cone_m, prob.deg_star, k - 1, height_one);
    auto nus = cone_slice_points(*prob.cone_m, prob.deg_star, k, height_one);
    std::map<LatticeVector, int> nu_index;
    for (const auto& nu : nus) nu_index.emplace(nu, static_cast<int>(nu_index.size()));
    int ncols = rank_n * static_cast<int>(mus.size());
    SparseMatrix A = SparseMatrix::zero(static_cast<int>(nus.size()), ncols);
    for (int i = 0; i < rank_n; ++i) {
      for (std::size_t u = 0; u < mus.size(); ++u) {
        int colidx = i * static_cast<int>(mus.size()) + static_cast<int>(u);
        for (const auto& wp : prob.delta) {
          int64_t pair = pairing(wp.point, prob.n_basis[i]);
          if (pair == 0 || wp.value == 0) continue;
          LatticeVector nu = add(mus[u], wp.point);
          auto it = nu_index.find(nu);
          if (it == nu_index.end())
            throw MathError("ideal solve: product exponent escaped the cone slice");
          A.set(it->second, colidx, wp.value * pair);
        }
      }
    }
    std::vector<Rational> b(nus.size(), Rational(0));
    LatticeVector target = scale(k, prob.m0);
    auto it = nu_index.find(target);
    if (it == nu_index.end()) throw MathError("ideal solve: k*m0 missing from cone slice");
    b[it->second] = 1;
    auto x = solve_linear(A, b);
    if (!x) continue;
    IdealSolution sol;
    sol.k = k;
    sol.h.resize(rank_n);
    for (int i = 0; i < rank_n; ++i)
      for (std::size_t u = 0; u < mus.size(); ++u) {
        const Rational& c = (*x)[i * mus.size() + u];
        if (c != 0) sol.h[i][mus[u]] = c;
      }
    // verify by resubstitution, term by term
    std::map<LatticeVector, Rational> poly;
    for (int i = 0; i < rank_n; ++i)
      for (const auto& [mu, c] : sol.h[i])
        for (const auto& wp : prob.delta) {
          int64_t pair = pairing(wp.point, prob.n_basis[i]);
          if (pair == 0) continue;
          poly[add(mu, wp.point)] += c * wp.value * pair;
        }
    std::erase_if(poly, [](const auto& kv) { return kv.second == 0; });
    if (poly.size() != 1 || !poly.count(target) || poly.at(target) != 1)
      throw MathError("ideal solve verification failed");
    return sol;
  }
  throw GenericityError("x^{k m0} is not in the ideal for any k <= rank: f is not generic");
}

// ---------------------------------------------------------------------------
// homotopy operators

std::vector<CompositeFieldTerm> homotopy_simple_terms() {
  CompositeFieldTerm t;
  t.prefactor = {Species::Phi, {1}};
  t.vop.m_shift = {0};
  t.vop.n_shift = {-1};
  return {t};
}

std::vector<CompositeFieldTerm> homotopy_rm0_terms(const IdealProblem& prob,
                                                   const IdealSolution& sol) {
  std::vector<CompositeFieldTerm> terms;
  LatticeVector base = scale(-sol.k, prob.m0);
  for (std::size_t i = 0; i < sol.h.size(); ++i) {
    for (const auto& [mu, c] : sol.h[i]) {
      CompositeFieldTerm t;
      t.prefactor = {Species::Psi, prob.n_basis[i].c};
      t.vop.m_shift = add(base, mu).c;
      t.vop.n_shift.assign(t.vop.m_shift.size(), 0);
      t.scalar = c;
      terms.push_back(std::move(t));
    }
  }
  return terms;
}

BlockOperator build_homotopy(const std::vector<CompositeFieldTerm>& terms, const Block& source,
                             const Block& target,
                             const std::function<bool(const FockState&)>& may_drop) {
  return assemble_operator(terms, source, target, 0, may_drop);
}

bool operator_shift_holds(const BlockOperator& op,
                          const std::function<int64_t(const FockState&)>& grade, int64_t delta,
                          ShiftCheck how) {
  for (int c = 0; c < op.mat.cols; ++c) {
    int64_t gc = grade(op.source->basis[c]);
    for (const auto& [r, v] : op.mat.col[c]) {
      int64_t diff = grade(op.target->basis[r]) - gc;
      if (how == ShiftCheck::Exactly && diff != delta) return false;
      if (how == ShiftCheck::AtLeast && diff < delta) return false;
    }
  }
  return true;
}

}  // namespace latvoa
