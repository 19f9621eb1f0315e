#include "latvoa/fields.hpp"

#include <algorithm>

namespace latvoa {

namespace {

// exp(sum_k letter_k) applied to a seed, grouped by total letter weight.
// Letters commute (they are built from A/B modes of one sign), so the
// exponential expands as products of powers with 1/e! coefficients.
// apply_letter(k, v) must return letter_k applied to v; weight of letter_k is k.
std::vector<StateVector> exp_by_weight(
    const StateVector& seed, int64_t max_weight,
    const std::function<StateVector(int64_t, const StateVector&)>& apply_letter) {
  std::vector<StateVector> acc(static_cast<std::size_t>(max_weight) + 1);
  acc[0] = seed;
  for (int64_t k = 1; k <= max_weight; ++k) {
    std::vector<StateVector> next = acc;
    for (int64_t base = 0; base + k <= max_weight; ++base) {
      if (acc[base].empty()) continue;
      StateVector powered = acc[base];
      Rational coeff(1);
      for (int64_t j = 1; base + j * k <= max_weight; ++j) {
        powered = apply_letter(k, powered);
        if (powered.empty()) break;
        coeff /= j;
        next[base + j * k].add(powered, coeff);
      }
    }
    acc = std::move(next);
  }
  return acc;
}

}  // namespace

SeriesSlice vertex_op_series(const VertexOpSpec& spec, const FockState& s, int64_t pmin,
                             int64_t pmax) {
  SeriesSlice out;
  const int rank = s.rank();
  if (static_cast<int>(spec.m_shift.size()) != rank ||
      static_cast<int>(spec.n_shift.size()) != rank)
    throw InputError("vertex operator shift rank mismatch");
  if (spec.degeneration) {
    LatticeVector nshift = lv(Side::N, spec.n_shift);
    LatticeVector ncharge = lv(Side::N, s.n);
    bool ok = spec.extend_deg_star
                  ? spec.degeneration->common_cone_mod(nshift, ncharge,
                                                       lv(Side::N, *spec.extend_deg_star))
                  : spec.degeneration->common_cone(nshift, ncharge);
    if (!ok) return out;
  }

  const int64_t p0 = dot(spec.m_shift, s.n) + dot(spec.n_shift, s.m);
  Rational sign = (dot(spec.m_shift, s.n) % 2 == 0) ? Rational(1) : Rational(-1);
  if (spec.cocycle_off) sign = 1;

  FockState shifted = s;
  for (int i = 0; i < rank; ++i) {
    shifted.m[i] += spec.m_shift[i];
    shifted.n[i] += spec.n_shift[i];
  }
  StateVector seed;
  seed.add(shifted, sign);

  const int64_t a_max = s.osc_weight();
  const int64_t c_max = std::max<int64_t>(0, pmax - p0 + a_max);
  if (pmax < p0 - a_max) return out;

  // annihilation factor: exp(-sum_{k>=1} (m.B[k] + n.A[k]) z^{-k} / k)
  auto ann_letter = [&](int64_t k, const StateVector& v) {
    StateVector r = apply_vector_mode(Species::B, spec.m_shift, static_cast<int32_t>(k), v);
    r.add(apply_vector_mode(Species::A, spec.n_shift, static_cast<int32_t>(k), v));
    return r.scaled(Rational(-1) / Rational(k));
  };
  auto by_ann = exp_by_weight(seed, a_max, ann_letter);

  // creation factor: exp(+sum_{k>=1} (m.B[-k] + n.A[-k]) z^{k} / k)
  auto cre_letter = [&](int64_t k, const StateVector& v) {
    StateVector r = apply_vector_mode(Species::B, spec.m_shift, static_cast<int32_t>(-k), v);
    r.add(apply_vector_mode(Species::A, spec.n_shift, static_cast<int32_t>(-k), v));
    return r.scaled(Rational(1) / Rational(k));
  };
  for (int64_t a = 0; a <= a_max; ++a) {
    if (by_ann[a].empty()) continue;
    auto by_cre = exp_by_weight(by_ann[a], c_max, cre_letter);
    for (int64_t c = 0; c <= c_max; ++c) {
      int64_t p = p0 + c - a;
      if (p < pmin || p > pmax || by_cre[c].empty()) continue;
      out.powers[p].add(by_cre[c]);
    }
  }
  return out;
}

StateVector field_mode_apply(const CompositeFieldTerm& term, const StateVector& v, int64_t zpow) {
  StateVector out;
  for (const auto& [s, coeff] : v.terms) {
    int64_t p0 = dot(term.vop.m_shift, s.n) + dot(term.vop.n_shift, s.m);
    int64_t a_max = s.osc_weight();
    int64_t depth = s.max_fermion_depth();
    int64_t pmin, pmax;
    if (!term.prefactor) {
      pmin = pmax = zpow;
    } else {
      pmin = p0 - a_max;
      // annihilating prefactor modes only contract fermions already in s
      pmax = zpow + 1 + depth;
      if (pmax < pmin) continue;
    }
    SeriesSlice slice = vertex_op_series(term.vop, s, pmin, pmax);
    for (const auto& [p, sv] : slice.powers) {
      if (!term.prefactor) {
        out.add(sv, coeff * term.scalar);
        continue;
      }
      const auto& [species, cvec] = *term.prefactor;
      // Phi is moded z^{-k}, Psi is moded z^{-k-1}
      int64_t k = (species == Species::Phi) ? p - zpow : p - zpow - 1;
      if (k < INT32_MIN || k > INT32_MAX) continue;
      StateVector hit = apply_vector_mode(species, cvec, static_cast<int32_t>(k), sv);
      out.add(hit, coeff * term.scalar);
    }
  }
  return out;
}

StateVector apply_terms(const std::vector<CompositeFieldTerm>& terms, const StateVector& v,
                        int64_t zpow) {
  StateVector out;
  for (const auto& t : terms) out.add(field_mode_apply(t, v, zpow));
  return out;
}

BlockOperator assemble_operator(const std::vector<CompositeFieldTerm>& terms, const Block& source,
                                const Block& target, int64_t zpow,
                                const std::function<bool(const FockState&)>& may_drop) {
  BlockOperator op;
  op.source = &source;
  op.target = &target;
  op.mat = SparseMatrix::zero(target.dim(), source.dim());
  for (int j = 0; j < source.dim(); ++j) {
    StateVector unit;
    unit.add(source.basis[j], Rational(1));
    StateVector image = apply_terms(terms, unit, zpow);
    for (const auto& [s, c] : image.terms) {
      int i = target.find(s);
      if (i < 0) {
        if (may_drop && may_drop(s)) continue;
        throw MathError("image state " + to_string(s) + " missing from target block (" +
                        target.description + ")");
      }
      op.mat.set(i, j, c);
    }
  }
  return op;
}

// ---------------------------------------------------------------------------
// quadratic fields

const char* qfield_name(QField f) {
  switch (f) {
    case QField::L: return "L";
    case QField::J: return "J";
    case QField::G: return "G";
    case QField::Q: return "Q";
    case QField::LXA: return "LXA";
    case QField::LXB: return "LXB";
    case QField::LN2: return "LN2";
  }
  return "?";
}

namespace {

int field_weight(Species sp) { return sp == Species::Phi ? 0 : 1; }

struct BilinearTerm {
  Species left, right;
  int dleft = 0, dright = 0;  // derivative counts
  Rational scalar = Rational(1);
};

struct LinearTerm {
  Species sp;
  std::vector<int64_t> coeff;  // on the pairing side of sp
  int deriv = 0;
  Rational scalar = Rational(1);
};

struct FieldExpr {
  std::vector<BilinearTerm> bilinear;
  std::vector<LinearTerm> linear;
};

Rational deriv_factor(int k, int weight, int derivs) {
  // (d/dz)^j X: mode k of the weight-(w+j) field picks up prod (-k - w - i)
  Rational f(1);
  for (int i = 0; i < derivs; ++i) f *= Rational(-k - weight - i);
  return f;
}

// applies :X_i[k1] Y_i[k2]: summed over directions i (dual-basis contraction)
StateVector apply_no_pair(Species xs, int32_t k1, Species ys, int32_t k2, const FockState& s) {
  StateVector out;
  int rank = s.rank();
  bool swap = is_annihilation(ModeKey{xs, 0, k1}) && is_creation(ModeKey{ys, 0, k2});
  Rational sign(1);
  if (swap && is_fermionic(xs) && is_fermionic(ys)) sign = -1;
  for (int16_t d = 0; d < rank; ++d) {
    ModeKey kx{xs, d, k1}, ky{ys, d, k2};
    StateVector one;
    one.add(s, Rational(1));
    StateVector r = swap ? apply_unit_mode(ky, apply_unit_mode(kx, one))
                         : apply_unit_mode(kx, apply_unit_mode(ky, one));
    out.add(r, sign);
  }
  return out;
}

FieldExpr build_field(QField which, const GradingConfig& cfg) {
  FieldExpr e;
  auto deg = [&]() { return cfg.need_deg(); };
  auto degs = [&]() { return cfg.need_deg_star(); };
  switch (which) {
    case QField::L:
      e.bilinear.push_back({Species::B, Species::A, 0, 0, Rational(1)});
      e.bilinear.push_back({Species::Phi, Species::Psi, 1, 0, Rational(1)});
      break;
    case QField::J:
      e.bilinear.push_back({Species::Phi, Species::Psi, 0, 0, Rational(1)});
      e.linear.push_back({Species::B, deg(), 0, Rational(1)});
      e.linear.push_back({Species::A, degs(), 0, Rational(-1)});
      break;
    case QField::Q:
      e.bilinear.push_back({Species::A, Species::Phi, 0, 0, Rational(1)});
      e.linear.push_back({Species::Phi, deg(), 1, Rational(-1)});
      break;
    case QField::G:
      e.bilinear.push_back({Species::B, Species::Psi, 0, 0, Rational(1)});
      e.linear.push_back({Species::Psi, degs(), 1, Rational(-1)});
      break;
    case QField::LXA:
      e.bilinear.push_back({Species::B, Species::A, 0, 0, Rational(1)});
      e.bilinear.push_back({Species::Phi, Species::Psi, 1, 0, Rational(1)});
      e.linear.push_back({Species::A, degs(), 1, Rational(-1)});
      break;
    case QField::LXB:
      e.bilinear.push_back({Species::B, Species::A, 0, 0, Rational(1)});
      e.bilinear.push_back({Species::Phi, Species::Psi, 0, 1, Rational(-1)});
      e.linear.push_back({Species::B, deg(), 1, Rational(-1)});
      break;
    case QField::LN2:
      e.bilinear.push_back({Species::B, Species::A, 0, 0, Rational(1)});
      e.bilinear.push_back({Species::Phi, Species::Psi, 1, 0, Rational(1, 2)});
      e.bilinear.push_back({Species::Phi, Species::Psi, 0, 1, Rational(-1, 2)});
      e.linear.push_back({Species::A, degs(), 1, Rational(-1, 2)});
      e.linear.push_back({Species::B, deg(), 1, Rational(-1, 2)});
      break;
  }
  return e;
}

}  // namespace

BlockOperator quadratic_field_mode(QField which, int k, const Block& source, const Block& target,
                                   const GradingConfig& cfg) {
  FieldExpr expr = build_field(which, cfg);
  int64_t wmax_src = 0, wmax_tgt = 0;
  for (const auto& s : source.basis) wmax_src = std::max(wmax_src, s.osc_weight());
  for (const auto& s : target.basis) wmax_tgt = std::max(wmax_tgt, s.osc_weight());
  const int KB = static_cast<int>(wmax_src + wmax_tgt + std::abs(k) + 4);

  BlockOperator op;
  op.source = &source;
  op.target = &target;
  op.mat = SparseMatrix::zero(target.dim(), source.dim());
  for (int j = 0; j < source.dim(); ++j) {
    const FockState& s = source.basis[j];
    StateVector image;
    for (const auto& bt : expr.bilinear) {
      int wl = field_weight(bt.left), wr = field_weight(bt.right);
      for (int k1 = -KB; k1 <= KB; ++k1) {
        int k2 = k - k1;
        if (k2 < -KB || k2 > KB) continue;
        Rational f = deriv_factor(k1, wl, bt.dleft) * deriv_factor(k2, wr, bt.dright) * bt.scalar;
        if (f == 0) continue;
        StateVector part = apply_no_pair(bt.left, k1, bt.right, k2, s);
        image.add(part, f);
      }
    }
    for (const auto& lt : expr.linear) {
      Rational f = deriv_factor(k, field_weight(lt.sp), lt.deriv) * lt.scalar;
      if (f == 0) continue;
      StateVector one;
      one.add(s, Rational(1));
      image.add(apply_vector_mode(lt.sp, lt.coeff, k, one), f);
    }
    for (const auto& [t, c] : image.terms) {
      int i = target.find(t);
      if (i < 0)
        throw MathError(std::string("block not closed under ") + qfield_name(which) + "[" +
                        std::to_string(k) + "]: image state " + to_string(t));
      op.mat.set(i, j, c);
    }
  }
  return op;
}

// ---------------------------------------------------------------------------
// mirror involution

StateVector mirror_swap(const FockState& s) {
  FockState t;
  t.m = s.n;
  t.n = s.m;
  for (const auto& kkey : s.bosonic) {
    ModeKey nk = kkey;
    nk.sp = (kkey.sp == Species::A) ? Species::B : Species::A;
    t.bosonic.push_back(nk);
  }
  std::sort(t.bosonic.begin(), t.bosonic.end());
  // Phi[k] -> Psi[k-1], Psi[k] -> Phi[k+1]; track the sorting permutation sign
  std::vector<ModeKey> mapped;
  for (const auto& kkey : s.fermionic) {
    if (kkey.sp == Species::Phi)
      mapped.push_back(ModeKey{Species::Psi, kkey.dir, kkey.mode - 1});
    else
      mapped.push_back(ModeKey{Species::Phi, kkey.dir, kkey.mode + 1});
  }
  int sign = 1;
  std::vector<ModeKey> word = mapped;
  for (std::size_t i = 0; i < word.size(); ++i)
    for (std::size_t j = i + 1; j < word.size(); ++j)
      if (word[j] < word[i]) std::swap(word[i], word[j]), sign = -sign;
  t.fermionic = std::move(word);
  if (dot(s.m, s.n) % 2 != 0) sign = -sign;
  StateVector out;
  out.add(t, Rational(sign));
  return out;
}

CompositeFieldTerm mirror_term(const CompositeFieldTerm& t) {
  if (t.vop.degeneration)
    throw CapabilityError("mirror_term does not transport fan degenerations");
  CompositeFieldTerm out;
  out.scalar = t.scalar;
  out.vop.m_shift = t.vop.n_shift;
  out.vop.n_shift = t.vop.m_shift;
  if (t.prefactor) {
    Species sp = t.prefactor->first == Species::Phi ? Species::Psi : Species::Phi;
    out.prefactor = {sp, t.prefactor->second};
  }
  return out;
}

}  // namespace latvoa
