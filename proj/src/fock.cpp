#include "latvoa/fock.hpp"

#include <algorithm>
#include <sstream>

namespace latvoa {

const char* species_name(Species s) {
  switch (s) {
    case Species::A: return "A";
    case Species::B: return "B";
    case Species::Phi: return "Phi";
    case Species::Psi: return "Psi";
  }
  return "?";
}

bool is_creation(const ModeKey& k) {
  if (k.sp == Species::Phi) return k.mode <= 0;
  return k.mode <= -1;
}

bool is_annihilation(const ModeKey& k) {
  if (k.sp == Species::Psi) return k.mode >= 0;
  return k.mode >= 1;  // mode 0 of A and B is diagonal, not annihilating
}

int64_t FockState::osc_weight() const {
  int64_t w = 0;
  for (const auto& k : bosonic) w -= k.mode;
  for (const auto& k : fermionic) w -= k.mode;
  return w;
}

int FockState::max_fermion_depth() const {
  int d = 0;
  for (const auto& k : fermionic) d = std::max(d, -static_cast<int>(k.mode));
  return d;
}

FockState vacuum(std::vector<int64_t> m, std::vector<int64_t> n) {
  FockState s;
  s.m = std::move(m);
  s.n = std::move(n);
  return s;
}

std::string to_string(const FockState& s) {
  std::ostringstream os;
  for (const auto& k : s.bosonic) os << species_name(k.sp) << k.dir + 1 << "[" << k.mode << "]";
  for (const auto& k : s.fermionic) os << species_name(k.sp) << k.dir + 1 << "[" << k.mode << "]";
  os << "|" << to_string(lv(Side::M, s.m)) << "," << to_string(lv(Side::N, s.n)) << ">";
  return os.str();
}

void StateVector::add(const FockState& s, const Rational& c) {
  if (c == 0) return;
  auto it = terms.find(s);
  if (it == terms.end()) {
    terms.emplace(s, c);
    return;
  }
  it->second += c;
  if (it->second == 0) terms.erase(it);
}

void StateVector::add(const StateVector& v, const Rational& c) {
  for (const auto& [s, x] : v.terms) add(s, x * c);
}

StateVector StateVector::scaled(const Rational& c) const {
  StateVector out;
  if (c == 0) return out;
  for (const auto& [s, x] : terms) out.terms.emplace(s, x * c);
  return out;
}

std::string to_string(const StateVector& v) {
  if (v.terms.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [s, c] : v.terms) {
    if (!first) os << " + ";
    first = false;
    if (c != 1) os << rational_to_string(c) << "*";
    os << to_string(s);
  }
  return os.str();
}

bool modes_contract(const ModeKey& a, const ModeKey& b) {
  if (a.dir != b.dir) return false;
  if (a.mode + b.mode != 0) return false;
  auto pair_ok = [](Species x, Species y) {
    return (x == Species::A && y == Species::B) || (x == Species::B && y == Species::A) ||
           (x == Species::Phi && y == Species::Psi) || (x == Species::Psi && y == Species::Phi);
  };
  return pair_ok(a.sp, b.sp);
}

Rational unit_bracket(const ModeKey& a, const ModeKey& b) {
  if (!modes_contract(a, b)) return Rational(0);
  if (a.sp == Species::B && b.sp == Species::A) return Rational(a.mode);
  if (a.sp == Species::A && b.sp == Species::B) return Rational(b.mode) * -1;  // -[B,A]
  // fermionic anticommutator is symmetric
  return Rational(1);
}

StateVector apply_unit_mode(const ModeKey& op, const FockState& s) {
  StateVector out;
  const int rank = s.rank();
  if (op.dir < 0 || op.dir >= rank) throw InputError("mode direction out of range");

  if (op.sp == Species::A || op.sp == Species::B) {
    if (op.mode == 0) {
      int64_t eig = (op.sp == Species::A) ? s.m[op.dir] : s.n[op.dir];
      if (eig != 0) out.add(s, Rational(eig));
      return out;
    }
    if (op.mode <= -1) {
      FockState t = s;
      t.bosonic.insert(std::upper_bound(t.bosonic.begin(), t.bosonic.end(), op), op);
      out.add(t, Rational(1));
      return out;
    }
    // annihilator: contract against each matching partner in the multiset
    Species partner = (op.sp == Species::A) ? Species::B : Species::A;
    ModeKey want{partner, op.dir, -op.mode};
    int64_t mult = 0;
    for (const auto& k : s.bosonic)
      if (k == want) ++mult;
    if (mult == 0) return out;
    FockState t = s;
    auto it = std::find(t.bosonic.begin(), t.bosonic.end(), want);
    t.bosonic.erase(it);
    // [B[k],A[-k]] = k and [A[k],B[-k]] = k for k >= 1
    out.add(t, Rational(op.mode) * mult);
    return out;
  }

  // fermionic
  if (is_creation(op)) {
    auto pos = std::lower_bound(s.fermionic.begin(), s.fermionic.end(), op);
    if (pos != s.fermionic.end() && *pos == op) return out;  // exterior square
    int crossings = static_cast<int>(pos - s.fermionic.begin());
    FockState t = s;
    t.fermionic.insert(t.fermionic.begin() + crossings, op);
    out.add(t, (crossings % 2) ? Rational(-1) : Rational(1));
    return out;
  }
  // fermionic annihilator: walk the word left to right
  Species partner = (op.sp == Species::Phi) ? Species::Psi : Species::Phi;
  ModeKey want{partner, op.dir, -op.mode};
  int sign = 1;
  for (std::size_t j = 0; j < s.fermionic.size(); ++j) {
    if (s.fermionic[j] == want) {
      FockState t = s;
      t.fermionic.erase(t.fermionic.begin() + j);
      out.add(t, Rational(sign));
      return out;  // keys are distinct, only one contraction possible
    }
    sign = -sign;
  }
  return out;
}

StateVector apply_unit_mode(const ModeKey& op, const StateVector& v) {
  StateVector out;
  for (const auto& [s, c] : v.terms) {
    StateVector part = apply_unit_mode(op, s);
    out.add(part, c);
  }
  return out;
}

StateVector apply_vector_mode(Species sp, std::span<const int64_t> coeff, int32_t mode,
                              const StateVector& v) {
  StateVector out;
  for (int d = 0; d < static_cast<int>(coeff.size()); ++d) {
    if (coeff[d] == 0) continue;
    ModeKey op{sp, static_cast<int16_t>(d), mode};
    out.add(apply_unit_mode(op, v), Rational(coeff[d]));
  }
  return out;
}

StateVector normal_form(const std::vector<ModeKey>& raw, const FockState& base) {
  StateVector v;
  v.add(base, Rational(1));
  for (auto it = raw.rbegin(); it != raw.rend(); ++it) v = apply_unit_mode(*it, v);
  return v;
}

const std::vector<int64_t>& GradingConfig::need_deg() const {
  if (!deg) throw InputError("grading requires deg to be configured");
  return *deg;
}

const std::vector<int64_t>& GradingConfig::need_deg_star() const {
  if (!deg_star) throw InputError("grading requires deg* to be configured");
  return *deg_star;
}

int64_t L0(const FockState& s) { return dot(s.m, s.n) + s.osc_weight(); }

std::pair<int, int> fermion_counts(const FockState& s) {
  int phi = 0, psi = 0;
  for (const auto& k : s.fermionic) (k.sp == Species::Phi ? phi : psi)++;
  return {phi, psi};
}

int64_t J0(const FockState& s, const GradingConfig& g) {
  auto [phi, psi] = fermion_counts(s);
  return (phi - psi) + dot(g.need_deg(), s.n) - dot(g.need_deg_star(), s.m);
}

int64_t LXA0(const FockState& s, const GradingConfig& g) {
  return L0(s) + dot(g.need_deg_star(), s.m);
}

int64_t LXB0(const FockState& s, const GradingConfig& g) {
  auto [phi, psi] = fermion_counts(s);
  return L0(s) + (phi - psi) + dot(g.need_deg(), s.n);
}

// ---------------------------------------------------------------------------
// blocks

int Block::find(const FockState& s) const {
  auto it = index_.find(s);
  return it == index_.end() ? -1 : it->second;
}

void Block::freeze() {
  std::sort(basis.begin(), basis.end());
  basis.erase(std::unique(basis.begin(), basis.end()), basis.end());
  index_.clear();
  for (int i = 0; i < static_cast<int>(basis.size()); ++i) index_.emplace(basis[i], i);
}

void enumerate_oscillators(int rank, int64_t weight,
                           const std::function<void(const std::vector<ModeKey>&,
                                                    const std::vector<ModeKey>&)>& hook) {
  if (weight < 0) return;
  // slots in canonical order; fermions carry multiplicity at most one
  struct Slot {
    ModeKey key;
    int64_t w;
    bool fermionic;
  };
  std::vector<Slot> slots;
  for (int16_t d = 0; d < rank; ++d) slots.push_back({{Species::Phi, d, 0}, 0, true});
  for (int64_t w = 1; w <= weight; ++w) {
    for (int16_t d = 0; d < rank; ++d)
      slots.push_back({{Species::A, d, static_cast<int32_t>(-w)}, w, false});
    for (int16_t d = 0; d < rank; ++d)
      slots.push_back({{Species::B, d, static_cast<int32_t>(-w)}, w, false});
    for (int16_t d = 0; d < rank; ++d)
      slots.push_back({{Species::Phi, d, static_cast<int32_t>(-w)}, w, true});
    for (int16_t d = 0; d < rank; ++d)
      slots.push_back({{Species::Psi, d, static_cast<int32_t>(-w)}, w, true});
  }
  std::vector<ModeKey> bos, fer;
  auto rec = [&](auto&& self, std::size_t i, int64_t left) -> void {
    if (i == slots.size()) {
      if (left == 0) hook(bos, fer);
      return;
    }
    const Slot& sl = slots[i];
    // multiplicity 0
    self(self, i + 1, left);
    if (sl.fermionic) {
      if (sl.w <= left) {
        fer.push_back(sl.key);
        self(self, i + 1, left - sl.w);
        fer.pop_back();
      }
      return;
    }
    int64_t maxmult = sl.w == 0 ? 0 : left / sl.w;
    for (int64_t c = 1; c <= maxmult; ++c) {
      for (int64_t t = 0; t < c; ++t) bos.push_back(sl.key);
      self(self, i + 1, left - c * sl.w);
      for (int64_t t = 0; t < c; ++t) bos.pop_back();
    }
  };
  rec(rec, 0, weight);
}

static FockState assemble_state(const std::vector<int64_t>& m, const std::vector<int64_t>& n,
                                std::vector<ModeKey> bos, std::vector<ModeKey> fer) {
  FockState s;
  s.m = m;
  s.n = n;
  std::sort(bos.begin(), bos.end());
  std::sort(fer.begin(), fer.end());
  s.bosonic = std::move(bos);
  s.fermionic = std::move(fer);
  return s;
}

Block block_fixed_charges(const std::vector<int64_t>& m, const std::vector<int64_t>& n,
                          int64_t L, std::optional<int64_t> J, const GradingConfig& cfg) {
  Block b;
  int rank = static_cast<int>(m.size());
  int64_t W = L - dot(m, n);
  if (W >= 0) {
    enumerate_oscillators(rank, W, [&](const auto& bos, const auto& fer) {
      FockState s = assemble_state(m, n, bos, fer);
      if (J && J0(s, cfg) != *J) return;
      b.basis.push_back(std::move(s));
    });
  }
  std::ostringstream os;
  os << "fixed-charges m=" << to_string(lv(Side::M, m)) << " n=" << to_string(lv(Side::N, n))
     << " L=" << L;
  if (J) os << " J=" << *J;
  b.description = os.str();
  b.freeze();
  return b;
}

// Minimal oscillator weight needed for |count| net fermions of one species.
// Psi modes cost 1,2,3,... per direction; Phi modes cost 0,1,2,...
static int64_t min_fermion_weight(int64_t count, int rank, bool phi) {
  if (count <= 0) return 0;
  int64_t per = count / rank, extra = count % rank;
  auto tri = [](int64_t t) { return t * (t + 1) / 2; };
  int64_t w = 0;
  for (int d = 0; d < rank; ++d) {
    int64_t t = per + (d < extra ? 1 : 0);
    w += phi ? tri(t - 1) : tri(t);
  }
  return w;
}

static int64_t min_imbalance_weight(int64_t f, int rank) {
  return f >= 0 ? min_fermion_weight(f, rank, /*phi=*/true)
                : min_fermion_weight(-f, rank, /*phi=*/false);
}

Block block_chart(const std::vector<int64_t>& m, const Cone& cone_nside, int64_t L, int64_t J,
                  const std::vector<LatticeVector>& height_one_points) {
  Block b;
  int rank = static_cast<int>(m.size());
  LatticeVector deg = degree_vector(cone_nside);
  // shift r with m + r deg_C in C: r = max(0, max_g -m.g) over generators
  int64_t r = 0;
  for (const auto& g : cone_nside.generators) r = std::max(r, -dot(m, g.c));
  for (int64_t hn = 0;; ++hn) {
    int64_t f = J - hn;
    bool possible = min_imbalance_weight(f, rank) <= L + r * hn;
    if (!possible && hn > J && (hn - J + rank - 1) / rank > r) break;  // fails forever after
    if (!possible) continue;
    for (const auto& n : cone_slice_points(cone_nside, deg, hn, height_one_points)) {
      int64_t W = L - dot(m, n.c);
      if (W < 0) continue;
      enumerate_oscillators(rank, W, [&](const auto& bos, const auto& fer) {
        FockState s = assemble_state(m, n.c, bos, fer);
        auto [phi, psi] = fermion_counts(s);
        if ((phi - psi) + hn != J) return;
        b.basis.push_back(std::move(s));
      });
    }
  }
  std::ostringstream os;
  os << "chart m=" << to_string(lv(Side::M, m)) << " L=" << L << " J=" << J;
  b.description = os.str();
  b.freeze();
  return b;
}

Block block_fan_support(const std::vector<int64_t>& m, const Fan& fan,
                        const LatticeVector& deg, int64_t L, int64_t J,
                        const std::vector<LatticeVector>& height_one_points) {
  Block b;
  int rank = static_cast<int>(m.size());
  int64_t r = 0;
  for (const auto& c : fan.cones)
    for (const auto& g : c.generators) r = std::max(r, -dot(m, g.c));
  auto maximal = fan.maximal_cones();
  for (int64_t hn = 0;; ++hn) {
    int64_t f = J - hn;
    bool possible = min_imbalance_weight(f, rank) <= L + r * hn;
    if (!possible && hn > J && (hn - J + rank - 1) / rank > r) break;
    if (!possible) continue;
    std::set<LatticeVector> pts;
    for (const auto* c : maximal)
      for (const auto& n : cone_slice_points(*c, deg, hn, height_one_points)) pts.insert(n);
    for (const auto& n : pts) {
      int64_t W = L - dot(m, n.c);
      if (W < 0) continue;
      enumerate_oscillators(rank, W, [&](const auto& bos, const auto& fer) {
        FockState s = assemble_state(m, n.c, bos, fer);
        auto [phi, psi] = fermion_counts(s);
        if ((phi - psi) + hn != J) return;
        b.basis.push_back(std::move(s));
      });
    }
  }
  std::ostringstream os;
  os << "fan-support m=" << to_string(lv(Side::M, m)) << " L=" << L << " J=" << J;
  b.description = os.str();
  b.freeze();
  return b;
}

Block block_dual_cone(const DualConeBlockData& data, int64_t LXA, int64_t J) {
  Block b;
  const Cone& K = *data.cone_m;
  int rank = K.rank;
  int64_t dd = dot(data.deg.c, data.deg_star.c);
  // m side: m + D deg in K, flat L0 = LXA - hm >= -T caps hm above
  int64_t hm_lo = -data.shift_m * dd;
  int64_t hm_hi = LXA + data.floor_T;
  for (int64_t hm = hm_lo; hm <= hm_hi; ++hm) {
    auto mslice =
        cone_slice_points(K, data.deg_star, hm + data.shift_m * dd, data.delta_points);
    if (mslice.empty()) continue;
    for (int64_t hn = -data.shift_n * dd; hn <= data.cap_hn; ++hn) {
      auto in_region = [&](const LatticeVector& n) {
        LatticeVector shifted = add(n, scale(data.shift_n, lv(Side::N, data.deg_star.c)));
        if (data.fan) return data.fan->contains_point(shifted);
        return cone_contains(*data.cone_n, shifted);
      };
      // enumerate n at height hn inside the (shifted) region
      std::set<LatticeVector> nset;
      if (data.fan) {
        for (const auto* c : data.fan->maximal_cones())
          for (const auto& nn :
               cone_slice_points(*c, data.deg, hn + data.shift_n * dd, data.delta_star_points))
            nset.insert(sub(nn, scale(data.shift_n, lv(Side::N, data.deg_star.c))));
      } else {
        for (const auto& nn : cone_slice_points(*data.cone_n, data.deg, hn + data.shift_n * dd,
                                                data.delta_star_points))
          nset.insert(sub(nn, scale(data.shift_n, lv(Side::N, data.deg_star.c))));
      }
      for (const auto& nv : nset) {
        if (!in_region(nv)) continue;
        for (const auto& mshifted : mslice) {
          LatticeVector mv = sub(lv(Side::M, mshifted.c),
                                 scale(data.shift_m, lv(Side::M, data.deg.c)));
          int64_t W = LXA - dot(mv.c, nv.c) - hm;
          if (W < 0) continue;
          int64_t f = J - hn + hm;
          if (min_imbalance_weight(f, rank) > W) continue;
          enumerate_oscillators(rank, W, [&](const auto& bos, const auto& fer) {
            FockState s = assemble_state(mv.c, nv.c, bos, fer);
            auto [phi, psi] = fermion_counts(s);
            if ((phi - psi) != f) return;
            b.basis.push_back(std::move(s));
          });
        }
      }
    }
  }
  std::ostringstream os;
  os << "dual-cone LXA=" << LXA << " J=" << J << " D=" << data.shift_m << " E=" << data.shift_n
     << " T=" << data.floor_T << " HN=" << data.cap_hn;
  b.description = os.str();
  b.freeze();
  return b;
}

}  // namespace latvoa
