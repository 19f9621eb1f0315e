// Lattice Fock space: canonical states, normal ordering, gradings, graded blocks.
#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "latvoa/lattice.hpp"

namespace latvoa {

enum class Species : uint8_t { A = 0, B = 1, Phi = 2, Psi = 3 };

inline bool is_fermionic(Species s) { return s == Species::Phi || s == Species::Psi; }
const char* species_name(Species s);

// One mode of one free field in one lattice direction.
struct ModeKey {
  Species sp = Species::A;
  int16_t dir = 0;   // 0-based basis direction
  int32_t mode = 0;  // bracket mode number

  // canonical order: species, then direction, then mode descending
  auto operator<=>(const ModeKey& o) const {
    if (auto c = sp <=> o.sp; c != 0) return c;
    if (auto c = dir <=> o.dir; c != 0) return c;
    return o.mode <=> mode;
  }
  bool operator==(const ModeKey&) const = default;
};

// Creation ranges: A, B, Psi at mode <= -1; Phi at mode <= 0.
bool is_creation(const ModeKey& k);
// Modes annihilating every charge vacuum |m,n>: A, B, Phi at >= 1; Psi at >= 0.
bool is_annihilation(const ModeKey& k);

// A canonically ordered basis monomial: charges plus creation-mode content.
struct FockState {
  std::vector<int64_t> m;       // A[0] eigenvalue, in M
  std::vector<int64_t> n;       // B[0] eigenvalue, in N
  std::vector<ModeKey> bosonic;   // A/B creation modes, sorted multiset
  std::vector<ModeKey> fermionic; // Phi/Psi creation modes, sorted, distinct

  int rank() const { return static_cast<int>(m.size()); }
  int64_t osc_weight() const;       // sum of -mode over all keys
  int max_fermion_depth() const;    // max of -mode over fermionic keys, 0 if none
  auto operator<=>(const FockState&) const = default;
};

FockState vacuum(std::vector<int64_t> m, std::vector<int64_t> n);
std::string to_string(const FockState& s);

// Sparse exact linear combination of FockStates. No zero coefficients stored.
struct StateVector {
  std::map<FockState, Rational> terms;

  bool empty() const { return terms.empty(); }
  void add(const FockState& s, const Rational& c);
  void add(const StateVector& v, const Rational& c = Rational(1));
  StateVector scaled(const Rational& c) const;
  bool operator==(const StateVector&) const = default;
};

std::string to_string(const StateVector& v);

// Applies a single unit-direction mode on the left of a basis state,
// normal-ordering the result: [m.B[k], n.A[l]] = (m.n) k delta_{k+l},
// {m.Phi[k], n.Psi[l]} = (m.n) delta_{k+l}, fermion swaps contribute -1.
StateVector apply_unit_mode(const ModeKey& op, const FockState& s);
StateVector apply_unit_mode(const ModeKey& op, const StateVector& v);

// Vector-contracted mode c.X[mode] with c on the pairing side of the species.
StateVector apply_vector_mode(Species sp, std::span<const int64_t> coeff, int32_t mode,
                              const StateVector& v);

// Normal-orders a raw operator word applied to a base state (rightmost acts first).
StateVector normal_form(const std::vector<ModeKey>& raw, const FockState& base);

// Super-commutator sign and contraction of two unit modes, for tests.
Rational unit_bracket(const ModeKey& a, const ModeKey& b);  // [a,b]_{-+} scalar part
bool modes_contract(const ModeKey& a, const ModeKey& b);

struct GradingConfig {
  std::optional<std::vector<int64_t>> deg;       // element of M
  std::optional<std::vector<int64_t>> deg_star;  // element of N

  const std::vector<int64_t>& need_deg() const;
  const std::vector<int64_t>& need_deg_star() const;
};

int64_t L0(const FockState& s);  // m.n + oscillator weight
std::pair<int, int> fermion_counts(const FockState& s);  // (#Phi, #Psi)
int64_t J0(const FockState& s, const GradingConfig& g);   // #Phi-#Psi + deg.n - deg*.m
int64_t LXA0(const FockState& s, const GradingConfig& g); // L0 + deg*.m
int64_t LXB0(const FockState& s, const GradingConfig& g); // L0 + #Phi-#Psi + deg.n

// -----------------------------------------------------------------------------
// graded blocks

struct Block {
  std::vector<FockState> basis;  // sorted, deterministic
  std::string description;

  int dim() const { return static_cast<int>(basis.size()); }
  int find(const FockState& s) const;  // -1 when absent
  void freeze();                       // sorts and builds the index

 private:
  std::map<FockState, int> index_;
};

// Enumerates all oscillator contents (bosonic multiset + fermionic word) of
// total weight W for the given rank, including weightless Phi[0] factors.
// The hook receives each (bosonic, fermionic) pair in deterministic order.
void enumerate_oscillators(int rank, int64_t weight,
                           const std::function<void(const std::vector<ModeKey>&,
                                                    const std::vector<ModeKey>&)>& hook);

// Pattern (i): both charges fixed, L0 fixed (J optionally fixed).
Block block_fixed_charges(const std::vector<int64_t>& m, const std::vector<int64_t>& n,
                          int64_t L, std::optional<int64_t> J, const GradingConfig& cfg);

// Pattern (iii): fixed m-charge, n ranging over a Gorenstein cone, L0 and J0
// fixed. The certified height bound uses the shift r with m + r deg_C in C.
Block block_chart(const std::vector<int64_t>& m, const Cone& cone_nside, int64_t L, int64_t J,
                  const std::vector<LatticeVector>& height_one_points);

// n ranging over the support of a fan (union of cones), otherwise as block_chart.
Block block_fan_support(const std::vector<int64_t>& m, const Fan& fan,
                        const LatticeVector& deg, int64_t L, int64_t J,
                        const std::vector<LatticeVector>& height_one_points);

// Pattern (ii) with exhaustion: m in K - D deg, n in the fan support (or in K*)
// shifted by -E deg*, at fixed LXA0 and J0. Charges escaping through the cone
// shifts cannot occur (the differentials move into the cones); the flat-L0
// floor and the n-height cap are quotient truncations, so the induced operator
// still squares to zero. Blocks are finite for every parameter choice.
struct DualConeBlockData {
  const Cone* cone_m = nullptr;             // K in M
  std::vector<LatticeVector> delta_points;  // height-one points of K
  const Cone* cone_n = nullptr;             // K* in N, used when fan is null
  const Fan* fan = nullptr;                 // support of Sigma, overrides cone_n
  std::vector<LatticeVector> delta_star_points;
  LatticeVector deg;       // in M
  LatticeVector deg_star;  // in N
  int64_t shift_m = 0;     // D: m + D deg in K
  int64_t shift_n = 0;     // E: n + E deg* in the n-region
  int64_t floor_T = 0;     // flat L0 >= -T
  int64_t cap_hn = 0;      // deg-height of n <= cap
};

Block block_dual_cone(const DualConeBlockData& data, int64_t LXA, int64_t J);

}  // namespace latvoa
