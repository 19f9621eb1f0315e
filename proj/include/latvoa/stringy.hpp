// Weight-zero string-de-Rham complex: V_C (x) Lambda*M with the contraction
// differential and the wedge differential, bigraded cohomology, and Cech
// hypercohomology over a complete fan.
#pragma once

#include "latvoa/brst.hpp"

namespace latvoa {

struct StringForm {
  LatticeVector m;        // in C (M side), m.n = 0
  LatticeVector n;        // in C* (N side)
  std::vector<int> word;  // strictly increasing indices into the basis of M

  auto operator<=>(const StringForm&) const = default;
};

std::string to_string(const StringForm& f);

struct StringComplexSlice {
  Cone cone;          // chart cone C* in N
  Cone dual;          // C in M
  LatticeVector deg;  // deg_C
  int64_t m_box_cap = 0;   // |coordinates of m| <= cap
  int64_t n_height_cap = 0;  // deg_C . n <= cap (quotient truncation)
  std::vector<StringForm> basis;
  SparseMatrix brst0;   // sum_n g_n y^n contr(n), zero when m.(n+n0) != 0
  SparseMatrix derham;  // w -> w ^ m

  int find(const StringForm& f) const;
  int64_t j_grade(const StringForm& f) const;  // |word| + deg_C . n
};

// Builds the slice basis and both differentials; throws NotGorenstein when the
// chart cone has no degree vector. g values must cover Delta* points inside the
// cone. Verifies brst0^2 = d^2 = {brst0, d} = 0 exactly.
StringComplexSlice build_string_complex(const Cone& cone_nside,
                                        const std::vector<WeightedPoint>& g_values,
                                        int64_t m_box_cap, int64_t n_height_cap);

// (J, word-degree) -> cohomology dimension of brst0 on the slice.
std::map<std::pair<int64_t, int>, int> j_bigrading(const StringComplexSlice& slice);

// Cech hypercohomology of the complex (brst0-cohomology sheaf, wedge
// differential) over a complete fan; dims per (total degree, twist t = deg.n),
// stabilized over the m-box truncation schedule.
struct StringHyperResult {
  std::map<std::pair<int, int64_t>, int64_t> dims;  // (degree, twist) -> dim
  bool stabilized = false;
  std::string protocol;
};

StringHyperResult string_hypercohomology(const Fan& fan,
                                         const std::vector<WeightedPoint>& g_values,
                                         const std::vector<int64_t>& box_schedule,
                                         int stabilize_s, int64_t j_cap);

}  // namespace latvoa
