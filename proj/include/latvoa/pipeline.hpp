// End-to-end theorem pipelines: chart cohomology, bundle/Cech comparison,
// hypersurface cohomology over K*, full-lattice master family, characters.
#pragma once

#include "latvoa/brst.hpp"
#include "latvoa/stringy.hpp"

namespace latvoa {

struct WindowParams {
  int64_t l_min = 0;
  int64_t l_max = 2;
  int64_t j_min = -2;
  int64_t j_max = 2;
  int64_t charge_bound = 2;            // box bound for reported m-charges
  std::vector<int64_t> truncation;     // cutoff schedule for stabilized pipelines
  int stabilize_s = 3;
  int workers = 1;
};

struct ProblemInstance {
  int rank = 2;
  std::vector<LatticeVector> delta_points;             // in M
  std::vector<std::optional<Rational>> f_values;       // nullopt = draw from seed
  std::vector<LatticeVector> delta_star_points;        // in N
  std::vector<std::optional<Rational>> g_values;
  LatticeVector deg;// in M
  LatticeVector deg_star;                              // in N
  std::optional<Fan> fan;
  std::map<LatticeVector, Rational> heights;           // optional certificate data
  std::string pipeline = "hypersurface";
  WindowParams window;
  uint64_t seed = 1;

  std::string canonical_serialization() const;
  std::string content_hash() const;
};

// Mirror involution on the input data: swaps Delta and Delta*, f and g,
// deg and deg*; drops the fan (it lives on the N side only).
ProblemInstance mirror_instance(const ProblemInstance& p);

// Validated geometry derived from an instance. Checks the Gorenstein pairing
// conditions, the dual reflexive cone relation, and the fan when present.
struct GeometryData {
  int rank = 0;
  Cone cone_K;                                // cone(Delta) in M
  Cone cone_Kstar;                            // cone(Delta*) in N
  std::vector<LatticeVector> delta_points;    // height-one points of K
  std::vector<LatticeVector> delta_star_points;
  LatticeVector deg, deg_star;
  const Fan* fan = nullptr;
  GradingConfig grading;  // deg and deg* filled in
};

GeometryData build_geometry(const ProblemInstance& p);

// Deterministic small nonzero integers for unset f/g values.
struct ResolvedCoefficients {
  std::vector<WeightedPoint> delta;
  std::vector<WeightedPoint> delta_star;
  std::string f_text, g_text;
};
ResolvedCoefficients resolve_coefficients(const ProblemInstance& p, uint64_t seed);

// ---------------------------------------------------------------------------
// reports

struct ReportEntry {
  std::optional<LatticeVector> m;  // set for chart/bundle pipelines
  int64_t L = 0;
  int64_t J = 0;
  int64_t dim = 0;
  std::string provenance;  // "exact" or "stabilized(...)" or "not-stabilized"
};

struct CohomologyReport {
  std::string pipeline;
  std::string problem_hash;
  std::string code_version = kCodeVersion;
  std::string convention = kConventionVersion;
  uint64_t seed = 0;
  std::string f_used, g_used;
  std::vector<ReportEntry> entries;
  std::vector<std::string> notes;
  bool failed = false;  // mathematical failure (pipeline disagreement, ...)

  int64_t dim_at(int64_t L, int64_t J) const;  // summed over m
  std::string character() const;               // sum dims q^L w^J
  std::string to_text() const;
  std::string to_json_text() const;
  void sort_entries();
};

// ---------------------------------------------------------------------------
// pipelines

// BRST_g cohomology of Fock_{M (+) C*} per (m, L, J); exact.
CohomologyReport chart_cohomology(const Cone& cone_nside,
                                  const std::vector<WeightedPoint>& g_values,
                                  const WindowParams& window);

// Line-bundle fan: direct Fock^Sigma computation and the Cech double complex,
// compared entry by entry; disagreement marks the report failed.
CohomologyReport bundle_cohomology(const GeometryData& geom,
                                   const std::vector<WeightedPoint>& g_values,
                                   const WindowParams& window);

// BRST_{f,g} cohomology of Fock^Sigma_{M (+) K*} per (LXA0, J0), computed over
// the exhaustion schedule with the stabilization protocol.
CohomologyReport hypersurface_cohomology(const GeometryData& geom,
                                         const ResolvedCoefficients& coeffs,
                                         const WindowParams& window,
                                         const std::string& cache_dir = "");

// Full-lattice master family (optionally fan-degenerate); when the geometry
// carries a fan the result is compared against hypersurface_cohomology.
CohomologyReport master_family_cohomology(const GeometryData& geom,
                                          const ResolvedCoefficients& coeffs,
                                          const WindowParams& window, bool use_fan,
                                          const std::string& cache_dir = "");

// String-de-Rham pipeline over the fan in the instance (headline
// hypercohomology plus labeled per-chart tables in the notes).
CohomologyReport stringy_pipeline(const GeometryData& geom,
                                  const std::vector<WeightedPoint>& g_values,
                                  const WindowParams& window);

// Schedule parameters used by the exhaustion pipelines (exposed for tests).
struct ExhaustionParams {
  int64_t D = 0, E = 0, T = 0, HN = 0;
};
ExhaustionParams exhaustion_schedule(int64_t cutoff, const WindowParams& window);

// Assembled BRST data for one problem (used by pipelines and the verify suites).
struct BrstData {
  std::vector<CompositeFieldTerm> f_terms, g_terms, all;
};
BrstData make_brst_terms(const GeometryData& geom, const ResolvedCoefficients& coeffs,
                         bool with_fan, bool extend_fan);

}  // namespace latvoa
