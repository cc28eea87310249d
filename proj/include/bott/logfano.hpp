#pragma once

// Toric log Fano pairs (X, Delta) with Delta a sum of invariant prime
// divisors, their maximality, stratum lines, complements, the structure check
// and the classifier over generalized Bott towers.

#include "bott/divisors.hpp"
#include "bott/tower.hpp"

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bott {

struct LogFanoPair {
  Fan fan;
  std::vector<RayIndex> boundary;  // sorted, distinct
  Divisor l;                       // -K - Delta

  [[nodiscard]] int dimension() const { return fan.rank; }
  [[nodiscard]] Divisor delta() const { return ray_divisor(fan, boundary); }
};

// Throws std::invalid_argument on repeated or out-of-range rays.
LogFanoPair make_log_pair(Fan fan, std::vector<RayIndex> boundary);
LogFanoPair make_log_pair(const TowerFan& tower, const std::vector<RayLabel>& boundary);

bool is_log_fano(const LogFanoPair& pair);
bool is_log_fano(const Fan& fan, const std::vector<RayIndex>& boundary);

struct DualComplexRecord {
  std::vector<std::vector<RayIndex>> faces;  // nonempty boundary subsets spanning a cone
  int dimension = -1;
  bool is_simplex = false;
};

DualComplexRecord dual_complex(const LogFanoPair& pair);

// |boundary| = n.
bool is_maximal(const LogFanoPair& pair);
// The boundary rays span a maximal cone (a 0-dimensional stratum exists).
bool has_point_stratum(const LogFanoPair& pair);

// l = intersection of all boundary components but one.
struct StratumLine {
  int omitted = -1;  // position in pair.boundary
  Cone rays;         // the n-1 boundary rays cutting l
  Wall wall;
  std::vector<Integer> degrees;  // D_j . l for every boundary position j
  Integer l_degree = 0;          // L . l
  bool free = false;             // D_j . l >= 0 whenever l lies in D_j
};

// Requires a maximal pair; one line per boundary component, in boundary order.
std::vector<StratumLine> stratum_lines(const LogFanoPair& pair);
std::vector<StratumLine> free_lines(const LogFanoPair& pair);

// Gamma: every non-boundary ray with coefficient 1. Throws std::logic_error if
// K + Delta + Gamma is not linearly trivial.
Divisor complement(const LogFanoPair& pair);

// n + rho - (sum of coefficients).
Rational complexity(const Fan& fan, const QDivisor& d);

// Sub-case data for one free line.
struct BundleCase {
  int line = -1;                   // index into stratum_lines
  std::vector<RayIndex> section;   // H: the omitted ray and rays with D.l = 1
  std::vector<RayIndex> fibers;    // rays with D.l = 0
  int k = 0;                       // |H|
  int rho_x = 0;
  int rho_omitted = 0;             // Picard rank of the omitted component
  int rho_section = 0;             // Picard rank of V(H)
  bool ok = false;
};

// A generalized Bott tower with an explicit isomorphism onto the pair's fan.
struct BottWitness {
  BottTowerSpec spec;
  IntMatrix map;                     // N -> lattice of build_fan(spec)
  std::vector<RayLabel> ray_labels;  // per ray of the pair's fan
  std::vector<RayLabel> boundary;    // labels of the boundary rays
};

// Contracts free lines recursively; nullopt when some step fails.
std::optional<BottWitness> bott_witness(const LogFanoPair& pair);

struct StructureReport {
  bool log_fano = false;
  bool maximal = false;
  int dual_dimension = -1;
  bool dual_simplex = false;
  int rho = 0;
  int gamma_components = 0;
  Rational complexity;
  Rational tau;
  Integer min_extremal_length = 0;  // over walls trivial for K + tau L
  bool lines_have_degree_one = false;
  bool mori_cone_generated = false;
  Integer pic_index = 0;  // index of the boundary classes in Pic
  int nef_component = -1;  // boundary position of a nef component with nef self-restriction
  std::vector<BundleCase> bundle_cases;
  bool strata_log_fano = false;  // every stratum with its induced boundary is maximal log Fano
  std::optional<BottWitness> witness;
  bool bott_tower_iff = false;  // all fibers P^1 iff rho = n
  std::vector<std::string> failures;

  [[nodiscard]] bool ok() const { return failures.empty(); }
};

// Requires a maximal pair; never throws on a failed item, records it instead.
StructureReport verify_structure(const LogFanoPair& pair);

// Stratum V(tau) with the boundary rays adjacent to tau, as a pair on the star fan.
LogFanoPair stratum_pair(const LogFanoPair& pair, const Cone& tau);

struct ClassificationEntry {
  BottTowerSpec spec;
  std::vector<RayLabel> boundary;
  std::string key;   // canonical serialization of the chosen presentation
  int presentations = 0;  // candidates identified with this entry
  Rational tau;
  int rho = 0;
  int gamma_components = 0;
  std::vector<int> free_lines;
  std::vector<std::vector<Integer>> line_degrees;  // per stratum line
  StructureReport structure;
};

struct ResourceLimitExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ClassifyOptions {
  int workers = 1;
  std::size_t max_candidates = 5'000'000;
  bool verify = true;  // run verify_structure on every entry
};

// All maximal log Fano pairs on generalized Bott towers of dimension n with
// twists in [-bound, bound], one entry per pair-isomorphism class.
std::vector<ClassificationEntry> classify(int n, int bound, const ClassifyOptions& options = {});

// Canonical fan text with the boundary rays marked; used for tie-breaking.
std::string pair_key(const LogFanoPair& pair);

std::optional<FanIsomorphism> pair_isomorphic(const LogFanoPair& a, const LogFanoPair& b);

}  // namespace bott
