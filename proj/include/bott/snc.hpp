#pragma once

// Simple normal crossings models X = sum X_i built from toric log Fano pairs:
// each component's boundary ray records which other component it meets, and
// double intersections are identified by explicit lattice maps between star
// fans. Includes the maximal degeneration X^n, the d-semistability check
// N_{D/X_i} + N_{D/X_j} + sum_k X_k|_D = 0 in Pic(D), and a small exhaustive
// search.

#include "bott/logfano.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace bott {

struct ComponentSpec {
  BottTowerSpec spec;
  std::vector<RayLabel> boundary;
  RayLabel section;   // the base D of the last P^1-bundle, with D|_D = -Delta_D
  RayLabel free_component;  // iterated pullback of the point; trivial normal bundle
};

// P_D(O + O(-Delta_D)) over component_spec(n-1), starting from (P^1, point).
ComponentSpec component_spec(int n);

struct SncComponent {
  BottTowerSpec spec;
  std::vector<RayLabel> labels;  // per ray of pair.fan
  LogFanoPair pair;
  std::vector<int> incidence;  // per boundary position: the component met there

  // Boundary ray meeting component `other`, or -1.
  [[nodiscard]] RayIndex ray_to(int other) const;
};

SncComponent make_component(const BottTowerSpec& spec, const std::vector<RayLabel>& boundary,
                            const std::vector<int>& incidence);

// Identification of D = X_i cap X_j (i < j) seen from both sides.
struct Gluing {
  int i = -1;
  int j = -1;
  RayIndex ray_i = -1;
  RayIndex ray_j = -1;
  LatticeMap map;                 // star_fan(X_i, ray_i) lattice -> star_fan(X_j, ray_j) lattice
  std::vector<RayIndex> ray_map;  // star ray of side i -> star ray of side j
  int choices = 0;                // label-preserving isomorphisms found
};

struct SncModel {
  int dimension = 0;
  std::vector<SncComponent> components;
  std::vector<Gluing> gluings;

  [[nodiscard]] const Gluing* gluing(int a, int b) const;
};

// Colored star-fan isomorphism carrying the boundary of D seen from i to the
// boundary seen from j with the same incidence; nullopt when none exists.
std::optional<Gluing> find_gluing(const SncComponent& a, int ia, const SncComponent& b, int ib);

// Builds all gluings; throws std::invalid_argument when incidences disagree or
// a double intersection cannot be identified.
SncModel make_model(std::vector<SncComponent> components);

// Map of ambient rays adjacent to D in X_a to those in X_b, through the gluing.
std::vector<std::pair<RayIndex, RayIndex>> ray_correspondence(const SncModel& model, int a, int b);

// On every triple X_i cap X_j cap X_k the ray correspondences compose.
bool cocycle_holds(const SncModel& model);

// Largest set of components with a common point, minus one.
int model_dual_dimension(const SncModel& model);

// n+1 copies of component_spec(n) in a directed cycle: the free component of
// X_i is glued to the section of X_{i+1}.
SncModel build_xn(int n);

// Three copies of P^1 x P^1 glued along rulings in a cycle; fails d-semistability.
SncModel f0_cycle_model();

struct DssPair {
  int i = -1;
  int j = -1;
  IntVector total;        // class of the sum on D (reference side i)
  bool trivial = false;
  bool consistent = false;  // cross terms from side j give the same class
};

struct DssReport {
  std::vector<DssPair> pairs;

  [[nodiscard]] bool ok() const;
};

DssPair dss_pair(const SncModel& model, int i, int j);
DssReport dss_check(const SncModel& model, int workers = 1);

struct SncFanoReport {
  bool fano = false;
  bool maximal = false;
  int dual_dimension = -1;
  std::vector<bool> component_log_fano;
};

SncFanoReport snc_fano_check(const SncModel& model);

// Component-wise pair isomorphisms, after relabeling components, that commute
// with the gluings.
bool models_isomorphic(const SncModel& a, const SncModel& b);

struct SearchOptions {
  bool dss_filter = true;
  int workers = 1;
  std::size_t max_nodes = 20'000'000;
};

struct SearchResult {
  std::vector<SncModel> models;
  bool exhaustive = false;  // false means "within the searched window"
  std::size_t nodes = 0;
  std::size_t pruned_gluing = 0;
  std::size_t pruned_dss = 0;
  std::size_t complete = 0;  // models reaching the end before deduplication
  std::vector<std::string> log;
};

// Models of n+1 components drawn from classify(n, bound), every boundary ray
// labeled by a distinct other component (so the dual complex is the
// n-simplex), glued along label-preserving isomorphisms. Throws
// ResourceLimitExceeded (with the pruning log) past max_nodes.
SearchResult search_maximal_dss(int n, int bound, const SearchOptions& options = {});

}  // namespace bott
