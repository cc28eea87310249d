#include "bott/logfano.hpp"

#include "bott/linalg.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace bott {

namespace {

const Wall* find_wall(const std::vector<Wall>& ws, const Cone& rays) {
  for (const auto& w : ws) {
    if (w.rays == rays) return &w;
  }
  return nullptr;
}

bool contains(const std::vector<RayIndex>& sorted, RayIndex r) { return std::binary_search(sorted.begin(), sorted.end(), r); }

// Subsets of {0..n-1} of the given size, as index lists, in lexicographic order.
std::vector<std::vector<int>> subsets(int n, int size) {
  std::vector<std::vector<int>> out;
  if (size < 0 || size > n) return out;
  std::vector<int> cur(static_cast<std::size_t>(size));
  for (int i = 0; i < size; ++i) cur[static_cast<std::size_t>(i)] = i;
  while (true) {
    out.push_back(cur);
    int pos = size - 1;
    while (pos >= 0 && cur[static_cast<std::size_t>(pos)] == n - size + pos) --pos;
    if (pos < 0) break;
    ++cur[static_cast<std::size_t>(pos)];
    for (int j = pos + 1; j < size; ++j) cur[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

// Curve class as intersection numbers with the class-basis divisors.
QVector class_coordinates(const Wall& w, const std::vector<RayIndex>& basis) {
  IntVector c = w.curve_class();
  QVector out(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) out[static_cast<Eigen::Index>(i)] = c[basis[i]];
  return out;
}

bool mori_cone_generated(const Fan& fan, const std::vector<Wall>& ws, const std::vector<StratumLine>& lines) {
  const auto basis = class_basis(fan);
  const int rho = static_cast<int>(basis.size());
  if (rho == 0) return true;
  QMatrix gens(rho, static_cast<Eigen::Index>(lines.size()));
  for (std::size_t j = 0; j < lines.size(); ++j) gens.col(static_cast<Eigen::Index>(j)) = class_coordinates(lines[j].wall, basis);
  // Caratheodory: a nonnegative decomposition exists iff one exists on some
  // basis drawn from the generators.
  std::vector<QMatrix> inverses;
  for (const auto& s : subsets(static_cast<int>(lines.size()), rho)) {
    QMatrix sub(rho, rho);
    for (int i = 0; i < rho; ++i) sub.col(i) = gens.col(s[static_cast<std::size_t>(i)]);
    if (auto inv = inverse(sub)) inverses.push_back(*inv);
  }
  if (inverses.empty()) return false;
  for (const auto& w : ws) {
    QVector c = class_coordinates(w, basis);
    bool found = false;
    for (const auto& inv : inverses) {
      QVector lambda = inv * c;
      if (std::all_of(lambda.begin(), lambda.end(), [](const Rational& x) { return x >= Rational(0); })) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

struct WitnessStep {
  BottTowerSpec spec;
  IntMatrix map;
  std::vector<RayLabel> ray_labels;
};

std::optional<WitnessStep> witness_rec(const Fan& fan, const std::vector<RayIndex>& boundary) {
  const int n = fan.rank;
  if (n == 0) return WitnessStep{BottTowerSpec{}, IntMatrix(0, 0), {}};
  LogFanoPair pair = make_log_pair(fan, boundary);
  if (!is_maximal(pair) || !has_point_stratum(pair) || !is_log_fano(pair)) return std::nullopt;
  const auto lines = stratum_lines(pair);
  const Cone sigma = make_cone(boundary);
  const IntMatrix q = unimodular_inverse(fan.cone_matrix(sigma));

  for (const auto& line : lines) {
    if (!line.free) continue;
    const auto i = static_cast<std::size_t>(line.omitted);
    if (line.degrees[i] != 1) continue;
    std::vector<RayIndex> h{boundary[i]};
    bool degrees_ok = true;
    for (std::size_t j = 0; j < boundary.size(); ++j) {
      if (j == i) continue;
      if (line.degrees[j] == 1) h.push_back(boundary[j]);
      else if (line.degrees[j] != 0) degrees_ok = false;
    }
    if (!degrees_ok) continue;
    h = make_cone(h);
    const int k = static_cast<int>(h.size());
    LatticeVector g = LatticeVector::Zero(n);
    for (auto r : h) g -= fan.rays[static_cast<std::size_t>(r)];
    if (fan.find_ray(g) < 0) continue;

    StarFan star = star_fan(fan, h);
    if (star.fan.ray_count() + k + 1 != fan.ray_count()) continue;
    std::vector<RayIndex> base_boundary;
    for (RayIndex s = 0; s < star.fan.ray_count(); ++s) {
      if (contains(boundary, star.ambient_ray[static_cast<std::size_t>(s)])) base_boundary.push_back(s);
    }
    auto base = witness_rec(star.fan, base_boundary);
    if (!base) continue;

    // Fiber coordinates: dual basis to H inside the boundary cone.
    IntMatrix r(k, n);
    for (int t = 0; t < k; ++t) {
      auto pos = std::find(sigma.begin(), sigma.end(), h[static_cast<std::size_t>(t)]) - sigma.begin();
      r.row(t) = q.row(pos);
    }
    const IntMatrix phi = base->map * star.projection;
    const int base_rank = n - k;
    IntMatrix c = IntMatrix::Zero(k, base_rank);
    for (RayIndex s = 0; s < star.fan.ray_count(); ++s) {
      const RayLabel& lab = base->ray_labels[static_cast<std::size_t>(s)];
      if (lab.k == 0) continue;
      const auto& lift = fan.rays[static_cast<std::size_t>(star.ambient_ray[static_cast<std::size_t>(s)])];
      c.col(base->spec.offset(lab.stage) + lab.k - 1) = r * lift;
    }
    // Shear the fiber coordinates so the lifted unit rays have no fiber part.
    const IntMatrix r_adj = r - c * phi;

    BottTowerSpec spec = base->spec;
    const int m_base = spec.stages();
    spec.dims.push_back(k);
    std::vector<IntVector> stage(static_cast<std::size_t>(k), IntVector::Zero(m_base));
    for (RayIndex s = 0; s < star.fan.ray_count(); ++s) {
      const RayLabel& lab = base->ray_labels[static_cast<std::size_t>(s)];
      if (lab.k != 0) continue;
      IntVector fiber = r_adj * fan.rays[static_cast<std::size_t>(star.ambient_ray[static_cast<std::size_t>(s)])];
      for (int t = 0; t < k; ++t) stage[static_cast<std::size_t>(t)][lab.stage - 1] = fiber[t];
    }
    spec.twists.push_back(stage);

    IntMatrix psi(n, n);
    psi.topRows(base_rank) = phi;
    psi.bottomRows(k) = r_adj;
    if (abs(determinant(psi)) != 1) continue;
    TowerFan tower = build_fan(spec);
    FanIsomorphism iso{{psi}, {}};
    bool rays_ok = true;
    for (const auto& v : fan.rays) {
      RayIndex t = tower.fan.find_ray(psi * v);
      if (t < 0) rays_ok = false;
      iso.ray_map.push_back(t);
    }
    if (!rays_ok || !verify_isomorphism(fan, tower.fan, iso)) continue;
    WitnessStep out{spec, psi, {}};
    for (auto t : iso.ray_map) out.ray_labels.push_back(tower.labels[static_cast<std::size_t>(t)]);
    return out;
  }
  return std::nullopt;
}

}  // namespace

LogFanoPair make_log_pair(Fan fan, std::vector<RayIndex> boundary) {
  std::sort(boundary.begin(), boundary.end());
  if (std::adjacent_find(boundary.begin(), boundary.end()) != boundary.end()) {
    throw std::invalid_argument("boundary lists a ray twice");
  }
  for (auto r : boundary) {
    if (r < 0 || r >= fan.ray_count()) throw std::invalid_argument("boundary ray " + std::to_string(r) + " out of range");
  }
  LogFanoPair p{std::move(fan), std::move(boundary), {}};
  p.l = Integer(-1) * canonical_divisor(p.fan) - p.delta();
  return p;
}

LogFanoPair make_log_pair(const TowerFan& tower, const std::vector<RayLabel>& boundary) {
  std::vector<RayIndex> rays;
  for (const auto& l : boundary) rays.push_back(tower.ray(l));
  return make_log_pair(tower.fan, rays);
}

bool is_log_fano(const LogFanoPair& pair) { return positivity(pair.fan, pair.l) == Positivity::ample; }

bool is_log_fano(const Fan& fan, const std::vector<RayIndex>& boundary) { return is_log_fano(make_log_pair(fan, boundary)); }

DualComplexRecord dual_complex(const LogFanoPair& pair) {
  DualComplexRecord d;
  const int b = static_cast<int>(pair.boundary.size());
  std::size_t total = 0;
  for (int size = 1; size <= b; ++size) {
    for (const auto& s : subsets(b, size)) {
      ++total;
      Cone c;
      for (int i : s) c.push_back(pair.boundary[static_cast<std::size_t>(i)]);
      if (pair.fan.is_cone(c)) {
        d.faces.push_back(c);
        d.dimension = std::max(d.dimension, size - 1);
      }
    }
  }
  d.is_simplex = b > 0 && d.faces.size() == total;
  return d;
}

bool is_maximal(const LogFanoPair& pair) { return static_cast<int>(pair.boundary.size()) == pair.fan.rank; }

bool has_point_stratum(const LogFanoPair& pair) {
  return is_maximal(pair) && pair.fan.cones_containing(pair.boundary).size() == 1;
}

std::vector<StratumLine> stratum_lines(const LogFanoPair& pair) {
  if (!has_point_stratum(pair)) throw std::invalid_argument("stratum lines need a maximal pair");
  const auto ws = walls(pair.fan);
  std::vector<Divisor> components;
  for (auto r : pair.boundary) components.push_back(ray_divisor(pair.fan, {r}));
  std::vector<StratumLine> out;
  for (std::size_t i = 0; i < pair.boundary.size(); ++i) {
    StratumLine line;
    line.omitted = static_cast<int>(i);
    for (std::size_t j = 0; j < pair.boundary.size(); ++j) {
      if (j != i) line.rays.push_back(pair.boundary[j]);
    }
    const Wall* w = find_wall(ws, line.rays);
    if (!w) throw std::logic_error("stratum line is not a wall");
    line.wall = *w;
    line.free = true;
    for (std::size_t j = 0; j < pair.boundary.size(); ++j) {
      line.degrees.push_back(intersection_number(components[j], *w));
      if (j != i && line.degrees.back() < 0) line.free = false;
    }
    line.l_degree = intersection_number(pair.l, *w);
    out.push_back(std::move(line));
  }
  return out;
}

std::vector<StratumLine> free_lines(const LogFanoPair& pair) {
  std::vector<StratumLine> out;
  for (auto& l : stratum_lines(pair)) {
    if (l.free) out.push_back(std::move(l));
  }
  return out;
}

Divisor complement(const LogFanoPair& pair) {
  Divisor gamma = zero_divisor(pair.fan);
  for (RayIndex r = 0; r < pair.fan.ray_count(); ++r) {
    if (!contains(pair.boundary, r)) gamma.coeffs[r] = 1;
  }
  Divisor total = canonical_divisor(pair.fan) + pair.delta() + gamma;
  if (!divisor_class(pair.fan, total).coords.isZero()) throw std::logic_error("K + Delta + Gamma is not trivial");
  return gamma;
}

Rational complexity(const Fan& fan, const QDivisor& d) {
  if (d.size() != fan.ray_count()) throw std::invalid_argument("divisor does not match the fan");
  Rational total = Rational(fan.rank + picard_rank(fan));
  for (Eigen::Index i = 0; i < d.coeffs.size(); ++i) total -= d.coeffs[i];
  return total;
}

LogFanoPair stratum_pair(const LogFanoPair& pair, const Cone& tau) {
  StarFan star = star_fan(pair.fan, tau);
  std::vector<RayIndex> b;
  for (RayIndex s = 0; s < star.fan.ray_count(); ++s) {
    if (contains(pair.boundary, star.ambient_ray[static_cast<std::size_t>(s)])) b.push_back(s);
  }
  return make_log_pair(star.fan, b);
}

std::optional<BottWitness> bott_witness(const LogFanoPair& pair) {
  auto step = witness_rec(pair.fan, pair.boundary);
  if (!step) return std::nullopt;
  BottWitness w{step->spec, step->map, step->ray_labels, {}};
  for (auto r : pair.boundary) w.boundary.push_back(w.ray_labels[static_cast<std::size_t>(r)]);
  return w;
}

StructureReport verify_structure(const LogFanoPair& pair) {
  StructureReport rep;
  auto fail = [&](const std::string& what) { rep.failures.push_back(what); };
  const int n = pair.fan.rank;
  rep.log_fano = is_log_fano(pair);
  rep.maximal = is_maximal(pair) && has_point_stratum(pair);
  if (!rep.log_fano) fail("log-fano: -K - Delta is not ample");
  if (!rep.maximal) fail("maximal: boundary does not have a point stratum");
  if (!rep.log_fano || !rep.maximal) return rep;

  const auto ws = walls(pair.fan);
  DualComplexRecord dc = dual_complex(pair);
  rep.dual_dimension = dc.dimension;
  rep.dual_simplex = dc.is_simplex;
  if (!dc.is_simplex || dc.dimension != n - 1) fail("dual-complex: not an (n-1)-simplex");

  rep.rho = picard_rank(pair.fan);
  Divisor gamma = complement(pair);
  rep.gamma_components = static_cast<int>(gamma.coeffs.sum().value());
  if (rep.gamma_components != rep.rho) fail("complement: component count differs from Picard rank");
  rep.complexity = complexity(pair.fan, QDivisor{to_rational(IntVector(pair.delta().coeffs + gamma.coeffs))});
  if (rep.complexity != Rational(0)) fail("complexity: Delta + Gamma has nonzero complexity");

  NefValue nv = nef_value(pair.fan, pair.l);
  rep.tau = nv.tau;
  if (!(rep.tau > Rational(1))) fail("nef-value: tau <= 1");
  bool first = true;
  for (const auto& w : nv.trivial_walls) {
    Integer len = extremal_length(pair.fan, w);
    if (first || len < rep.min_extremal_length) rep.min_extremal_length = len;
    first = false;
  }
  if (rep.min_extremal_length < 2) fail("extremal-length: a contracted wall has -K.C < 2");

  const auto lines = stratum_lines(pair);
  rep.lines_have_degree_one = std::all_of(lines.begin(), lines.end(), [](const StratumLine& l) { return l.l_degree == 1; });
  if (!rep.lines_have_degree_one) fail("stratum-lines: some line has L.l != 1");

  rep.mori_cone_generated = mori_cone_generated(pair.fan, ws, lines);
  if (!rep.mori_cone_generated) fail("mori-cone: a wall class is not a nonnegative combination of stratum lines");

  const auto basis = class_basis(pair.fan);
  IntMatrix gens(static_cast<Eigen::Index>(basis.size()), static_cast<Eigen::Index>(pair.boundary.size()));
  for (std::size_t j = 0; j < pair.boundary.size(); ++j) {
    gens.col(static_cast<Eigen::Index>(j)) = divisor_class(pair.fan, ray_divisor(pair.fan, {pair.boundary[j]})).coords;
  }
  rep.pic_index = basis.empty() ? Integer(1) : lattice_index(gens);
  if (rep.pic_index != 1) fail("picard: boundary classes do not generate Pic");

  for (std::size_t j = 0; j < pair.boundary.size() && rep.nef_component < 0; ++j) {
    Divisor dj = ray_divisor(pair.fan, {pair.boundary[j]});
    if (positivity(ws, dj) == Positivity::not_nef) continue;
    auto res = restrict_to_stratum(pair.fan, dj, {pair.boundary[j]});
    if (positivity(res.star.fan, res.divisor) != Positivity::not_nef) rep.nef_component = static_cast<int>(j);
  }
  if (rep.nef_component < 0) fail("basepoint-free: no nef component with nef self-restriction");

  bool any_free = false;
  for (std::size_t li = 0; li < lines.size(); ++li) {
    const auto& line = lines[li];
    if (!line.free) continue;
    any_free = true;
    BundleCase bc;
    bc.line = static_cast<int>(li);
    bc.rho_x = rep.rho;
    const auto om = static_cast<std::size_t>(line.omitted);
    bool degrees_ok = line.degrees[om] == 1;
    bc.section.push_back(pair.boundary[om]);
    for (std::size_t j = 0; j < pair.boundary.size(); ++j) {
      if (j == om) continue;
      if (line.degrees[j] == 1) bc.section.push_back(pair.boundary[j]);
      else if (line.degrees[j] == 0) bc.fibers.push_back(pair.boundary[j]);
      else degrees_ok = false;
    }
    bc.section = make_cone(bc.section);
    bc.k = static_cast<int>(bc.section.size());
    bc.rho_omitted = picard_rank(star_fan(pair.fan, {pair.boundary[om]}).fan);
    bc.rho_section = picard_rank(star_fan(pair.fan, bc.section).fan);
    bool relation = bc.k == 1 ? bc.rho_x == bc.rho_omitted + 1 : bc.rho_x == bc.rho_omitted;
    bc.ok = degrees_ok && relation && bc.rho_x == bc.rho_section + 1;
    if (!bc.ok) fail("bundle: free line " + std::to_string(li) + " violates the section/fiber dichotomy");
    rep.bundle_cases.push_back(std::move(bc));
  }
  if (!any_free) fail("free-line: no free stratum line");

  rep.strata_log_fano = true;
  const int b = static_cast<int>(pair.boundary.size());
  for (int size = 1; size <= b; ++size) {
    for (const auto& s : subsets(b, size)) {
      Cone tau;
      for (int i : s) tau.push_back(pair.boundary[static_cast<std::size_t>(i)]);
      LogFanoPair sp = stratum_pair(pair, tau);
      if (!is_log_fano(sp) || !is_maximal(sp) || !has_point_stratum(sp)) rep.strata_log_fano = false;
    }
  }
  if (!rep.strata_log_fano) fail("adjunction: some stratum is not maximal log Fano");

  rep.witness = bott_witness(pair);
  if (!rep.witness) {
    fail("bott-tower: free-line contraction did not produce a tower");
  } else {
    if (rep.witness->spec.stages() != rep.rho) fail("bott-tower: stage count differs from Picard rank");
    bool all_lines = std::all_of(rep.witness->spec.dims.begin(), rep.witness->spec.dims.end(), [](int d) { return d == 1; });
    rep.bott_tower_iff = all_lines == (rep.rho == n);
    if (!rep.bott_tower_iff) fail("bott-tower: P^1 fibers do not match rho = n");
  }
  return rep;
}

std::optional<FanIsomorphism> pair_isomorphic(const LogFanoPair& a, const LogFanoPair& b) {
  if (a.fan.rank != b.fan.rank || a.fan.ray_count() != b.fan.ray_count() || a.boundary.size() != b.boundary.size()) {
    return std::nullopt;
  }
  std::vector<int> ca(static_cast<std::size_t>(a.fan.ray_count()), 0), cb(static_cast<std::size_t>(b.fan.ray_count()), 0);
  for (auto r : a.boundary) ca[static_cast<std::size_t>(r)] = 1;
  for (auto r : b.boundary) cb[static_cast<std::size_t>(r)] = 1;
  return fan_isomorphic(a.fan, b.fan, ca, cb);
}

std::string pair_key(const LogFanoPair& pair) {
  std::vector<RayIndex> old_to_new;
  Fan c = canonical_fan(pair.fan, &old_to_new);
  std::vector<RayIndex> b;
  for (auto r : pair.boundary) b.push_back(old_to_new[static_cast<std::size_t>(r)]);
  std::sort(b.begin(), b.end());
  std::ostringstream os;
  os << write_fan(c) << "boundary";
  for (auto r : b) os << ' ' << r;
  os << '\n';
  return os.str();
}

}  // namespace bott
