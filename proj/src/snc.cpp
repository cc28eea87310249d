#include "bott/snc.hpp"

#include "bott/linalg.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>

namespace bott {

namespace {

// Coordinates of a divisor class on a tower in the basis D_{u_i^0}, using
// D_{u_i^k} ~ D_{u_i^0} - sum_{j<i} a_{i,j}^{(k)} D_{u_j^0}.
IntVector zero_basis_class(const BottTowerSpec& spec, const TowerFan& t, const Divisor& d) {
  IntVector c = IntVector::Zero(spec.stages());
  for (RayIndex r = 0; r < t.fan.ray_count(); ++r) {
    const Integer coeff = d.coeffs[r];
    if (coeff == 0) continue;
    const RayLabel& lab = t.labels[static_cast<std::size_t>(r)];
    c[lab.stage - 1] += coeff;
    if (lab.k == 0) continue;
    const IntVector& a = spec.twists[static_cast<std::size_t>(lab.stage - 1)][static_cast<std::size_t>(lab.k - 1)];
    for (Eigen::Index j = 0; j < a.size(); ++j) c[j] -= coeff * a[j];
  }
  return c;
}

Divisor divisor_on_labels(const TowerFan& t, const std::vector<RayLabel>& labels) {
  std::vector<RayIndex> rays;
  for (const auto& l : labels) rays.push_back(t.ray(l));
  return ray_divisor(t.fan, rays);
}

std::vector<int> star_colors(const SncComponent& c, const StarFan& star) {
  std::vector<int> colors(static_cast<std::size_t>(star.fan.ray_count()), 0);
  for (RayIndex s = 0; s < star.fan.ray_count(); ++s) {
    RayIndex amb = star.ambient_ray[static_cast<std::size_t>(s)];
    auto it = std::lower_bound(c.pair.boundary.begin(), c.pair.boundary.end(), amb);
    if (it != c.pair.boundary.end() && *it == amb) {
      colors[static_cast<std::size_t>(s)] = c.incidence[static_cast<std::size_t>(it - c.pair.boundary.begin())] + 1;
    }
  }
  return colors;
}

// Pullback of a divisor on side j's star fan to side i's star fan.
template <typename Scalar>
ToricDivisor<Scalar> transport(const ToricDivisor<Scalar>& on_j, const Gluing& g) {
  ToricDivisor<Scalar> out{Vector<Scalar>(static_cast<Eigen::Index>(g.ray_map.size()))};
  for (std::size_t s = 0; s < g.ray_map.size(); ++s) out.coeffs[static_cast<Eigen::Index>(s)] = on_j.coeffs[g.ray_map[s]];
  return out;
}

Divisor cross_terms(const SncComponent& c, int self_other) {
  std::vector<RayIndex> rays;
  for (std::size_t p = 0; p < c.pair.boundary.size(); ++p) {
    if (c.incidence[p] != self_other) rays.push_back(c.pair.boundary[p]);
  }
  return ray_divisor(c.pair.fan, rays);
}

DssPair dss_pair_impl(const SncComponent& xi, int i, const SncComponent& xj, int j, const Gluing& g) {
  DssPair out;
  out.i = i;
  out.j = j;
  const Cone di{g.ray_i};
  const Cone dj{g.ray_j};
  auto ni = restrict_to_stratum(xi.pair.fan, ray_divisor(xi.pair.fan, {g.ray_i}), di);
  auto nj = restrict_to_stratum(xj.pair.fan, ray_divisor(xj.pair.fan, {g.ray_j}), dj);
  auto ci = restrict_to_stratum(xi.pair.fan, cross_terms(xi, j), di);
  auto cj = restrict_to_stratum(xj.pair.fan, cross_terms(xj, i), dj);
  const Fan& d = ni.star.fan;
  Divisor total = ni.divisor + transport(nj.divisor, g) + ci.divisor;
  out.total = divisor_class(d, total).coords;
  out.trivial = out.total.isZero();
  out.consistent = divisor_class(d, ci.divisor) == divisor_class(d, transport(cj.divisor, g));
  return out;
}

std::vector<std::vector<int>> permutations(std::vector<int> items) {
  std::vector<std::vector<int>> out;
  std::sort(items.begin(), items.end());
  do {
    out.push_back(items);
  } while (std::next_permutation(items.begin(), items.end()));
  return out;
}

}  // namespace

ComponentSpec component_spec(int n) {
  if (n < 1) throw std::invalid_argument("component needs n >= 1");
  if (n == 1) return {product_spec({1}), {{1, 1}}, {1, 1}, {1, 1}};
  ComponentSpec base = component_spec(n - 1);
  TowerFan tb = build_fan(base.spec);
  const Divisor delta = divisor_on_labels(tb, base.boundary);
  IntVector c = zero_basis_class(base.spec, tb, delta);
  {
    Divisor check = zero_divisor(tb.fan);
    for (int i = 1; i <= base.spec.stages(); ++i) check.coeffs[tb.ray(i, 0)] = c[i - 1];
    if (divisor_class(tb.fan, check) != divisor_class(tb.fan, delta)) {
      throw std::logic_error("boundary class in the D_{u_i^0} basis does not match");
    }
  }
  ComponentSpec out;
  out.spec = base.spec;
  out.spec.dims.push_back(1);
  out.spec.twists.push_back({IntVector(-c)});
  const int m = out.spec.stages();
  TowerFan t = build_fan(out.spec);

  // The section is the last-stage ray whose self-restriction is -Delta_D.
  bool found = false;
  for (int k : {0, 1}) {
    RayIndex r = t.ray(m, k);
    auto res = restrict_to_stratum(t.fan, ray_divisor(t.fan, {r}), {r});
    Divisor target = zero_divisor(res.star.fan);
    for (RayIndex s = 0; s < res.star.fan.ray_count(); ++s) {
      const RayLabel& lab = t.labels[static_cast<std::size_t>(res.star.ambient_ray[static_cast<std::size_t>(s)])];
      if (std::find(base.boundary.begin(), base.boundary.end(), lab) != base.boundary.end()) target.coeffs[s] = -1;
    }
    if (divisor_class(res.star.fan, res.divisor) == divisor_class(res.star.fan, target)) {
      out.section = {m, k};
      found = true;
      break;
    }
  }
  if (!found) throw std::logic_error("no section with self-restriction -Delta_D");
  out.boundary.push_back(out.section);
  for (const auto& l : base.boundary) out.boundary.push_back(l);
  out.free_component = base.free_component;

  LogFanoPair p = make_log_pair(t, out.boundary);
  if (!is_log_fano(p) || !has_point_stratum(p)) throw std::logic_error("component is not maximal log Fano");
  return out;
}

RayIndex SncComponent::ray_to(int other) const {
  for (std::size_t p = 0; p < incidence.size(); ++p) {
    if (incidence[p] == other) return pair.boundary[p];
  }
  return -1;
}

SncComponent make_component(const BottTowerSpec& spec, const std::vector<RayLabel>& boundary,
                            const std::vector<int>& incidence) {
  if (boundary.size() != incidence.size()) throw std::invalid_argument("one incidence per boundary ray is required");
  TowerFan t = build_fan(spec);
  std::vector<std::pair<RayIndex, int>> rays;
  for (std::size_t p = 0; p < boundary.size(); ++p) rays.emplace_back(t.ray(boundary[p]), incidence[p]);
  std::sort(rays.begin(), rays.end());
  SncComponent c;
  c.spec = spec;
  c.labels = t.labels;
  std::vector<RayIndex> b;
  for (const auto& [r, inc] : rays) {
    b.push_back(r);
    c.incidence.push_back(inc);
  }
  c.pair = make_log_pair(t.fan, b);
  return c;
}

const Gluing* SncModel::gluing(int a, int b) const {
  if (a > b) std::swap(a, b);
  for (const auto& g : gluings) {
    if (g.i == a && g.j == b) return &g;
  }
  return nullptr;
}

std::optional<Gluing> find_gluing(const SncComponent& a, int ia, const SncComponent& b, int ib) {
  RayIndex ra = a.ray_to(ib);
  RayIndex rb = b.ray_to(ia);
  if (ra < 0 || rb < 0) return std::nullopt;
  StarFan sa = star_fan(a.pair.fan, {ra});
  StarFan sb = star_fan(b.pair.fan, {rb});
  auto ca = star_colors(a, sa);
  auto cb = star_colors(b, sb);
  auto isos = fan_isomorphisms(sa.fan, sb.fan, ca, cb);
  if (isos.empty()) return std::nullopt;
  Gluing g;
  g.i = ia;
  g.j = ib;
  g.ray_i = ra;
  g.ray_j = rb;
  g.map = isos.front().map;
  g.ray_map = isos.front().ray_map;
  g.choices = static_cast<int>(isos.size());
  return g;
}

SncModel make_model(std::vector<SncComponent> components) {
  SncModel m;
  if (components.empty()) throw std::invalid_argument("a model needs at least one component");
  m.dimension = components.front().pair.fan.rank;
  const int count = static_cast<int>(components.size());
  for (int i = 0; i < count; ++i) {
    const auto& c = components[static_cast<std::size_t>(i)];
    if (c.pair.fan.rank != m.dimension) throw std::invalid_argument("components have different dimensions");
    std::vector<int> seen = c.incidence;
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
      throw std::invalid_argument("component " + std::to_string(i) + " meets another component twice");
    }
    for (int other : c.incidence) {
      if (other < 0 || other >= count || other == i) {
        throw std::invalid_argument("component " + std::to_string(i) + " has an invalid incidence " + std::to_string(other));
      }
    }
  }
  m.components = std::move(components);
  for (int i = 0; i < count; ++i) {
    for (int j = i + 1; j < count; ++j) {
      RayIndex ri = m.components[static_cast<std::size_t>(i)].ray_to(j);
      RayIndex rj = m.components[static_cast<std::size_t>(j)].ray_to(i);
      if (ri < 0 && rj < 0) continue;
      if (ri < 0 || rj < 0) {
        throw std::invalid_argument("components " + std::to_string(i) + " and " + std::to_string(j) +
                                    " disagree on whether they meet");
      }
      auto g = find_gluing(m.components[static_cast<std::size_t>(i)], i, m.components[static_cast<std::size_t>(j)], j);
      if (!g) {
        throw std::invalid_argument("no label-preserving identification of X_" + std::to_string(i) + " cap X_" +
                                    std::to_string(j));
      }
      m.gluings.push_back(std::move(*g));
    }
  }
  return m;
}

std::vector<std::pair<RayIndex, RayIndex>> ray_correspondence(const SncModel& model, int a, int b) {
  const Gluing* g = model.gluing(a, b);
  if (!g) throw std::invalid_argument("components do not meet");
  const auto& xi = model.components[static_cast<std::size_t>(g->i)];
  const auto& xj = model.components[static_cast<std::size_t>(g->j)];
  StarFan si = star_fan(xi.pair.fan, {g->ray_i});
  StarFan sj = star_fan(xj.pair.fan, {g->ray_j});
  std::vector<std::pair<RayIndex, RayIndex>> out;
  for (std::size_t s = 0; s < g->ray_map.size(); ++s) {
    RayIndex from = si.ambient_ray[s];
    RayIndex to = sj.ambient_ray[static_cast<std::size_t>(g->ray_map[s])];
    if (a == g->i) out.emplace_back(from, to);
    else out.emplace_back(to, from);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool cocycle_holds(const SncModel& model) {
  const int count = static_cast<int>(model.components.size());
  auto as_map = [&](int a, int b) {
    std::map<RayIndex, RayIndex> m;
    for (const auto& [x, y] : ray_correspondence(model, a, b)) m[x] = y;
    return m;
  };
  for (int i = 0; i < count; ++i) {
    for (int j = i + 1; j < count; ++j) {
      if (!model.gluing(i, j)) continue;
      for (int k = j + 1; k < count; ++k) {
        if (!model.gluing(i, k) || !model.gluing(j, k)) continue;
        const auto& xi = model.components[static_cast<std::size_t>(i)];
        Cone t = make_cone({xi.ray_to(j), xi.ray_to(k)});
        if (!xi.pair.fan.is_cone(t)) continue;
        auto ij = as_map(i, j), jk = as_map(j, k), ik = as_map(i, k);
        // The stratum itself must be carried along.
        if (ij[xi.ray_to(k)] != model.components[static_cast<std::size_t>(j)].ray_to(k)) return false;
        for (RayIndex x = 0; x < xi.pair.fan.ray_count(); ++x) {
          if (std::binary_search(t.begin(), t.end(), x)) continue;
          Cone tx = t;
          tx.push_back(x);
          if (!xi.pair.fan.is_cone(make_cone(tx))) continue;
          auto y = ij.find(x);
          if (y == ij.end()) return false;
          auto z = jk.find(y->second);
          auto w = ik.find(x);
          if (z == jk.end() || w == ik.end() || z->second != w->second) return false;
        }
      }
    }
  }
  return true;
}

int model_dual_dimension(const SncModel& model) {
  const int count = static_cast<int>(model.components.size());
  int best = -1;
  for (unsigned mask = 1; mask < (1u << count); ++mask) {
    std::vector<int> s;
    for (int i = 0; i < count; ++i) {
      if (mask & (1u << i)) s.push_back(i);
    }
    const auto& first = model.components[static_cast<std::size_t>(s.front())];
    Cone c;
    bool ok = true;
    for (std::size_t t = 1; t < s.size() && ok; ++t) {
      RayIndex r = first.ray_to(s[t]);
      if (r < 0) ok = false;
      c.push_back(r);
    }
    if (ok && (c.empty() || first.pair.fan.is_cone(make_cone(c)))) best = std::max(best, static_cast<int>(s.size()) - 1);
  }
  return best;
}

SncModel build_xn(int n) {
  if (n < 1) throw std::invalid_argument("X^n needs n >= 1");
  const int count = n + 1;
  ComponentSpec cs = component_spec(n);
  if (n == 1) {
    return make_model({make_component(cs.spec, cs.boundary, {1}), make_component(cs.spec, cs.boundary, {0})});
  }
  std::vector<RayLabel> others;
  for (const auto& l : cs.boundary) {
    if (l != cs.section && l != cs.free_component) others.push_back(l);
  }
  std::vector<int> offsets(others.size());
  std::iota(offsets.begin(), offsets.end(), 2);
  for (const auto& pattern : permutations(offsets)) {
    std::vector<SncComponent> comps;
    for (int i = 0; i < count; ++i) {
      std::vector<RayLabel> b{cs.section, cs.free_component};
      std::vector<int> inc{(i + count - 1) % count, (i + 1) % count};
      for (std::size_t t = 0; t < others.size(); ++t) {
        b.push_back(others[t]);
        inc.push_back((i + pattern[t]) % count);
      }
      comps.push_back(make_component(cs.spec, b, inc));
    }
    try {
      SncModel m = make_model(std::move(comps));
      if (cocycle_holds(m)) return m;
    } catch (const std::invalid_argument&) {
    }
  }
  throw std::logic_error("no consistent gluing of the components of X^" + std::to_string(n));
}

SncModel f0_cycle_model() {
  BottTowerSpec s = product_spec({1, 1});
  std::vector<SncComponent> comps;
  for (int i = 0; i < 3; ++i) comps.push_back(make_component(s, {{1, 1}, {2, 1}}, {(i + 1) % 3, (i + 2) % 3}));
  return make_model(std::move(comps));
}

bool DssReport::ok() const {
  return std::all_of(pairs.begin(), pairs.end(), [](const DssPair& p) { return p.trivial && p.consistent; });
}

DssPair dss_pair(const SncModel& model, int i, int j) {
  if (i > j) std::swap(i, j);
  const Gluing* g = model.gluing(i, j);
  if (!g) throw std::invalid_argument("components do not meet");
  return dss_pair_impl(model.components[static_cast<std::size_t>(i)], i, model.components[static_cast<std::size_t>(j)], j, *g);
}

DssReport dss_check(const SncModel& model, int workers) {
  DssReport r;
  r.pairs.resize(model.gluings.size());
  detail::parallel_for(model.gluings.size(), workers, [&](std::size_t k) {
    r.pairs[k] = dss_pair(model, model.gluings[k].i, model.gluings[k].j);
  });
  return r;
}

SncFanoReport snc_fano_check(const SncModel& model) {
  SncFanoReport r;
  r.fano = true;
  for (const auto& c : model.components) {
    bool ok = is_log_fano(c.pair);
    r.component_log_fano.push_back(ok);
    r.fano = r.fano && ok;
  }
  r.dual_dimension = model_dual_dimension(model);
  r.maximal = r.dual_dimension == model.dimension;
  return r;
}

bool models_isomorphic(const SncModel& a, const SncModel& b) {
  const int count = static_cast<int>(a.components.size());
  if (count != static_cast<int>(b.components.size()) || a.dimension != b.dimension) return false;
  std::vector<int> perm(static_cast<std::size_t>(count));
  std::iota(perm.begin(), perm.end(), 0);
  do {
    std::vector<std::vector<FanIsomorphism>> options;
    bool ok = true;
    for (int i = 0; i < count && ok; ++i) {
      const auto& ca = a.components[static_cast<std::size_t>(i)];
      const auto& cb = b.components[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])];
      std::vector<int> cola(static_cast<std::size_t>(ca.pair.fan.ray_count()), 0);
      std::vector<int> colb(static_cast<std::size_t>(cb.pair.fan.ray_count()), 0);
      for (std::size_t p = 0; p < ca.pair.boundary.size(); ++p) {
        cola[static_cast<std::size_t>(ca.pair.boundary[p])] = perm[static_cast<std::size_t>(ca.incidence[p])] + 1;
      }
      for (std::size_t p = 0; p < cb.pair.boundary.size(); ++p) {
        colb[static_cast<std::size_t>(cb.pair.boundary[p])] = cb.incidence[p] + 1;
      }
      options.push_back(fan_isomorphisms(ca.pair.fan, cb.pair.fan, cola, colb));
      ok = !options.back().empty();
    }
    if (!ok) continue;
    // Backtrack over component isomorphisms, checking gluings as pairs complete.
    std::vector<std::size_t> choice(static_cast<std::size_t>(count), 0);
    std::function<bool(int)> assign = [&](int i) -> bool {
      if (i == count) return true;
      for (std::size_t c = 0; c < options[static_cast<std::size_t>(i)].size(); ++c) {
        choice[static_cast<std::size_t>(i)] = c;
        bool good = true;
        for (int h = 0; h < i && good; ++h) {
          if (!a.gluing(h, i)) continue;
          const auto& psi_h = options[static_cast<std::size_t>(h)][choice[static_cast<std::size_t>(h)]].ray_map;
          const auto& psi_i = options[static_cast<std::size_t>(i)][c].ray_map;
          std::map<RayIndex, RayIndex> corr_b;
          for (const auto& [x, y] : ray_correspondence(b, perm[static_cast<std::size_t>(h)], perm[static_cast<std::size_t>(i)])) {
            corr_b[x] = y;
          }
          for (const auto& [x, y] : ray_correspondence(a, h, i)) {
            auto it = corr_b.find(psi_h[static_cast<std::size_t>(x)]);
            if (it == corr_b.end() || it->second != psi_i[static_cast<std::size_t>(y)]) {
              good = false;
              break;
            }
          }
        }
        if (good && assign(i + 1)) return true;
      }
      return false;
    };
    if (assign(0)) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

SearchResult search_maximal_dss(int n, int bound, const SearchOptions& options) {
  if (n < 1) throw std::invalid_argument("search needs n >= 1");
  ClassifyOptions co;
  co.workers = options.workers;
  co.verify = false;
  const auto entries = classify(n, bound, co);
  const int count = n + 1;

  SearchResult result;
  result.exhaustive = n <= 2;
  result.log.push_back("components: " + std::to_string(entries.size()) + " classified pairs (n=" + std::to_string(n) +
                       ", bound=" + std::to_string(bound) + ")");

  std::vector<int> positions(static_cast<std::size_t>(n));
  std::iota(positions.begin(), positions.end(), 0);
  const auto labelings = permutations(positions);

  // Component c uses entry e with boundary position p meeting others[lab[p]],
  // where others lists the remaining component indices in increasing order.
  auto make = [&](int c, std::size_t e, const std::vector<int>& lab) {
    std::vector<int> others;
    for (int k = 0; k < count; ++k) {
      if (k != c) others.push_back(k);
    }
    std::vector<int> inc;
    for (int p = 0; p < n; ++p) inc.push_back(others[static_cast<std::size_t>(lab[static_cast<std::size_t>(p)])]);
    return make_component(entries[e].spec, entries[e].boundary, inc);
  };

  const std::size_t per_level = entries.size() * labelings.size();
  std::atomic<std::size_t> nodes{0}, pruned_gluing{0}, pruned_dss{0};
  std::vector<std::vector<SncModel>> found(per_level);

  auto limit_error = [&] {
    std::string msg = "search space exceeds " + std::to_string(options.max_nodes) + " nodes;";
    msg += " pruned (no gluing) " + std::to_string(pruned_gluing.load());
    msg += ", pruned (dss) " + std::to_string(pruned_dss.load());
    return ResourceLimitExceeded(msg);
  };

  detail::parallel_for(per_level, options.workers, [&](std::size_t root) {
    std::vector<SncComponent> comps;
    std::vector<Gluing> glue;
    std::function<void(int)> extend = [&](int c) {
      if (c == count) {
        SncModel m;
        m.dimension = n;
        m.components = comps;
        m.gluings = glue;
        std::sort(m.gluings.begin(), m.gluings.end(), [](const Gluing& x, const Gluing& y) {
          return std::pair(x.i, x.j) < std::pair(y.i, y.j);
        });
        if (cocycle_holds(m) && snc_fano_check(m).fano) found[root].push_back(std::move(m));
        return;
      }
      for (std::size_t opt = 0; opt < per_level; ++opt) {
        if (c == 0 && opt != root) continue;
        if (++nodes > options.max_nodes) throw limit_error();
        SncComponent x = make(c, opt / labelings.size(), labelings[opt % labelings.size()]);
        std::vector<Gluing> added;
        bool ok = true;
        for (int h = 0; h < c && ok; ++h) {
          auto g = find_gluing(comps[static_cast<std::size_t>(h)], h, x, c);
          if (!g) {
            ++pruned_gluing;
            ok = false;
            break;
          }
          if (options.dss_filter && !dss_pair_impl(comps[static_cast<std::size_t>(h)], h, x, c, *g).trivial) {
            ++pruned_dss;
            ok = false;
            break;
          }
          added.push_back(std::move(*g));
        }
        if (!ok) continue;
        comps.push_back(std::move(x));
        for (auto& g : added) glue.push_back(g);
        extend(c + 1);
        comps.pop_back();
        glue.resize(glue.size() - added.size());
      }
    };
    extend(0);
  });

  result.nodes = nodes;
  result.pruned_gluing = pruned_gluing;
  result.pruned_dss = pruned_dss;
  for (auto& per_root : found) {
    for (auto& m : per_root) {
      ++result.complete;
      bool seen = false;
      for (const auto& kept : result.models) {
        if (models_isomorphic(kept, m)) {
          seen = true;
          break;
        }
      }
      if (!seen) result.models.push_back(std::move(m));
    }
  }
  result.log.push_back("nodes: " + std::to_string(result.nodes));
  result.log.push_back("pruned (no gluing): " + std::to_string(result.pruned_gluing));
  result.log.push_back(std::string("pruned (dss): ") + (options.dss_filter ? std::to_string(result.pruned_dss) : "filter disabled"));
  result.log.push_back("complete models: " + std::to_string(result.complete));
  result.log.push_back("distinct models: " + std::to_string(result.models.size()));
  if (!result.exhaustive) result.log.push_back("results are within the searched window only");
  return result;
}

}  // namespace bott
