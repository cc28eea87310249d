#include "bott/fan.hpp"

#include "bott/linalg.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <queue>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

namespace bott {

namespace {

std::string cone_str(const Cone& c) {
  std::string s = "{";
  for (std::size_t i = 0; i < c.size(); ++i) s += (i ? "," : "") + std::to_string(c[i]);
  return s + "}";
}

struct LexLess {
  bool operator()(const LatticeVector& a, const LatticeVector& b) const { return lex_less(a, b); }
};

}  // namespace

Cone make_cone(std::vector<RayIndex> rays) {
  std::sort(rays.begin(), rays.end());
  rays.erase(std::unique(rays.begin(), rays.end()), rays.end());
  return rays;
}

bool is_face(const Cone& sub, const Cone& super) {
  return std::includes(super.begin(), super.end(), sub.begin(), sub.end());
}

IntMatrix Fan::cone_matrix(const Cone& cone) const {
  IntMatrix m(rank, static_cast<Eigen::Index>(cone.size()));
  for (std::size_t j = 0; j < cone.size(); ++j) m.col(static_cast<Eigen::Index>(j)) = rays.at(cone[j]);
  return m;
}

std::vector<int> Fan::cones_containing(const Cone& tau) const {
  std::vector<int> out;
  for (std::size_t i = 0; i < max_cones.size(); ++i) {
    if (is_face(tau, max_cones[i])) out.push_back(static_cast<int>(i));
  }
  return out;
}

RayIndex Fan::find_ray(const LatticeVector& v) const {
  for (std::size_t i = 0; i < rays.size(); ++i) {
    if (rays[i] == v) return static_cast<RayIndex>(i);
  }
  return -1;
}

std::vector<WallIncidence> wall_incidences(const Fan& fan) {
  std::map<Cone, std::vector<int>> walls;
  for (std::size_t c = 0; c < fan.max_cones.size(); ++c) {
    const Cone& sigma = fan.max_cones[c];
    for (std::size_t drop = 0; drop < sigma.size(); ++drop) {
      Cone w;
      for (std::size_t k = 0; k < sigma.size(); ++k) {
        if (k != drop) w.push_back(sigma[k]);
      }
      walls[w].push_back(static_cast<int>(c));
    }
  }
  std::vector<WallIncidence> out;
  out.reserve(walls.size());
  for (auto& [w, cones] : walls) out.push_back({w, cones});
  return out;
}

ValidationReport validate_fan(const Fan& fan, std::uint64_t seed) {
  ValidationReport report;
  auto fail = [&](std::string msg) { report.problems.push_back(std::move(msg)); };
  const int n = fan.rank;
  if (n < 0) {
    fail("negative rank");
    return report;
  }
  for (std::size_t i = 0; i < fan.rays.size(); ++i) {
    const auto& v = fan.rays[i];
    if (v.size() != n) {
      fail("ray " + std::to_string(i) + " has wrong length");
      continue;
    }
    if (!is_primitive(v)) fail("ray " + std::to_string(i) + " is not primitive");
    for (std::size_t j = 0; j < i; ++j) {
      if (fan.rays[j] == v) fail("rays " + std::to_string(j) + " and " + std::to_string(i) + " coincide");
    }
  }
  if (!report.ok()) return report;
  if (fan.max_cones.empty()) {
    fail("fan has no maximal cones");
    return report;
  }
  std::set<Cone> seen;
  std::vector<bool> used(fan.rays.size(), false);
  for (const auto& c : fan.max_cones) {
    if (static_cast<int>(c.size()) != n || !std::is_sorted(c.begin(), c.end()) ||
        std::adjacent_find(c.begin(), c.end()) != c.end()) {
      fail("cone " + cone_str(c) + " is not a sorted set of " + std::to_string(n) + " rays");
      continue;
    }
    bool in_range = std::all_of(c.begin(), c.end(), [&](RayIndex r) { return r >= 0 && r < fan.ray_count(); });
    if (!in_range) {
      fail("cone " + cone_str(c) + " references a missing ray");
      continue;
    }
    if (!seen.insert(c).second) fail("cone " + cone_str(c) + " listed twice");
    for (auto r : c) used[static_cast<std::size_t>(r)] = true;
    Integer det = determinant(fan.cone_matrix(c));
    if (abs(det) != 1) fail("cone " + cone_str(c) + " is not smooth (det " + std::to_string(det.value()) + ")");
  }
  for (std::size_t i = 0; i < used.size(); ++i) {
    if (!used[i]) fail("ray " + std::to_string(i) + " lies in no maximal cone");
  }
  if (!report.ok()) return report;
  if (n == 0) {
    if (fan.max_cones.size() != 1) fail("rank-0 fan must have exactly one cone");
    return report;
  }

  std::vector<IntMatrix> inverses;
  inverses.reserve(fan.max_cones.size());
  for (const auto& c : fan.max_cones) inverses.push_back(unimodular_inverse(fan.cone_matrix(c)));

  auto walls = wall_incidences(fan);
  std::vector<std::vector<int>> adjacency(fan.max_cones.size());
  for (const auto& w : walls) {
    if (w.cones.size() != 2) {
      fail("wall " + cone_str(w.wall) + " lies in " + std::to_string(w.cones.size()) + " maximal cone(s)");
      continue;
    }
    const int a = w.cones[0], b = w.cones[1];
    adjacency[a].push_back(b);
    adjacency[b].push_back(a);
    const Cone& sa = fan.max_cones[a];
    const Cone& sb = fan.max_cones[b];
    RayIndex vb = -1;
    std::size_t pos_a = 0;
    for (auto r : sb) {
      if (!std::binary_search(w.wall.begin(), w.wall.end(), r)) vb = r;
    }
    for (std::size_t k = 0; k < sa.size(); ++k) {
      if (!std::binary_search(w.wall.begin(), w.wall.end(), sa[k])) pos_a = k;
    }
    IntVector coords = inverses[a] * fan.rays[vb];
    if (coords[static_cast<Eigen::Index>(pos_a)] >= 0) {
      fail("cones " + cone_str(sa) + " and " + cone_str(sb) + " lie on the same side of wall " + cone_str(w.wall));
    }
  }
  std::vector<bool> visited(fan.max_cones.size(), false);
  std::queue<int> q;
  q.push(0);
  visited[0] = true;
  std::size_t reached = 1;
  while (!q.empty()) {
    int c = q.front();
    q.pop();
    for (int d : adjacency[c]) {
      if (!visited[d]) {
        visited[d] = true;
        ++reached;
        q.push(d);
      }
    }
  }
  if (reached != fan.max_cones.size()) fail("wall-adjacency graph is disconnected");
  if (!report.ok()) return report;

  // Generic-point location: the cones cover N_Q with degree one.
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::int64_t> coord(-1000000, 1000000);
  int located = 0;
  for (int attempt = 0; attempt < 32 && located < 3; ++attempt) {
    IntVector p(n);
    for (int i = 0; i < n; ++i) p[i] = coord(rng);
    int hits = 0;
    bool generic = true;
    for (const auto& inv : inverses) {
      IntVector x = inv * p;
      bool nonneg = true, positive = true;
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (x[i] < 0) nonneg = false;
        if (x[i] <= 0) positive = false;
      }
      if (nonneg && !positive) generic = false;
      if (positive) ++hits;
    }
    if (!generic) continue;
    ++located;
    if (hits != 1) {
      fail("generic point lies in " + std::to_string(hits) + " maximal cones");
      break;
    }
  }
  return report;
}

RayIndex StarFan::star_ray(RayIndex ambient) const {
  auto it = std::find(ambient_ray.begin(), ambient_ray.end(), ambient);
  return it == ambient_ray.end() ? -1 : static_cast<RayIndex>(it - ambient_ray.begin());
}

StarFan star_fan(const Fan& fan, const Cone& tau_in) {
  Cone tau = make_cone(tau_in);
  auto containing = fan.cones_containing(tau);
  if (containing.empty()) throw std::invalid_argument("cone " + cone_str(tau) + " is not a face of the fan");
  const int n = fan.rank;
  const int k = static_cast<int>(tau.size());
  StarFan out;
  out.tau = tau;
  out.fan.rank = n - k;
  if (k == 0) {
    out.projection = IntMatrix::Identity(n, n);
  } else {
    const Cone& sigma = fan.max_cones[containing.front()];
    IntMatrix inv = unimodular_inverse(fan.cone_matrix(sigma));
    out.projection.resize(n - k, n);
    Eigen::Index row = 0;
    for (std::size_t j = 0; j < sigma.size(); ++j) {
      if (!std::binary_search(tau.begin(), tau.end(), sigma[j])) out.projection.row(row++) = inv.row(static_cast<Eigen::Index>(j));
    }
  }
  std::set<RayIndex> adjacent;
  for (int c : containing) {
    for (auto r : fan.max_cones[c]) {
      if (!std::binary_search(tau.begin(), tau.end(), r)) adjacent.insert(r);
    }
  }
  out.ambient_ray.assign(adjacent.begin(), adjacent.end());
  for (auto r : out.ambient_ray) out.fan.rays.push_back(out.projection * fan.rays[r]);
  for (int c : containing) {
    Cone star_cone;
    for (auto r : fan.max_cones[c]) {
      if (!std::binary_search(tau.begin(), tau.end(), r)) star_cone.push_back(out.star_ray(r));
    }
    out.fan.max_cones.push_back(make_cone(star_cone));
  }
  return out;
}

Fan star_subdivision(const Fan& fan, const Cone& tau_in) {
  Cone tau = make_cone(tau_in);
  if (tau.size() < 2) throw std::invalid_argument("star subdivision needs a cone of dimension >= 2");
  if (!fan.is_cone(tau)) throw std::invalid_argument("cone " + cone_str(tau) + " is not a face of the fan");
  LatticeVector w = LatticeVector::Zero(fan.rank);
  for (auto r : tau) w += fan.rays[r];
  Fan out = fan;
  const RayIndex added = fan.ray_count();
  out.rays.push_back(w);
  out.max_cones.clear();
  for (const auto& sigma : fan.max_cones) {
    if (!is_face(tau, sigma)) {
      out.max_cones.push_back(sigma);
      continue;
    }
    for (auto r : tau) {
      Cone c;
      for (auto s : sigma) {
        if (s != r) c.push_back(s);
      }
      c.push_back(added);
      out.max_cones.push_back(make_cone(c));
    }
  }
  return out;
}

namespace {

// Colors refined by the number of incident maximal cones.
std::vector<std::pair<int, int>> fingerprints(const Fan& f, std::span<const int> colors) {
  std::vector<std::pair<int, int>> fp(f.rays.size());
  for (std::size_t i = 0; i < f.rays.size(); ++i) fp[i] = {colors.empty() ? 0 : colors[i], 0};
  for (const auto& c : f.max_cones) {
    for (auto r : c) ++fp[static_cast<std::size_t>(r)].second;
  }
  return fp;
}

std::vector<FanIsomorphism> search_isomorphisms(const Fan& f1, const Fan& f2, std::span<const int> colors1,
                                                std::span<const int> colors2, bool first_only) {
  std::vector<FanIsomorphism> found;
  if (f1.rank != f2.rank || f1.rays.size() != f2.rays.size() || f1.max_cones.size() != f2.max_cones.size()) {
    return found;
  }
  if (!colors1.empty() && colors1.size() != f1.rays.size()) throw std::invalid_argument("color list length mismatch");
  if (!colors2.empty() && colors2.size() != f2.rays.size()) throw std::invalid_argument("color list length mismatch");
  const int n = f1.rank;
  if (n == 0) {
    found.push_back({LatticeMap{IntMatrix(0, 0)}, {}});
    return found;
  }
  auto fp1 = fingerprints(f1, colors1);
  auto fp2 = fingerprints(f2, colors2);
  {
    auto a = fp1, b = fp2;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) return found;
  }
  std::map<LatticeVector, RayIndex, LexLess> lookup;
  for (std::size_t i = 0; i < f2.rays.size(); ++i) lookup[f2.rays[i]] = static_cast<RayIndex>(i);
  std::set<Cone> cones2(f2.max_cones.begin(), f2.max_cones.end());

  const Cone& ref = f1.max_cones.front();
  IntMatrix ref_inv = unimodular_inverse(f1.cone_matrix(ref));

  for (const auto& target : f2.max_cones) {
    std::vector<std::size_t> perm(target.size());
    std::iota(perm.begin(), perm.end(), 0);
    do {
      bool colors_ok = true;
      for (std::size_t k = 0; k < ref.size() && colors_ok; ++k) {
        colors_ok = fp1[static_cast<std::size_t>(ref[k])] == fp2[static_cast<std::size_t>(target[perm[k]])];
      }
      if (!colors_ok) continue;
      IntMatrix image(n, n);
      for (std::size_t k = 0; k < perm.size(); ++k) image.col(static_cast<Eigen::Index>(k)) = f2.rays[target[perm[k]]];
      IntMatrix a = image * ref_inv;
      FanIsomorphism iso{LatticeMap{a}, std::vector<RayIndex>(f1.rays.size(), -1)};
      std::vector<bool> hit(f2.rays.size(), false);
      bool ok = true;
      for (std::size_t r = 0; r < f1.rays.size() && ok; ++r) {
        auto it = lookup.find(a * f1.rays[r]);
        if (it == lookup.end() || hit[static_cast<std::size_t>(it->second)] ||
            fp1[r] != fp2[static_cast<std::size_t>(it->second)]) {
          ok = false;
          break;
        }
        hit[static_cast<std::size_t>(it->second)] = true;
        iso.ray_map[r] = it->second;
      }
      for (std::size_t c = 0; c < f1.max_cones.size() && ok; ++c) {
        Cone mapped;
        for (auto r : f1.max_cones[c]) mapped.push_back(iso.ray_map[static_cast<std::size_t>(r)]);
        ok = cones2.count(make_cone(mapped)) > 0;
      }
      if (!ok) continue;
      found.push_back(std::move(iso));
      if (first_only) return found;
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return found;
}

}  // namespace

std::optional<FanIsomorphism> fan_isomorphic(const Fan& f1, const Fan& f2) { return fan_isomorphic(f1, f2, {}, {}); }

std::optional<FanIsomorphism> fan_isomorphic(const Fan& f1, const Fan& f2, std::span<const int> colors1,
                                             std::span<const int> colors2) {
  auto all = search_isomorphisms(f1, f2, colors1, colors2, true);
  if (all.empty()) return std::nullopt;
  return std::move(all.front());
}

std::vector<FanIsomorphism> fan_isomorphisms(const Fan& f1, const Fan& f2, std::span<const int> colors1,
                                             std::span<const int> colors2) {
  return search_isomorphisms(f1, f2, colors1, colors2, false);
}

bool verify_isomorphism(const Fan& f1, const Fan& f2, const FanIsomorphism& iso) {
  if (f1.rank != f2.rank || f1.rays.size() != f2.rays.size() || iso.ray_map.size() != f1.rays.size()) return false;
  if (iso.map.matrix.rows() != f1.rank || iso.map.matrix.cols() != f1.rank) return false;
  if (abs(determinant(iso.map.matrix)) != 1) return false;
  std::vector<bool> hit(f2.rays.size(), false);
  for (std::size_t r = 0; r < f1.rays.size(); ++r) {
    RayIndex t = iso.ray_map[r];
    if (t < 0 || t >= f2.ray_count() || hit[static_cast<std::size_t>(t)]) return false;
    if (iso.map.apply(f1.rays[r]) != f2.rays[static_cast<std::size_t>(t)]) return false;
    hit[static_cast<std::size_t>(t)] = true;
  }
  std::set<Cone> cones2(f2.max_cones.begin(), f2.max_cones.end());
  if (cones2.size() != f1.max_cones.size()) return false;
  for (const auto& c : f1.max_cones) {
    Cone mapped;
    for (auto r : c) mapped.push_back(iso.ray_map[static_cast<std::size_t>(r)]);
    if (!cones2.count(make_cone(mapped))) return false;
  }
  return true;
}

Fan canonical_fan(const Fan& fan, std::vector<RayIndex>* old_to_new) {
  std::vector<RayIndex> order(fan.rays.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](RayIndex a, RayIndex b) { return lex_less(fan.rays[a], fan.rays[b]); });
  std::vector<RayIndex> remap(fan.rays.size());
  Fan out;
  out.rank = fan.rank;
  for (std::size_t i = 0; i < order.size(); ++i) {
    remap[static_cast<std::size_t>(order[i])] = static_cast<RayIndex>(i);
    out.rays.push_back(fan.rays[order[i]]);
  }
  for (const auto& c : fan.max_cones) {
    Cone mapped;
    for (auto r : c) mapped.push_back(remap[static_cast<std::size_t>(r)]);
    out.max_cones.push_back(make_cone(mapped));
  }
  std::sort(out.max_cones.begin(), out.max_cones.end());
  if (old_to_new) *old_to_new = std::move(remap);
  return out;
}

std::string write_fan(const Fan& fan_in) {
  Fan fan = canonical_fan(fan_in);
  std::ostringstream os;
  os << "rank " << fan.rank << "\n";
  os << "rays " << fan.rays.size() << "\n";
  for (const auto& v : fan.rays) {
    for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? " " : "") << v[i];
    os << "\n";
  }
  os << "cones " << fan.max_cones.size() << "\n";
  for (const auto& c : fan.max_cones) {
    for (std::size_t i = 0; i < c.size(); ++i) os << (i ? " " : "") << c[i];
    os << "\n";
  }
  return os.str();
}

Fan read_fan(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  auto next_line = [&]() {
    if (!std::getline(in, line)) throw std::invalid_argument("fan file: unexpected end after line " + std::to_string(line_no));
    ++line_no;
    return std::istringstream(line);
  };
  auto error = [&](const std::string& msg) {
    return std::invalid_argument("fan file line " + std::to_string(line_no) + ": " + msg);
  };
  auto header = [&](const char* key) {
    auto ls = next_line();
    std::string word;
    long long value = -1;
    if (!(ls >> word >> value) || word != key || value < 0) throw error(std::string("expected '") + key + " <count>'");
    std::string extra;
    if (ls >> extra) throw error("trailing text");
    return value;
  };
  Fan fan;
  fan.rank = static_cast<int>(header("rank"));
  const auto ray_count = header("rays");
  for (long long i = 0; i < ray_count; ++i) {
    auto ls = next_line();
    LatticeVector v(fan.rank);
    for (int k = 0; k < fan.rank; ++k) {
      long long x;
      if (!(ls >> x)) throw error("ray needs " + std::to_string(fan.rank) + " integers");
      v[k] = x;
    }
    std::string extra;
    if (ls >> extra) throw error("ray has too many entries");
    fan.rays.push_back(v);
  }
  const auto cone_count = header("cones");
  for (long long i = 0; i < cone_count; ++i) {
    auto ls = next_line();
    Cone c;
    long long r;
    while (ls >> r) {
      if (r < 0 || r >= ray_count) throw error("ray index out of range");
      c.push_back(static_cast<RayIndex>(r));
    }
    if (!ls.eof()) throw error("cone entries must be integers");
    if (static_cast<int>(c.size()) != fan.rank) throw error("cone must list " + std::to_string(fan.rank) + " rays");
    fan.max_cones.push_back(make_cone(c));
  }
  if (std::getline(in, line) && !line.empty()) throw std::invalid_argument("fan file: trailing content");
  return fan;
}

Fan projective_space_fan(int n) {
  if (n < 0) throw std::invalid_argument("negative dimension");
  Fan f;
  f.rank = n;
  for (int i = 0; i < n; ++i) f.rays.push_back(LatticeVector::Unit(n, i));
  f.rays.push_back(LatticeVector::Constant(n, Integer(-1)));
  if (n == 0) {
    f.rays.clear();
    f.max_cones.push_back({});
    return f;
  }
  for (int omit = 0; omit <= n; ++omit) {
    Cone c;
    for (int i = 0; i <= n; ++i) {
      if (i != omit) c.push_back(i);
    }
    f.max_cones.push_back(c);
  }
  return f;
}

Fan product_fan(const Fan& a, const Fan& b) {
  Fan f;
  f.rank = a.rank + b.rank;
  for (const auto& v : a.rays) {
    LatticeVector w = LatticeVector::Zero(f.rank);
    w.head(a.rank) = v;
    f.rays.push_back(w);
  }
  for (const auto& v : b.rays) {
    LatticeVector w = LatticeVector::Zero(f.rank);
    w.tail(b.rank) = v;
    f.rays.push_back(w);
  }
  for (const auto& ca : a.max_cones) {
    for (const auto& cb : b.max_cones) {
      Cone c = ca;
      for (auto r : cb) c.push_back(r + a.ray_count());
      f.max_cones.push_back(make_cone(c));
    }
  }
  return f;
}

}  // namespace bott
