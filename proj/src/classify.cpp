#include "bott/logfano.hpp"

#include "parallel.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <sstream>

namespace bott {

namespace {

void compositions(int left, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (left == 0) {
    out.push_back(cur);
    return;
  }
  for (int d = 1; d <= left; ++d) {
    cur.push_back(d);
    compositions(left - d, cur, out);
    cur.pop_back();
  }
}

std::size_t twist_slots(const std::vector<int>& dims) {
  std::size_t slots = 0;
  for (std::size_t i = 1; i < dims.size(); ++i) slots += static_cast<std::size_t>(dims[i]) * i;
  return slots;
}

std::size_t saturating_mul(std::size_t a, std::size_t b) {
  if (a != 0 && b > std::numeric_limits<std::size_t>::max() / a) return std::numeric_limits<std::size_t>::max();
  return a * b;
}

std::size_t saturating_pow(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) r = saturating_mul(r, base);
  return r;
}

BottTowerSpec spec_from_slots(const std::vector<int>& dims, const std::vector<int>& values) {
  BottTowerSpec s = product_spec(dims);
  std::size_t pos = 0;
  for (std::size_t i = 1; i < dims.size(); ++i) {
    for (auto& v : s.twists[i]) {
      for (Eigen::Index j = 0; j < v.size(); ++j) v[j] = values[pos++];
    }
  }
  return s;
}

struct Candidate {
  std::size_t spec_index = 0;
  BottTowerSpec spec;
  std::vector<RayLabel> boundary;
  LogFanoPair pair;
  std::string bucket;
};

// Isomorphism-invariant data used to prune the pairwise search.
std::string bucket_key(const LogFanoPair& pair, const std::vector<Wall>& ws) {
  std::ostringstream os;
  os << pair.fan.ray_count() << '|' << picard_rank(pair.fan) << '|' << nef_value(pair.fan, pair.l).tau << '|';
  std::vector<std::vector<std::int64_t>> lines;
  for (const auto& l : stratum_lines(pair)) {
    std::vector<std::int64_t> d;
    for (std::size_t j = 0; j < l.degrees.size(); ++j) {
      if (static_cast<int>(j) != l.omitted) d.push_back(l.degrees[j].value());
    }
    std::sort(d.begin(), d.end());
    d.insert(d.begin(), l.degrees[static_cast<std::size_t>(l.omitted)].value());
    lines.push_back(d);
  }
  std::sort(lines.begin(), lines.end());
  for (const auto& d : lines) {
    for (auto x : d) os << x << ',';
    os << ';';
  }
  os << '|';
  Divisor k = canonical_divisor(pair.fan);
  std::vector<std::tuple<std::int64_t, std::int64_t, int>> profile;
  for (const auto& w : ws) {
    int in_boundary = 0;
    for (auto r : w.rays) in_boundary += std::binary_search(pair.boundary.begin(), pair.boundary.end(), r) ? 1 : 0;
    profile.emplace_back(intersection_number(k, w).value(), intersection_number(pair.l, w).value(), in_boundary);
  }
  std::sort(profile.begin(), profile.end());
  for (const auto& [a, b, c] : profile) os << a << ',' << b << ',' << c << ';';
  return os.str();
}

}  // namespace

std::vector<ClassificationEntry> classify(int n, int bound, const ClassifyOptions& options) {
  if (n < 1) throw std::invalid_argument("classification needs n >= 1");
  if (bound < 0) throw std::invalid_argument("twist bound must be >= 0");

  std::vector<std::vector<int>> comps;
  std::vector<int> cur;
  compositions(n, cur, comps);

  std::size_t total = 0;
  for (const auto& dims : comps) {
    std::size_t cones = 1;
    for (int d : dims) cones = saturating_mul(cones, static_cast<std::size_t>(d + 1));
    std::size_t specs = saturating_pow(static_cast<std::size_t>(2 * bound + 1), twist_slots(dims));
    total = std::min(std::numeric_limits<std::size_t>::max() - 1, total + saturating_mul(specs, cones));
  }
  if (total > options.max_candidates) {
    throw ResourceLimitExceeded("classification of n=" + std::to_string(n) + ", bound=" + std::to_string(bound) + " needs " +
                                std::to_string(total) + " candidate pairs, limit is " +
                                std::to_string(options.max_candidates));
  }

  std::vector<BottTowerSpec> specs;
  for (const auto& dims : comps) {
    const std::size_t slots = twist_slots(dims);
    std::vector<int> values(slots, -bound);
    while (true) {
      specs.push_back(spec_from_slots(dims, values));
      std::size_t pos = slots;
      while (pos > 0 && values[pos - 1] == bound) values[--pos] = -bound;
      if (pos == 0) break;
      ++values[pos - 1];
    }
  }

  std::vector<std::vector<Candidate>> found(specs.size());
  detail::parallel_for(specs.size(), options.workers, [&](std::size_t idx) {
    TowerFan t = build_fan(specs[idx]);
    const auto ws = walls(t.fan);
    for (const auto& sigma : t.fan.max_cones) {
      LogFanoPair pair = make_log_pair(t.fan, sigma);
      if (positivity(ws, pair.l) != Positivity::ample) continue;
      Candidate c{idx, specs[idx], {}, pair, bucket_key(pair, ws)};
      for (auto r : pair.boundary) c.boundary.push_back(t.labels[static_cast<std::size_t>(r)]);
      found[idx].push_back(std::move(c));
    }
  });

  // Single-owner reduction in candidate order.
  struct Class {
    std::vector<const Candidate*> members;
  };
  std::vector<Class> classes;
  std::map<std::string, std::vector<std::size_t>> by_bucket;
  for (const auto& per_spec : found) {
    for (const auto& c : per_spec) {
      auto& bucket = by_bucket[c.bucket];
      bool placed = false;
      for (auto ci : bucket) {
        if (pair_isomorphic(classes[ci].members.front()->pair, c.pair)) {
          classes[ci].members.push_back(&c);
          placed = true;
          break;
        }
      }
      if (!placed) {
        bucket.push_back(classes.size());
        classes.push_back({{&c}});
      }
    }
  }

  std::vector<ClassificationEntry> entries(classes.size());
  detail::parallel_for(classes.size(), options.workers, [&](std::size_t ci) {
    const Candidate* best = nullptr;
    std::string best_key;
    for (const Candidate* m : classes[ci].members) {
      std::string key = pair_key(m->pair);
      if (!best || key < best_key) {
        best = m;
        best_key = std::move(key);
      }
    }
    ClassificationEntry& e = entries[ci];
    e.spec = best->spec;
    e.boundary = best->boundary;
    e.key = best_key;
    e.presentations = static_cast<int>(classes[ci].members.size());
    e.tau = nef_value(best->pair.fan, best->pair.l).tau;
    e.rho = picard_rank(best->pair.fan);
    e.gamma_components = best->pair.fan.ray_count() - static_cast<int>(best->pair.boundary.size());
    const auto lines = stratum_lines(best->pair);
    for (std::size_t i = 0; i < lines.size(); ++i) {
      if (lines[i].free) e.free_lines.push_back(static_cast<int>(i));
      e.line_degrees.push_back(lines[i].degrees);
    }
    if (options.verify) e.structure = verify_structure(best->pair);
  });

  std::sort(entries.begin(), entries.end(), [](const ClassificationEntry& a, const ClassificationEntry& b) {
    if (a.rho != b.rho) return a.rho < b.rho;
    if (a.spec.dims != b.spec.dims) return a.spec.dims < b.spec.dims;
    return a.key < b.key;
  });
  return entries;
}

}  // namespace bott
