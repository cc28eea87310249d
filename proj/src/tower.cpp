#include "bott/tower.hpp"

#include "json.hpp"

#include <algorithm>
#include <stdexcept>

namespace bott {

std::string to_string(const RayLabel& label) { return std::to_string(label.stage) + ":" + std::to_string(label.k); }

RayLabel parse_ray_label(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("ray label must look like stage:k, got '" + text + "'");
  try {
    std::size_t used = 0;
    RayLabel l{std::stoi(text.substr(0, colon), &used), 0};
    if (used != colon) throw std::invalid_argument("");
    std::string rest = text.substr(colon + 1);
    l.k = std::stoi(rest, &used);
    if (used != rest.size()) throw std::invalid_argument("");
    return l;
  } catch (const std::logic_error&) {
    throw std::invalid_argument("ray label must look like stage:k, got '" + text + "'");
  }
}

int BottTowerSpec::dimension() const {
  int n = 0;
  for (int d : dims) n += d;
  return n;
}

int BottTowerSpec::offset(int stage) const {
  int off = 0;
  for (int i = 1; i < stage; ++i) off += dims[static_cast<std::size_t>(i - 1)];
  return off;
}

void BottTowerSpec::validate(bool allow_point) const {
  if (dims.empty() && !allow_point) throw std::invalid_argument("a tower needs at least one stage");
  if (twists.size() != dims.size()) {
    throw std::invalid_argument("twists must have one entry per stage (" + std::to_string(dims.size()) + "), got " +
                                std::to_string(twists.size()));
  }
  for (std::size_t i = 0; i < dims.size(); ++i) {
    const int stage = static_cast<int>(i) + 1;
    if (dims[i] < 1) throw std::invalid_argument("stage " + std::to_string(stage) + " has fiber dimension < 1");
    if (static_cast<int>(twists[i].size()) != dims[i]) {
      throw std::invalid_argument("stage " + std::to_string(stage) + " needs " + std::to_string(dims[i]) +
                                  " twist vectors, got " + std::to_string(twists[i].size()));
    }
    for (std::size_t k = 0; k < twists[i].size(); ++k) {
      if (twists[i][k].size() != static_cast<Eigen::Index>(i)) {
        throw std::invalid_argument("stage " + std::to_string(stage) + " slot " + std::to_string(k + 1) +
                                    ": twist vector has length " + std::to_string(twists[i][k].size()) +
                                    ", expected " + std::to_string(i));
      }
    }
  }
}

BottTowerSpec product_spec(const std::vector<int>& dims) {
  BottTowerSpec s;
  s.dims = dims;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    s.twists.emplace_back(static_cast<std::size_t>(std::max(dims[i], 0)), IntVector::Zero(static_cast<Eigen::Index>(i)));
  }
  return s;
}

BottTowerSpec hirzebruch_spec(std::int64_t l) {
  BottTowerSpec s = product_spec({1, 1});
  s.twists[1][0][0] = l;
  return s;
}

RayIndex TowerFan::ray(int stage, int k) const {
  auto it = std::find(labels.begin(), labels.end(), RayLabel{stage, k});
  if (it == labels.end()) throw std::invalid_argument("no ray labeled " + to_string(RayLabel{stage, k}));
  return static_cast<RayIndex>(it - labels.begin());
}

TowerFan build_fan(const BottTowerSpec& spec) {
  spec.validate(true);
  const int n = spec.dimension();
  const int m = spec.stages();
  TowerFan out;
  out.fan.rank = n;
  std::vector<RayIndex> first(static_cast<std::size_t>(m));
  for (int i = 1; i <= m; ++i) {
    first[static_cast<std::size_t>(i - 1)] = out.fan.ray_count();
    const int ni = spec.dims[static_cast<std::size_t>(i - 1)];
    LatticeVector u0 = LatticeVector::Zero(n);
    for (int k = 1; k <= ni; ++k) u0[spec.offset(i) + k - 1] = -1;
    for (int j = i + 1; j <= m; ++j) {
      const auto& stage_twists = spec.twists[static_cast<std::size_t>(j - 1)];
      for (int k = 1; k <= spec.dims[static_cast<std::size_t>(j - 1)]; ++k) {
        u0[spec.offset(j) + k - 1] = stage_twists[static_cast<std::size_t>(k - 1)][i - 1];
      }
    }
    out.fan.rays.push_back(u0);
    out.labels.push_back({i, 0});
    for (int k = 1; k <= ni; ++k) {
      out.fan.rays.push_back(LatticeVector::Unit(n, spec.offset(i) + k - 1));
      out.labels.push_back({i, k});
    }
  }
  // Odometer over the omitted ray of every stage.
  std::vector<int> omit(static_cast<std::size_t>(m), 0);
  while (true) {
    Cone c;
    for (int i = 1; i <= m; ++i) {
      for (int k = 0; k <= spec.dims[static_cast<std::size_t>(i - 1)]; ++k) {
        if (k != omit[static_cast<std::size_t>(i - 1)]) c.push_back(first[static_cast<std::size_t>(i - 1)] + k);
      }
    }
    out.fan.max_cones.push_back(make_cone(c));
    int pos = m - 1;
    while (pos >= 0 && omit[static_cast<std::size_t>(pos)] == spec.dims[static_cast<std::size_t>(pos)]) {
      omit[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
    ++omit[static_cast<std::size_t>(pos)];
  }
  return out;
}

BottTowerSpec truncate(const BottTowerSpec& spec, int stages) {
  if (stages < 0 || stages > spec.stages()) throw std::invalid_argument("truncation outside the tower");
  BottTowerSpec t;
  t.dims.assign(spec.dims.begin(), spec.dims.begin() + stages);
  t.twists.assign(spec.twists.begin(), spec.twists.begin() + stages);
  return t;
}

StageProjection stage_projection(const BottTowerSpec& spec, int stage) {
  spec.validate(true);
  if (stage < 1 || stage > spec.stages()) {
    throw std::invalid_argument("stage " + std::to_string(stage) + " outside 1.." + std::to_string(spec.stages()));
  }
  StageProjection p{spec, truncate(spec, stage - 1), {}};
  const int n = spec.dimension();
  const int target_rank = p.target.dimension();
  p.map.matrix = IntMatrix::Zero(target_rank, n);
  p.map.matrix.leftCols(target_rank) = IntMatrix::Identity(target_rank, target_rank);

  TowerFan src = build_fan(spec);
  TowerFan dst = build_fan(p.target);
  for (const auto& sigma : src.fan.max_cones) {
    Cone image;
    for (auto r : sigma) {
      LatticeVector w = p.map.apply(src.fan.rays[r]);
      if (w.isZero()) continue;
      RayIndex t = dst.fan.find_ray(w);
      if (t < 0) throw std::logic_error("stage projection sends a ray off the target rays");
      image.push_back(t);
    }
    if (!dst.fan.is_cone(make_cone(image))) throw std::logic_error("stage projection is not a toric morphism");
  }
  return p;
}

BottTowerSpec blowup_point_spec(int n) {
  if (n < 2) throw std::invalid_argument("blow-up of a point needs n >= 2");
  BottTowerSpec s = product_spec({n - 1, 1});
  s.twists[1][0][0] = 1;
  return s;
}

std::vector<RayLabel> blowup_point_boundary(int n) {
  if (n < 2) throw std::invalid_argument("blow-up of a point needs n >= 2");
  std::vector<RayLabel> b{{2, 1}};
  for (int k = 1; k <= n - 1; ++k) b.push_back({1, k});
  return b;
}

Fan blowup_flag_fan(int n) {
  if (n < 1) throw std::invalid_argument("flag blow-up needs n >= 1");
  Fan f = projective_space_fan(n);
  // P^k = V(<e_{k+1}..e_n>); ray e_i has index i-1. Blowing up P^k leaves the
  // cone of its strict transform in place, so the same index set is reused.
  for (int k = 0; k <= n - 2; ++k) {
    Cone c;
    for (int i = k; i < n; ++i) c.push_back(i);
    f = star_subdivision(f, c);
  }
  return f;
}

std::string spec_to_json(const BottTowerSpec& spec) {
  nlohmann::json j;
  j["dims"] = spec.dims;
  nlohmann::json tw = nlohmann::json::array();
  for (std::size_t i = 1; i < spec.twists.size(); ++i) {
    nlohmann::json entry = nlohmann::json::array();
    for (const auto& v : spec.twists[i]) {
      nlohmann::json vec = nlohmann::json::array();
      for (Eigen::Index k = 0; k < v.size(); ++k) vec.push_back(v[k].value());
      entry.push_back(vec);
    }
    tw.push_back(entry);
  }
  j["twists"] = tw;
  return j.dump();
}

BottTowerSpec spec_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("spec file is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("dims") || !j["dims"].is_array()) {
    throw std::invalid_argument("spec file needs a \"dims\" array");
  }
  BottTowerSpec s;
  for (const auto& d : j["dims"]) {
    if (!d.is_number_integer()) throw std::invalid_argument("dims entries must be integers");
    s.dims.push_back(d.get<int>());
  }
  s.twists.emplace_back(s.dims.empty() ? 0 : static_cast<std::size_t>(std::max(s.dims[0], 0)), IntVector(0));
  nlohmann::json tw = j.value("twists", nlohmann::json::array());
  if (!tw.is_array()) throw std::invalid_argument("\"twists\" must be an array");
  if (tw.size() + 1 != s.dims.size()) {
    throw std::invalid_argument("\"twists\" needs " + std::to_string(s.dims.empty() ? 0 : s.dims.size() - 1) +
                                " stage entries (stages 2..m), got " + std::to_string(tw.size()));
  }
  for (std::size_t i = 0; i < tw.size(); ++i) {
    const int stage = static_cast<int>(i) + 2;
    if (!tw[i].is_array()) throw std::invalid_argument("stage " + std::to_string(stage) + ": twist entry must be a list");
    std::vector<IntVector> entry;
    for (std::size_t k = 0; k < tw[i].size(); ++k) {
      const auto& vec = tw[i][k];
      if (!vec.is_array()) {
        throw std::invalid_argument("stage " + std::to_string(stage) + " slot " + std::to_string(k + 1) +
                                    ": twist must be a list of integers");
      }
      IntVector v(static_cast<Eigen::Index>(vec.size()));
      for (std::size_t t = 0; t < vec.size(); ++t) {
        if (!vec[t].is_number_integer()) {
          throw std::invalid_argument("stage " + std::to_string(stage) + " slot " + std::to_string(k + 1) +
                                      ": twist entries must be integers");
        }
        v[static_cast<Eigen::Index>(t)] = vec[t].get<std::int64_t>();
      }
      entry.push_back(v);
    }
    s.twists.push_back(entry);
  }
  s.validate();
  return s;
}

}  // namespace bott
