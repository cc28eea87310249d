#include "report.hpp"

#include "bott/linalg.hpp"

#include <fstream>
#include <map>
#include <random>
#include <sstream>

namespace bott::cli {

namespace {

Json int_vector_json(const IntVector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i].value());
  return a;
}

Json int_matrix_json(const IntMatrix& m) {
  Json a = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) a.push_back(int_vector_json(m.row(r).transpose()));
  return a;
}

Json ray_labels(const std::vector<RayIndex>& rays, const std::vector<RayLabel>& labels) {
  Json a = Json::array();
  for (RayIndex r : rays) a.push_back(to_string(labels[static_cast<std::size_t>(r)]));
  return a;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

Json wall_json(const Wall& w, const std::vector<RayLabel>& labels) {
  Json j;
  j["rays"] = ray_labels(w.rays, labels);
  j["v"] = to_string(labels[static_cast<std::size_t>(w.v)]);
  j["v_prime"] = to_string(labels[static_cast<std::size_t>(w.v_prime)]);
  return j;
}

}  // namespace

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json spec_json(const BottTowerSpec& spec) { return Json::parse(spec_to_json(spec)); }

Json labels_json(const std::vector<RayLabel>& labels) {
  Json a = Json::array();
  for (const auto& l : labels) a.push_back(to_string(l));
  return a;
}

std::vector<RayLabel> parse_boundary(const std::string& text) {
  std::vector<RayLabel> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(parse_ray_label(item));
  }
  return out;
}

Json structure_json(const StructureReport& r, const std::vector<RayLabel>& labels) {
  Json j;
  j["ok"] = r.ok();
  j["log_fano"] = r.log_fano;
  j["maximal"] = r.maximal;
  j["dual_dimension"] = r.dual_dimension;
  j["dual_simplex"] = r.dual_simplex;
  j["rho"] = r.rho;
  j["gamma_components"] = r.gamma_components;
  j["complexity"] = r.complexity.str();
  j["tau"] = r.tau.str();
  j["min_extremal_length"] = r.min_extremal_length.value();
  j["lines_have_degree_one"] = r.lines_have_degree_one;
  j["mori_cone_generated"] = r.mori_cone_generated;
  j["pic_index"] = r.pic_index.value();
  j["nef_component"] = r.nef_component;
  Json cases = Json::array();
  for (const auto& c : r.bundle_cases) {
    Json cj;
    cj["line"] = c.line;
    cj["section"] = ray_labels(c.section, labels);
    cj["fibers"] = ray_labels(c.fibers, labels);
    cj["k"] = c.k;
    cj["rho_x"] = c.rho_x;
    cj["rho_omitted"] = c.rho_omitted;
    cj["rho_section"] = c.rho_section;
    cj["ok"] = c.ok;
    cases.push_back(cj);
  }
  j["bundle_cases"] = cases;
  j["strata_log_fano"] = r.strata_log_fano;
  if (r.witness) {
    Json w;
    w["spec"] = spec_json(r.witness->spec);
    w["map"] = int_matrix_json(r.witness->map);
    w["ray_labels"] = labels_json(r.witness->ray_labels);
    w["boundary"] = labels_json(r.witness->boundary);
    j["witness"] = w;
  } else {
    j["witness"] = nullptr;
  }
  j["bott_tower_iff"] = r.bott_tower_iff;
  j["failures"] = r.failures;
  return j;
}

Json entry_json(const ClassificationEntry& e) {
  TowerFan t = build_fan(e.spec);
  Json j;
  j["spec"] = spec_json(e.spec);
  j["boundary"] = labels_json(e.boundary);
  j["rho"] = e.rho;
  j["tau"] = e.tau.str();
  j["gamma_components"] = e.gamma_components;
  j["free_lines"] = e.free_lines;
  Json degrees = Json::array();
  for (const auto& line : e.line_degrees) {
    Json d = Json::array();
    for (const auto& x : line) d.push_back(x.value());
    degrees.push_back(d);
  }
  j["line_degrees"] = degrees;
  j["presentations"] = e.presentations;
  j["structure_report"] = structure_json(e.structure, t.labels);
  return j;
}

Json classification_json(int n, int bound, const std::vector<ClassificationEntry>& entries) {
  Json j;
  j["n"] = n;
  j["bound"] = bound;
  j["count"] = entries.size();
  std::map<int, int> by_rho;
  int passing = 0;
  for (const auto& e : entries) {
    ++by_rho[e.rho];
    passing += e.structure.ok() ? 1 : 0;
  }
  Json rho = Json::object();
  for (const auto& [r, c] : by_rho) rho[std::to_string(r)] = c;
  j["by_rho"] = rho;
  j["structure_ok"] = passing;
  Json list = Json::array();
  for (const auto& e : entries) list.push_back(entry_json(e));
  j["entries"] = list;
  return j;
}

std::string classification_table(const std::vector<ClassificationEntry>& entries) {
  std::ostringstream os;
  os << "#  rho  tau  gamma  dims       twists                         boundary          structure\n";
  int idx = 0;
  for (const auto& e : entries) {
    std::string dims;
    for (int d : e.spec.dims) dims += (dims.empty() ? "" : ",") + std::to_string(d);
    Json tw = spec_json(e.spec)["twists"];
    std::string boundary;
    for (const auto& l : e.boundary) boundary += (boundary.empty() ? "" : " ") + to_string(l);
    char line[256];
    std::snprintf(line, sizeof line, "%-2d %-4d %-4s %-6d %-10s %-30s %-17s %s\n", idx++, e.rho, e.tau.str().c_str(),
                  e.gamma_components, dims.c_str(), tw.dump().c_str(), boundary.c_str(), e.structure.ok() ? "ok" : "FAIL");
    os << line;
  }
  return os.str();
}

Json model_json(const SncModel& m) {
  Json j;
  j["dimension"] = m.dimension;
  Json comps = Json::array();
  for (std::size_t i = 0; i < m.components.size(); ++i) {
    const auto& c = m.components[i];
    Json cj;
    cj["index"] = i;
    cj["spec"] = spec_json(c.spec);
    cj["boundary"] = ray_labels(c.pair.boundary, c.labels);
    cj["incidence"] = c.incidence;
    comps.push_back(cj);
  }
  j["components"] = comps;
  Json gl = Json::array();
  for (const auto& g : m.gluings) {
    const auto& ci = m.components[static_cast<std::size_t>(g.i)];
    const auto& cj = m.components[static_cast<std::size_t>(g.j)];
    Json gj;
    gj["i"] = g.i;
    gj["j"] = g.j;
    gj["ray_i"] = to_string(ci.labels[static_cast<std::size_t>(g.ray_i)]);
    gj["ray_j"] = to_string(cj.labels[static_cast<std::size_t>(g.ray_j)]);
    gj["matrix"] = int_matrix_json(g.map.matrix);
    Json rm = Json::array();
    for (const auto& [x, y] : ray_correspondence(m, g.i, g.j)) {
      rm.push_back(Json::array({to_string(ci.labels[static_cast<std::size_t>(x)]),
                                to_string(cj.labels[static_cast<std::size_t>(y)])}));
    }
    gj["ray_map"] = rm;
    gj["choices"] = g.choices;
    gl.push_back(gj);
  }
  j["gluings"] = gl;
  j["cocycle"] = cocycle_holds(m);
  return j;
}

Json dss_json(const DssReport& r) {
  Json j;
  j["ok"] = r.ok();
  Json pairs = Json::array();
  for (const auto& p : r.pairs) {
    Json pj;
    pj["i"] = p.i;
    pj["j"] = p.j;
    pj["class"] = int_vector_json(p.total);
    pj["trivial"] = p.trivial;
    pj["consistent"] = p.consistent;
    pairs.push_back(pj);
  }
  j["pairs"] = pairs;
  return j;
}

Json search_json(int n, int bound, bool dss_filter, const SearchResult& r) {
  Json j;
  j["n"] = n;
  j["bound"] = bound;
  j["dss_filter"] = dss_filter;
  j["exhaustive"] = r.exhaustive;
  j["scope"] = r.exhaustive ? "exhaustive" : "within searched window";
  j["nodes"] = r.nodes;
  j["pruned_gluing"] = r.pruned_gluing;
  j["pruned_dss"] = r.pruned_dss;
  j["complete"] = r.complete;
  j["count"] = r.models.size();
  SncModel xn = build_xn(n);
  Json models = Json::array();
  for (const auto& m : r.models) {
    Json mj = model_json(m);
    mj["isomorphic_to_xn"] = models_isomorphic(m, xn);
    mj["dss"] = dss_json(dss_check(m));
    models.push_back(mj);
  }
  j["models"] = models;
  j["log"] = r.log;
  return j;
}

Outcome cmd_fan(const std::string& spec_text, const RunConfig& cfg) {
  BottTowerSpec spec = spec_from_json(spec_text);
  TowerFan t = build_fan(spec);
  std::vector<RayIndex> old_to_new;
  Fan canon = canonical_fan(t.fan, &old_to_new);
  std::vector<RayLabel> labels(t.labels.size());
  for (std::size_t r = 0; r < old_to_new.size(); ++r) labels[static_cast<std::size_t>(old_to_new[r])] = t.labels[r];

  IntersectionTable table = intersection_table(canon);
  Json j;
  j["spec"] = spec_json(spec);
  j["rank"] = canon.rank;
  j["rays"] = canon.ray_count();
  j["max_cones"] = canon.max_cones.size();
  j["labels"] = labels_json(labels);
  j["rho"] = picard_rank(canon);
  j["basis"] = ray_labels(table.basis, labels);
  Json ws = Json::array();
  for (const auto& w : table.walls) ws.push_back(wall_json(w, labels));
  j["walls"] = ws;
  j["entries"] = int_matrix_json(table.entries);
  Divisor k = canonical_divisor(canon);
  Json kw = Json::array();
  for (const auto& w : table.walls) kw.push_back(intersection_number(k, w).value());
  j["canonical_degrees"] = kw;

  write_file(cfg.out / "fan.txt", write_fan(canon));
  write_file(cfg.out / "intersection.json", dump(j));
  return {pass, "fan: " + std::to_string(canon.ray_count()) + " rays, " + std::to_string(canon.max_cones.size()) +
                    " maximal cones, rho " + std::to_string(picard_rank(canon))};
}

Outcome cmd_check(const std::string& spec_text, const std::string& boundary, const RunConfig& cfg) {
  BottTowerSpec spec = spec_from_json(spec_text);
  TowerFan t = build_fan(spec);
  std::vector<RayLabel> b = parse_boundary(boundary);
  for (const auto& l : b) (void)t.ray(l);
  LogFanoPair pair = make_log_pair(t, b);
  const auto ws = walls(t.fan);

  Json j;
  j["spec"] = spec_json(spec);
  j["boundary"] = labels_json(b);
  j["rays"] = t.fan.ray_count();
  j["rho"] = picard_rank(t.fan);
  const bool lf = is_log_fano(pair);
  j["log_fano"] = lf;
  Json failing = Json::array();
  for (int wi : non_positive_walls(ws, pair.l)) {
    Json fw = wall_json(ws[static_cast<std::size_t>(wi)], t.labels);
    fw["L.C"] = intersection_number(pair.l, ws[static_cast<std::size_t>(wi)]).value();
    failing.push_back(fw);
  }
  j["failing_walls"] = failing;
  j["maximal"] = is_maximal(pair);
  j["point_stratum"] = has_point_stratum(pair);
  DualComplexRecord dc = dual_complex(pair);
  j["dual_dimension"] = dc.dimension;
  j["dual_simplex"] = dc.is_simplex;

  bool ok = lf;
  if (lf) {
    NefValue nv = nef_value(t.fan, pair.l);
    j["tau"] = nv.tau.str();
    Json tw = Json::array();
    for (const auto& w : nv.trivial_walls) tw.push_back(wall_json(w, t.labels));
    j["tau_walls"] = tw;
    std::vector<RayIndex> gamma;
    for (RayIndex r = 0; r < t.fan.ray_count(); ++r) {
      if (!std::binary_search(pair.boundary.begin(), pair.boundary.end(), r)) gamma.push_back(r);
    }
    j["gamma"] = ray_labels(gamma, t.labels);
    Divisor g = complement(pair);
    j["complexity"] = complexity(t.fan, to_rational(pair.delta() + g)).str();
    if (has_point_stratum(pair) && is_maximal(pair)) {
      Json lines = Json::array();
      for (const auto& l : stratum_lines(pair)) {
        Json lj;
        lj["omitted"] = to_string(t.labels[static_cast<std::size_t>(pair.boundary[static_cast<std::size_t>(l.omitted)])]);
        Json d = Json::array();
        for (const auto& x : l.degrees) d.push_back(x.value());
        lj["degrees"] = d;
        lj["L.l"] = l.l_degree.value();
        lj["free"] = l.free;
        lines.push_back(lj);
      }
      j["lines"] = lines;
      StructureReport sr = verify_structure(pair);
      j["structure_report"] = structure_json(sr, t.labels);
      ok = sr.ok();
    }
  }

  std::mt19937_64 rng(cfg.seed);
  std::uniform_int_distribution<int> coord(-5, 5);
  bool invariant = true;
  const int trials = 20;
  for (int trial = 0; trial < trials; ++trial) {
    IntVector m(t.fan.rank);
    for (Eigen::Index i = 0; i < m.size(); ++i) m[i] = coord(rng);
    Divisor shifted = pair.l + principal_divisor(t.fan, m);
    for (const auto& w : ws) invariant = invariant && intersection_number(shifted, w) == intersection_number(pair.l, w);
  }
  Json sanity;
  sanity["seed"] = cfg.seed;
  sanity["positivity_oracle_agrees"] = positivity_oracle(t.fan, pair.l) == positivity(ws, pair.l);
  sanity["class_invariance_trials"] = trials;
  sanity["class_invariance_ok"] = invariant;
  j["sanity"] = sanity;
  if (!sanity["positivity_oracle_agrees"].get<bool>() || !invariant) throw std::logic_error("sanity oracle disagreement");

  write_file(cfg.out / "certificate.json", dump(j));
  std::string summary = std::string("check: ") + (lf ? "log Fano" : "not log Fano");
  if (j.contains("tau")) summary += ", tau " + j["tau"].get<std::string>();
  if (j.contains("structure_report")) summary += std::string(", structure ") + (ok ? "ok" : "FAILED");
  if (!failing.empty()) summary += ", " + std::to_string(failing.size()) + " failing walls";
  return {ok ? pass : checked_false, summary};
}

Outcome cmd_classify(const RunConfig& cfg) {
  ClassifyOptions opts;
  opts.workers = cfg.workers;
  auto entries = classify(cfg.dim, cfg.bound, opts);
  Json j = classification_json(cfg.dim, cfg.bound, entries);
  write_file(cfg.out / "classification.json", dump(j));
  write_file(cfg.out / "classification.txt", classification_table(entries));
  const int passing = j["structure_ok"].get<int>();
  const bool ok = passing == static_cast<int>(entries.size());
  return {ok ? pass : checked_false, "classify: " + std::to_string(entries.size()) + " entries, " +
                                         std::to_string(passing) + " pass the structure check"};
}

Outcome cmd_maxdeg(const RunConfig& cfg) {
  SncModel m = build_xn(cfg.dim);
  DssReport d = dss_check(m, cfg.workers);
  SncFanoReport f = snc_fano_check(m);
  Json comps = Json::array();
  bool ok = d.ok() && f.fano && f.maximal && cocycle_holds(m);
  for (std::size_t i = 0; i < m.components.size(); ++i) {
    const auto& c = m.components[i];
    Json cj;
    cj["index"] = i;
    cj["log_fano"] = f.component_log_fano[i];
    const bool fano = positivity(c.pair.fan, Divisor{IntVector(-canonical_divisor(c.pair.fan).coeffs)}) == Positivity::ample;
    cj["fano"] = fano;
    cj["rho"] = picard_rank(c.pair.fan);
    StructureReport sr = verify_structure(c.pair);
    cj["structure_report"] = structure_json(sr, c.labels);
    ok = ok && fano && sr.ok();
    comps.push_back(cj);
  }
  Json summary;
  summary["fano"] = f.fano;
  summary["maximal"] = f.maximal;
  summary["dual_dimension"] = f.dual_dimension;
  summary["components"] = comps;

  write_file(cfg.out / "model.json", dump(model_json(m)));
  write_file(cfg.out / "dss.json", dump(dss_json(d)));
  write_file(cfg.out / "components.json", dump(summary));
  std::string line = "maxdeg: " + std::to_string(m.components.size()) + " components, " +
                     std::to_string(d.pairs.size()) + " double intersections, dss " + (d.ok() ? "pass" : "FAIL");
  for (const auto& p : d.pairs) {
    if (!p.trivial || !p.consistent) {
      line += "; counterexample pair (" + std::to_string(p.i) + "," + std::to_string(p.j) + ")";
      break;
    }
  }
  return {ok ? pass : checked_false, line};
}

Outcome cmd_search(const RunConfig& cfg, bool dss_filter, std::size_t max_nodes) {
  SearchOptions opts;
  opts.dss_filter = dss_filter;
  opts.workers = cfg.workers;
  opts.max_nodes = max_nodes;
  SearchResult r = search_maximal_dss(cfg.dim, cfg.bound, opts);
  Json j = search_json(cfg.dim, cfg.bound, dss_filter, r);
  write_file(cfg.out / "search.json", dump(j));
  bool unique = r.models.size() == 1 && j["models"][0]["isomorphic_to_xn"].get<bool>();
  std::string line = "search: " + std::to_string(r.models.size()) + " models (" + j["scope"].get<std::string>() + ")";
  if (dss_filter) return {unique ? pass : checked_false, line};
  return {pass, line};
}

}  // namespace bott::cli
