// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "report.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <sys/wait.h>

using namespace bott;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && pass) detail = "failed: " + what;
    pass = pass && cond;
  }
};

LogFanoPair hirzebruch_pair(int a) {
  TowerFan t = build_fan(hirzebruch_spec(a));
  return make_log_pair(t, {{2, 1}, {1, 1}});
}

LogFanoPair p2_pair() { return make_log_pair(projective_space_fan(2), {0, 1}); }

LogFanoPair blowup_pair(int n) {
  TowerFan t = build_fan(blowup_point_spec(n));
  return make_log_pair(t, blowup_point_boundary(n));
}

Verdict criterion_1() {
  Verdict v;
  auto start = std::chrono::steady_clock::now();
  auto entries = classify(2, 10);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  v.require(entries.size() == 12, "expected 12 entries, got " + std::to_string(entries.size()));
  std::vector<LogFanoPair> expected{p2_pair()};
  for (int a = 0; a <= 10; ++a) expected.push_back(hirzebruch_pair(a));
  std::vector<int> hits(entries.size(), 0);
  for (const auto& p : expected) {
    int matches = 0;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      LogFanoPair q = make_log_pair(build_fan(entries[i].spec), entries[i].boundary);
      if (pair_isomorphic(p, q)) {
        ++matches;
        ++hits[i];
      }
    }
    v.require(matches == 1, "an expected pair matched " + std::to_string(matches) + " entries");
  }
  for (int h : hits) v.require(h == 1, "an entry is not one of the expected pairs");
  v.require(secs < 5.0, "runtime " + std::to_string(secs) + " s");
  if (v.pass) v.detail = "12 entries: (P^2, two lines) and (F_a, s+f) for a = 0..10";
  return v;
}

Verdict criterion_2() {
  Verdict v;
  LogFanoPair p = p2_pair();
  v.require(nef_value(p.fan, p.l).tau == Rational(3), "tau(P^2) != 3");
  for (int a = 0; a <= 10; ++a) {
    LogFanoPair f = hirzebruch_pair(a);
    v.require(nef_value(f.fan, f.l).tau == Rational(2), "tau(F_" + std::to_string(a) + ") != 2");
  }
  for (int n = 2; n <= 6; ++n) {
    LogFanoPair b = blowup_pair(n);
    v.require(nef_value(b.fan, b.l).tau == Rational(std::max(2, n - 1)), "blow-up tau at n=" + std::to_string(n));
  }
  if (v.pass) v.detail = "tau = 3, 2 (a = 0..10), max(2, n-1) (n = 2..6)";
  return v;
}

Verdict criterion_3() {
  Verdict v;
  for (int n = 2; n <= 6; ++n) {
    TowerFan t = build_fan(blowup_point_spec(n));
    LogFanoPair b = blowup_pair(n);
    Divisor k = canonical_divisor(t.fan);
    RayIndex e = t.ray(2, 1);
    int fibers = 0, sections = 0;
    for (const auto& w : walls(t.fan)) {
      bool fiber = true;
      for (auto r : w.rays) fiber = fiber && t.labels[static_cast<std::size_t>(r)].stage == 1;
      if (fiber) {
        ++fibers;
        v.require(intersection_number(k, w) == -2, "K.f at n=" + std::to_string(n));
        v.require(intersection_number(b.l, w) == 1, "L.f at n=" + std::to_string(n));
      }
      if (std::binary_search(w.rays.begin(), w.rays.end(), e)) {
        ++sections;
        v.require(intersection_number(k, w) == -(n - 1), "K.s at n=" + std::to_string(n));
        v.require(intersection_number(b.l, w) == 1, "L.s at n=" + std::to_string(n));
      }
    }
    v.require(fibers > 0 && sections > 0, "missing fiber or section walls at n=" + std::to_string(n));
  }
  if (v.pass) v.detail = "K.f = -2, K.s = -(n-1), L.f = L.s = 1 for n = 2..6";
  return v;
}

std::vector<std::vector<ClassificationEntry>> criterion_4_runs;

Verdict criterion_4() {
  Verdict v;
  auto start = std::chrono::steady_clock::now();
  int total = 0;
  for (auto [n, a] : std::vector<std::pair<int, int>>{{2, 10}, {3, 2}, {4, 1}}) {
    ClassifyOptions opts;
    opts.workers = 4;
    auto entries = classify(n, a, opts);
    for (const auto& e : entries) {
      const auto& s = e.structure;
      std::string what = "(" + std::to_string(n) + "," + std::to_string(a) + ") entry ";
      v.require(s.ok(), what + (s.failures.empty() ? "" : s.failures.front()));
      v.require(s.dual_simplex && s.gamma_components == s.rho && s.complexity == Rational(0), what + "simplex/Gamma/complexity");
      v.require(s.mori_cone_generated && s.pic_index == 1, what + "Mori cone/Pic");
      v.require(!e.free_lines.empty() && !s.bundle_cases.empty(), what + "free line");
      v.require(s.witness.has_value() && s.witness->spec.stages() == s.rho, what + "Bott witness");
    }
    total += static_cast<int>(entries.size());
    criterion_4_runs.push_back(std::move(entries));
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  v.require(secs < 600.0, "runtime " + std::to_string(secs) + " s");
  if (v.pass) v.detail = std::to_string(total) + " entries over (2,10), (3,2), (4,1), all items pass";
  return v;
}

Verdict criterion_5() {
  Verdict v;
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> coord(-6, 6);
  int fans = 0;
  for (const auto& run : criterion_4_runs) {
    for (const auto& e : run) {
      ++fans;
      TowerFan t = build_fan(e.spec);
      LogFanoPair p = make_log_pair(t, e.boundary);
      const auto ws = walls(t.fan);
      std::vector<Divisor> ds{p.l, canonical_divisor(t.fan), Divisor{IntVector(-canonical_divisor(t.fan).coeffs)}};
      for (int extra = 0; extra < 3; ++extra) {
        Divisor d = zero_divisor(t.fan);
        for (Eigen::Index r = 0; r < d.coeffs.size(); ++r) d.coeffs[r] = coord(rng) / 3;
        ds.push_back(d);
      }
      for (const auto& d : ds) v.require(positivity(ws, d) == positivity_oracle(t.fan, d), "positivity oracle disagrees");
      for (int trial = 0; trial < 100; ++trial) {
        IntVector m(t.fan.rank);
        for (Eigen::Index i = 0; i < m.size(); ++i) m[i] = coord(rng);
        Divisor moved = p.l + principal_divisor(t.fan, m);
        for (const auto& w : ws) v.require(intersection_number(moved, w) == intersection_number(p.l, w), "M-relation changed L.C");
      }
    }
  }
  v.require(fans > 0, "criterion 4 produced no fans");
  if (v.pass) v.detail = std::to_string(fans) + " fans, 6 divisors each against the oracle, 100 characters each";
  return v;
}

Verdict criterion_6() {
  Verdict v;
  for (int n = 2; n <= 4; ++n) {
    v.require(fan_isomorphic(blowup_flag_fan(n), build_fan(component_spec(n).spec).fan).has_value(),
              "flag blow-up not isomorphic at n=" + std::to_string(n));
  }
  for (int n = 1; n <= 4; ++n) {
    SncModel m = build_xn(n);
    for (const auto& c : m.components) {
      Divisor anti{IntVector(-canonical_divisor(c.pair.fan).coeffs)};
      v.require(positivity(c.pair.fan, anti) == Positivity::ample, "component not Fano at n=" + std::to_string(n));
      v.require(picard_rank(c.pair.fan) == n, "component rho != n at n=" + std::to_string(n));
    }
  }
  if (v.pass) v.detail = "flag fans match for n = 2..4; components Fano with rho = n for n = 1..4";
  return v;
}

Verdict criterion_7() {
  Verdict v;
  for (int n = 1; n <= 3; ++n) {
    SncModel m = build_xn(n);
    DssReport r = dss_check(m, 2);
    v.require(r.pairs.size() == static_cast<std::size_t>(n * (n + 1) / 2), "wrong pair count at n=" + std::to_string(n));
    v.require(r.ok(), "dss fails at n=" + std::to_string(n));
  }
  DssReport bad = dss_check(f0_cycle_model());
  v.require(!bad.ok(), "F_0 cycle passes");
  for (const auto& p : bad.pairs) v.require(p.total.size() == 1 && p.total[0] == 1, "F_0 cycle class != 1");
  if (v.pass) v.detail = "1, 3, 6 pairs trivial for n = 1, 2, 3; F_0 cycle gives class 1 on every pair";
  return v;
}

Verdict criterion_8() {
  Verdict v;
  auto start = std::chrono::steady_clock::now();
  SearchResult r = search_maximal_dss(2, 3);
  v.require(r.exhaustive, "search not exhaustive");
  v.require(r.models.size() == 1, std::to_string(r.models.size()) + " models with the dss filter");
  if (r.models.size() == 1) v.require(models_isomorphic(r.models[0], build_xn(2)), "survivor is not X^2");
  SearchOptions loose;
  loose.dss_filter = false;
  SearchResult all = search_maximal_dss(2, 3, loose);
  v.require(all.models.size() > 1, "filter disabled leaves " + std::to_string(all.models.size()) + " models");
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  v.require(secs < 1800.0, "runtime " + std::to_string(secs) + " s");
  if (v.pass) {
    v.detail = "1 model, isomorphic to X^2; " + std::to_string(all.models.size()) + " without the dss filter";
  }
  return v;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Verdict criterion_9() {
  Verdict v;
  const fs::path root = fs::path(BOTT_ACCEPTANCE_DIR) / "determinism";
  const std::string specs = BOTT_SPEC_DIR;
  fs::remove_all(root);
  const std::vector<std::pair<std::string, std::string>> commands{
      {"fan_f1", "fan " + specs + "/hirzebruch_1.json"},
      {"fan_p3", "fan " + specs + "/p3.json"},
      {"check_f1", "check " + specs + "/hirzebruch_1.json --boundary 2:1,1:1"},
      {"check_blowup4", "check " + specs + "/blowup_point_4.json --boundary 2:1,1:1,1:2,1:3"},
      {"check_f2_bad", "check " + specs + "/hirzebruch_2.json --boundary 2:0,1:1"},
      {"classify_2_10", "classify --dim 2 --bound 10"},
      {"classify_3_2", "classify --dim 3 --bound 2 --workers 4"},
      {"classify_4_1", "classify --dim 4 --bound 1 --workers 4"},
      {"maxdeg_1", "maxdeg --dim 1"},
      {"maxdeg_2", "maxdeg --dim 2"},
      {"maxdeg_3", "maxdeg --dim 3 --workers 3"},
      {"search_2_3", "search --dim 2 --bound 3 --workers 4"},
      {"search_2_3_nodss", "search --dim 2 --bound 3 --no-dss --workers 4"},
  };
  int files = 0;
  for (const auto& [name, args] : commands) {
    for (int run : {0, 1}) {
      fs::path out = root / ("run" + std::to_string(run)) / name;
      std::string cmd = std::string("\"") + BOTT_CLI + "\" " + args + " --seed 7 --out \"" + out.string() + "\" > \"" +
                        (out.string() + ".stdout") + "\" 2>&1";
      fs::create_directories(out.parent_path());
      int rc = std::system(cmd.c_str());
      v.require(rc != -1 && WEXITSTATUS(rc) <= 1, name + " exited with " + std::to_string(WEXITSTATUS(rc)));
    }
    fs::path a = root / "run0" / name, b = root / "run1" / name;
    if (!fs::exists(a)) {
      v.require(false, name + " wrote nothing");
      continue;
    }
    for (const auto& entry : fs::directory_iterator(a)) {
      fs::path other = b / entry.path().filename();
      v.require(fs::exists(other) && slurp(entry.path()) == slurp(other), name + "/" + entry.path().filename().string() + " differs");
      ++files;
    }
    v.require(slurp(a.string() + ".stdout") == slurp(b.string() + ".stdout"), name + " summary differs");
  }
  if (v.pass) v.detail = std::to_string(commands.size()) + " commands, " + std::to_string(files) + " files byte-identical";
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
      {"dimension-2 classification", criterion_1}, {"nef values", criterion_2},
      {"blow-up intersection numbers", criterion_3}, {"structure bundle", criterion_4},
      {"oracle equivalence", criterion_5}, {"X^n construction", criterion_6},
      {"d-semistability", criterion_7}, {"desk-scale uniqueness", criterion_8},
      {"determinism", criterion_9},
  };
  int failed = 0;
  int idx = 1;
  for (const auto& [name, run] : criteria) {
    auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = run();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] %d %s: %s (%.2f s)\n", v.pass ? "PASS" : "FAIL", idx++, name, v.detail.c_str(), secs);
    failed += v.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria pass\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
