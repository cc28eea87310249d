// bott: batch front end. Subcommands write files under --out and print one
// summary line. Exit status: 0 pass, 1 checked and false, 2 invalid input,
// 3 internal error, 4 resource limit.

#include "report.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  using namespace bott::cli;

  CLI::App app{"Toric maximal log Fano pairs and their snc degenerations"};
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig cfg;
  std::string out = "out";
  app.add_option("--out", out, "output directory")->envname("BOTT_OUT");
  app.add_option("--workers", cfg.workers, "worker threads")->envname("BOTT_WORKERS")->check(CLI::Range(1, 256));
  app.add_option("--seed", cfg.seed, "seed for randomized sanity oracles")->envname("BOTT_SEED");

  std::string spec_path;
  std::string boundary;
  auto* fan = app.add_subcommand("fan", "fan file and intersection table of a spec");
  fan->add_option("spec", spec_path, "spec file")->required();

  auto* check = app.add_subcommand("check", "log Fano certificate for a spec and boundary");
  check->add_option("spec", spec_path, "spec file")->required();
  check->add_option("--boundary", boundary, "ray labels, e.g. 2:1,1:1")->required()->envname("BOTT_BOUNDARY");

  auto* cls = app.add_subcommand("classify", "maximal log Fano pairs on generalized Bott towers");
  cls->add_option("--dim", cfg.dim, "dimension n")->required()->envname("BOTT_DIM")->check(CLI::Range(1, 8));
  cls->add_option("--bound", cfg.bound, "twist bound A")->required()->envname("BOTT_BOUND")->check(CLI::Range(0, 1000));

  auto* maxdeg = app.add_subcommand("maxdeg", "the model X^n with its d-semistability report");
  maxdeg->add_option("--dim", cfg.dim, "dimension n")->required()->envname("BOTT_DIM")->check(CLI::Range(1, 6));

  bool no_dss = false;
  std::size_t max_nodes = 20'000'000;
  auto* search = app.add_subcommand("search", "maximal d-semistable snc Fano models");
  search->add_option("--dim", cfg.dim, "dimension n")->required()->envname("BOTT_DIM")->check(CLI::Range(1, 4));
  search->add_option("--bound", cfg.bound, "twist bound A")->required()->envname("BOTT_BOUND")->check(CLI::Range(0, 100));
  search->add_flag("--no-dss", no_dss, "disable the d-semistability filter");
  search->add_option("--max-nodes", max_nodes, "search node limit")->envname("BOTT_MAX_NODES");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? pass : invalid_input;
  }
  cfg.out = out;

  try {
    Outcome o;
    if (*fan) o = cmd_fan(read_text(spec_path), cfg);
    else if (*check) o = cmd_check(read_text(spec_path), boundary, cfg);
    else if (*cls) o = cmd_classify(cfg);
    else if (*maxdeg) o = cmd_maxdeg(cfg);
    else o = cmd_search(cfg, !no_dss, max_nodes);
    std::cout << o.summary << '\n';
    return o.code;
  } catch (const bott::ResourceLimitExceeded& e) {
    std::cerr << "resource limit: " << e.what() << '\n';
    return resource_limit;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return invalid_input;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return internal_error;
  }
}
