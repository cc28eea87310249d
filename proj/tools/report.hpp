#pragma once

// JSON and text renderings shared by the bott command and the tests, plus the
// subcommand bodies. Every output is a pure function of its inputs.

#include "bott/snc.hpp"

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace bott::cli {

using Json = nlohmann::ordered_json;

enum ExitCode : int { pass = 0, checked_false = 1, invalid_input = 2, internal_error = 3, resource_limit = 4 };

Json spec_json(const BottTowerSpec& spec);
Json labels_json(const std::vector<RayLabel>& labels);
Json structure_json(const StructureReport& r, const std::vector<RayLabel>& labels);
Json entry_json(const ClassificationEntry& e);
Json classification_json(int n, int bound, const std::vector<ClassificationEntry>& entries);
std::string classification_table(const std::vector<ClassificationEntry>& entries);
Json model_json(const SncModel& m);
Json dss_json(const DssReport& r);
Json search_json(int n, int bound, bool dss_filter, const SearchResult& r);

// Two-space indented dump with a trailing newline.
std::string dump(const Json& j);

struct Outcome {
  int code = pass;
  std::string summary;  // one line for standard output
};

struct RunConfig {
  std::filesystem::path out = "out";
  int dim = 2;
  int bound = 1;
  int workers = 1;
  std::uint64_t seed = 1;
};

// Files go under cfg.out; exceptions propagate to the caller.
Outcome cmd_fan(const std::string& spec_text, const RunConfig& cfg);
Outcome cmd_check(const std::string& spec_text, const std::string& boundary, const RunConfig& cfg);
Outcome cmd_classify(const RunConfig& cfg);
Outcome cmd_maxdeg(const RunConfig& cfg);
Outcome cmd_search(const RunConfig& cfg, bool dss_filter, std::size_t max_nodes);

// "2:1,1:1" -> labels; throws std::invalid_argument.
std::vector<RayLabel> parse_boundary(const std::string& text);

}  // namespace bott::cli
