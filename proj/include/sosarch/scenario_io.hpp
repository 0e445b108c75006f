#pragma once

// Scenario document (JSON):
//
//   {
//     "name": "tiny3",
//     "description": "...",                      optional
//     "expected_duration": 5,
//     "systems":    [{"id": 1, "label": "S1"}, ...],
//     "interfaces": [{"id": 1, "endpoints": [1, 3]}, ...],
//     "capabilities": [
//       {"id": "A", "budget": 6, "deadline": 3, "performance_floor": 0.5,
//        "systems":    [{"id": 1, "cost": 5, "duration": 2, "performance": 0.8}],
//        "interfaces": [{"id": 1, "cost": 1, "duration": 1, "performance": 0.9}]}
//     ],
//     "candidates_table": "tiny3_candidates.csv"  optional, relative to the document
//   }
//
// Candidate table (CSV, merged into the document's capabilities):
//
//   capability_id,kind,target_id,cost,duration,performance
//   A,system,1,5,2,0.8
//   B,interface,1,1,1,0.9

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "sosarch/scenario.hpp"

namespace sosarch {

/// Reads, merges the optional candidate table and validates. Throws
/// ParseError for malformed input and ValidationError for invariant breaks.
Scenario load_scenario(const std::filesystem::path& path);

/// Parses a JSON document without validating. Relative candidate-table paths
/// resolve against base_dir.
Scenario parse_scenario(std::string_view json_text, const std::filesystem::path& base_dir = {});

/// Adds candidate rows to the matching capabilities. A row duplicating an
/// existing candidate is a ParseError.
void merge_candidate_table(Scenario& s, std::istream& csv);

std::string scenario_to_json(const Scenario& s, bool include_candidates = true);
void write_candidate_table(const Scenario& s, std::ostream& csv);

/// Single-file form with candidates inline.
void save_scenario(const Scenario& s, const std::filesystem::path& path);

/// Document without candidates plus a candidate table next to it.
void save_scenario_split(const Scenario& s, const std::filesystem::path& json_path,
                         const std::filesystem::path& csv_path);

}  // namespace sosarch
