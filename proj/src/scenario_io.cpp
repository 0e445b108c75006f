#include "sosarch/scenario_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>
#include <vector>

#include <fmt/format.h>
#include <json.hpp>

#include "sosarch/error.hpp"

namespace sosarch {
namespace {

using nlohmann::json;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(fmt::format("cannot open {}", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Attributes parse_attributes(const json& j) {
  return {j.at("cost").get<double>(), j.at("duration").get<double>(), j.at("performance").get<double>()};
}

std::size_t parse_id(const json& j) {
  const auto v = j.get<long long>();
  if (v < 0) throw ParseError(fmt::format("negative id {}", v));
  return static_cast<std::size_t>(v);
}

json attributes_json(std::size_t id, const Attributes& a) {
  return json{{"id", id}, {"cost", a.cost}, {"duration", a.duration}, {"performance", a.performance}};
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  for (char c : line) {
    if (c == ',') {
      out.push_back(field);
      field.clear();
    } else if (c != '\r') {
      field.push_back(c);
    }
  }
  out.push_back(field);
  for (auto& f : out) {
    const auto b = f.find_first_not_of(" \t");
    const auto e = f.find_last_not_of(" \t");
    f = b == std::string::npos ? std::string{} : f.substr(b, e - b + 1);
  }
  return out;
}

double parse_number(const std::string& s, std::size_t line_no) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || ptr != end || s.empty())
    throw ParseError(fmt::format("candidate table line {}: bad number '{}'", line_no, s));
  return v;
}

}  // namespace

Scenario parse_scenario(std::string_view json_text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(fmt::format("scenario document: {}", e.what()));
  }

  Scenario s;
  try {
    s.name = doc.at("name").get<std::string>();
    s.description = doc.value("description", std::string{});
    s.expected_duration = doc.at("expected_duration").get<double>();
    for (const auto& js : doc.at("systems")) s.systems.push_back({parse_id(js.at("id")), js.value("label", "")});
    for (const auto& ji : doc.value("interfaces", json::array())) {
      const auto& ep = ji.at("endpoints");
      if (!ep.is_array() || ep.size() != 2) throw ParseError("interface endpoints must be a pair");
      s.interfaces.push_back({parse_id(ji.at("id")), parse_id(ep[0]), parse_id(ep[1])});
    }
    for (const auto& jc : doc.at("capabilities")) {
      Capability c;
      c.id = jc.at("id").is_string() ? jc.at("id").get<std::string>() : jc.at("id").dump();
      c.budget = jc.at("budget").get<double>();
      c.deadline = jc.at("deadline").get<double>();
      c.performance_floor = jc.at("performance_floor").get<double>();
      for (const auto& jsys : jc.value("systems", json::array())) {
        if (!c.systems.emplace(parse_id(jsys.at("id")), parse_attributes(jsys)).second)
          throw ParseError(fmt::format("capability {}: duplicate system candidate", c.id));
      }
      for (const auto& jif : jc.value("interfaces", json::array())) {
        if (!c.interfaces.emplace(parse_id(jif.at("id")), parse_attributes(jif)).second)
          throw ParseError(fmt::format("capability {}: duplicate interface candidate", c.id));
      }
      s.capabilities.push_back(std::move(c));
    }
  } catch (const json::exception& e) {
    throw ParseError(fmt::format("scenario document: {}", e.what()));
  }

  if (doc.contains("candidates_table")) {
    const auto rel = doc.at("candidates_table").get<std::string>();
    const auto path = base_dir / rel;
    std::ifstream in(path);
    if (!in) throw ParseError(fmt::format("cannot open candidate table {}", path.string()));
    merge_candidate_table(s, in);
  }
  return s;
}

void merge_candidate_table(Scenario& s, std::istream& csv) {
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(csv, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto fields = split_csv_line(line);
    if (!header_seen) {
      const std::vector<std::string> expected = {"capability_id", "kind",     "target_id",
                                                 "cost",          "duration", "performance"};
      if (fields != expected)
        throw ParseError(fmt::format("candidate table line {}: expected header {}", line_no,
                                     fmt::join(expected, ",")));
      header_seen = true;
      continue;
    }
    if (fields.size() != 6)
      throw ParseError(fmt::format("candidate table line {}: expected 6 fields, got {}", line_no, fields.size()));

    Capability* cap = nullptr;
    for (auto& c : s.capabilities)
      if (c.id == fields[0]) cap = &c;
    if (cap == nullptr)
      throw ParseError(fmt::format("candidate table line {}: unknown capability '{}'", line_no, fields[0]));

    const double target = parse_number(fields[2], line_no);
    if (target < 1 || target != static_cast<double>(static_cast<std::size_t>(target)))
      throw ParseError(fmt::format("candidate table line {}: bad target id '{}'", line_no, fields[2]));
    const auto id = static_cast<std::size_t>(target);
    const Attributes a{parse_number(fields[3], line_no), parse_number(fields[4], line_no),
                       parse_number(fields[5], line_no)};

    std::map<std::size_t, Attributes>* dest = nullptr;
    if (fields[1] == "system")
      dest = &cap->systems;
    else if (fields[1] == "interface")
      dest = &cap->interfaces;
    else
      throw ParseError(fmt::format("candidate table line {}: kind must be system or interface", line_no));
    if (!dest->emplace(id, a).second)
      throw ParseError(fmt::format("candidate table line {}: duplicate {} candidate {} for capability {}",
                                   line_no, fields[1], id, cap->id));
  }
  if (!header_seen) throw ParseError("candidate table: missing header");
}

Scenario load_scenario(const std::filesystem::path& path) {
  Scenario s = parse_scenario(read_file(path), path.parent_path());
  require_valid(s);
  return s;
}

std::string scenario_to_json(const Scenario& s, bool include_candidates) {
  json doc;
  doc["name"] = s.name;
  if (!s.description.empty()) doc["description"] = s.description;
  doc["expected_duration"] = s.expected_duration;
  doc["systems"] = json::array();
  for (const auto& sys : s.systems) doc["systems"].push_back({{"id", sys.id}, {"label", sys.label}});
  doc["interfaces"] = json::array();
  for (const auto& f : s.interfaces)
    doc["interfaces"].push_back({{"id", f.id}, {"endpoints", {f.first, f.second}}});
  doc["capabilities"] = json::array();
  for (const auto& c : s.capabilities) {
    json jc{{"id", c.id},
            {"budget", c.budget},
            {"deadline", c.deadline},
            {"performance_floor", c.performance_floor}};
    if (include_candidates) {
      jc["systems"] = json::array();
      for (const auto& [j, a] : c.systems) jc["systems"].push_back(attributes_json(j, a));
      jc["interfaces"] = json::array();
      for (const auto& [k, a] : c.interfaces) jc["interfaces"].push_back(attributes_json(k, a));
    }
    doc["capabilities"].push_back(std::move(jc));
  }
  return doc.dump(2) + "\n";
}

void write_candidate_table(const Scenario& s, std::ostream& csv) {
  csv << "capability_id,kind,target_id,cost,duration,performance\n";
  for (const auto& c : s.capabilities) {
    for (const auto& [j, a] : c.systems)
      csv << fmt::format("{},system,{},{},{},{}\n", c.id, j, a.cost, a.duration, a.performance);
    for (const auto& [k, a] : c.interfaces)
      csv << fmt::format("{},interface,{},{},{},{}\n", c.id, k, a.cost, a.duration, a.performance);
  }
}

void save_scenario(const Scenario& s, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(fmt::format("cannot write {}", path.string()));
  out << scenario_to_json(s);
}

void save_scenario_split(const Scenario& s, const std::filesystem::path& json_path,
                         const std::filesystem::path& csv_path) {
  auto doc = json::parse(scenario_to_json(s, false));
  doc["candidates_table"] = std::filesystem::relative(csv_path, json_path.parent_path()).generic_string();
  {
    std::ofstream out(json_path, std::ios::binary);
    if (!out) throw Error(fmt::format("cannot write {}", json_path.string()));
    out << doc.dump(2) << "\n";
  }
  std::ofstream csv(csv_path, std::ios::binary);
  if (!csv) throw Error(fmt::format("cannot write {}", csv_path.string()));
  write_candidate_table(s, csv);
}

}  // namespace sosarch
