#include "crashdet/scenario/manifest.hpp"

#include <fstream>

#include <json.hpp>

#include "crashdet/core/errors.hpp"

namespace crashdet::scenario {

using nlohmann::json;

void write_manifest(const std::vector<ScenarioSpec>& specs, const std::filesystem::path& path,
                    const std::string& config_hash) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open manifest for writing: " + path.string());
  if (!config_hash.empty()) {
    out << json{{"manifest_header", true}, {"config_hash", config_hash}}.dump() << "\n";
  }
  for (const auto& s : specs) {
    json j{{"id", s.id},
           {"set", set_name(s.set)},
           {"seed", s.seed},
           {"horizon", s.horizon},
           {"params", s.params}};
    if (!s.iso_code.empty()) j["iso_code"] = s.iso_code;
    out << j.dump() << "\n";
  }
}

Manifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open manifest: " + path.string());
  Manifest m;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError("manifest " + path.string() + ":" + std::to_string(lineno) + ": " +
                       e.what());
    }
    if (j.value("manifest_header", false)) {
      m.config_hash = j.value("config_hash", "");
      continue;
    }
    ScenarioSpec s;
    try {
      s.id = j.at("id").get<std::string>();
      const auto set = parse_set(j.at("set").get<std::string>());
      if (!set) throw ParseError("unknown set id");
      s.set = *set;
      s.seed = j.at("seed").get<std::uint64_t>();
      s.horizon = j.at("horizon").get<double>();
      s.params = j.at("params").get<std::map<std::string, double>>();
      s.iso_code = j.value("iso_code", "");
    } catch (const json::exception& e) {
      throw ParseError("manifest " + path.string() + ":" + std::to_string(lineno) + ": " +
                       e.what());
    }
    m.specs.push_back(std::move(s));
  }
  return m;
}

}  // namespace crashdet::scenario
