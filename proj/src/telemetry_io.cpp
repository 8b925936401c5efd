#include "crashdet/telemetry/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>

#include "crashdet/core/errors.hpp"

namespace crashdet::telemetry {

namespace {

constexpr int kColumns = 1 + kNumChannels + 3;  // time, channels, label, scenario_id, set_id

std::string header_line() {
  std::string h = "time";
  for (const auto& c : channel_table()) {
    h += ',';
    h += c.name;
  }
  h += ",label,scenario_id,set_id";
  return h;
}

void append_number(std::string& out, double v) {
  char buf[32];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  out.append(buf, p);
}

double parse_number(std::string_view s, const std::filesystem::path& file, std::size_t lineno) {
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw ParseError(file.string() + ":" + std::to_string(lineno) + ": bad numeric field '" +
                     std::string(s) + "'");
  }
  return v;
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

}  // namespace

void write_scenario_csv(const ScenarioFrames& f, const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw ValidationError("cannot open for writing: " + file.string());
  out << header_line() << "\n";
  std::string line;
  for (Eigen::Index i = 0; i < f.time.size(); ++i) {
    line.clear();
    append_number(line, f.time[i]);
    for (int c = 0; c < kNumChannels; ++c) {
      line += ',';
      append_number(line, f.features(i, c));
    }
    line += ',';
    line += std::to_string(f.labels[i]);
    line += ',';
    line += f.scenario_id;
    line += ',';
    line += f.set_id;
    out << line << "\n";
  }
}

ScenarioFrames read_scenario_csv(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ParseError("cannot open dataset file: " + file.string());

  std::string line;
  if (!std::getline(in, line)) throw ParseError(file.string() + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  {
    const auto cols = split_csv(line);
    if (cols.empty() || cols[0] != "time") {
      throw ParseError(file.string() + ":1: header must start with 'time'");
    }
    // verify every canonical channel is present, in order
    for (int c = 0; c < kNumChannels; ++c) {
      const char* want = channel_table()[static_cast<std::size_t>(c)].name;
      if (static_cast<std::size_t>(c + 1) >= cols.size() || cols[static_cast<std::size_t>(c + 1)] != want) {
        throw ParseError(file.string() + ":1: missing or misplaced channel '" + want + "'");
      }
    }
    if (cols.size() != kColumns) {
      throw ParseError(file.string() + ":1: expected " + std::to_string(kColumns) +
                       " columns, found " + std::to_string(cols.size()));
    }
  }

  std::vector<double> time;
  std::vector<std::array<double, kNumChannels>> rows;
  std::vector<int> labels;
  std::string scenario_id, set_id;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cols = split_csv(line);
    if (cols.size() != kColumns) {
      throw ParseError(file.string() + ":" + std::to_string(lineno) + ": expected " +
                       std::to_string(kColumns) + " columns, found " + std::to_string(cols.size()));
    }
    const double t = parse_number(cols[0], file, lineno);
    if (!time.empty() && t <= time.back()) {
      throw ParseError(file.string() + ":" + std::to_string(lineno) +
                       ": time is not strictly increasing");
    }
    time.push_back(t);
    std::array<double, kNumChannels> row{};
    for (int c = 0; c < kNumChannels; ++c) {
      row[static_cast<std::size_t>(c)] = parse_number(cols[static_cast<std::size_t>(c) + 1], file, lineno);
    }
    rows.push_back(row);
    const double lv = parse_number(cols[kNumChannels + 1], file, lineno);
    if (lv != 0.0 && lv != 1.0) {
      throw ParseError(file.string() + ":" + std::to_string(lineno) + ": label must be 0 or 1");
    }
    labels.push_back(static_cast<int>(lv));
    const std::string sid(cols[kNumChannels + 2]);
    const std::string set(cols[kNumChannels + 3]);
    if (scenario_id.empty()) {
      scenario_id = sid;
      set_id = set;
    } else if (sid != scenario_id) {
      throw ParseError(file.string() + ":" + std::to_string(lineno) +
                       ": mixed scenario ids in one file");
    }
  }

  ScenarioFrames f;
  f.scenario_id = scenario_id;
  f.set_id = set_id;
  const auto n = static_cast<Eigen::Index>(time.size());
  f.time.resize(n);
  f.features.resize(n, kNumChannels);
  f.labels.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    f.time[i] = time[static_cast<std::size_t>(i)];
    for (int c = 0; c < kNumChannels; ++c) {
      f.features(i, c) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)];
    }
    f.labels[i] = labels[static_cast<std::size_t>(i)];
  }
  return f;
}

void write_dataset(const SignalDataset& ds, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& s : ds.scenarios) {
    write_scenario_csv(s, dir / (s.scenario_id + ".csv"));
  }
}

SignalDataset read_dataset(const std::filesystem::path& path) {
  SignalDataset ds;
  if (std::filesystem::is_directory(path)) {
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(path)) {
      if (e.path().extension() == ".csv") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) ds.scenarios.push_back(read_scenario_csv(f));
  } else {
    ds.scenarios.push_back(read_scenario_csv(path));
  }
  return ds;
}

}  // namespace crashdet::telemetry
