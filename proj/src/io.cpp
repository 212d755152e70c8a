// Copyright 2026 The adiaerr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "adiaerr/io.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "adiaerr/errors.hpp"
#include "adiaerr/mps.hpp"

namespace adiaerr::io {

using nlohmann::json;

namespace {

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw InputError(where + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) throw InputError("unknown key '" + key + "' in " + where);
  }
}

template <class T>
T get_as(const json& j, const std::string& key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InputError("bad value for '" + key + "': " + e.what());
  }
}

template <class T>
void read_opt(const json& j, const std::string& key, T& out) {
  if (j.contains(key)) out = get_as<T>(j, key);
}

Params params_from_json(const json& v) {
  check_keys(v, {"J", "Bx", "Bz", "Jz"}, "vertex");
  Params p;
  read_opt(v, "J", p.J);
  read_opt(v, "Bx", p.Bx);
  read_opt(v, "Bz", p.Bz);
  read_opt(v, "Jz", p.Jz);
  return p;
}

json params_to_json(const Params& p) { return {{"J", p.J}, {"Bx", p.Bx}, {"Bz", p.Bz}, {"Jz", p.Jz}}; }

double parse_double(std::string_view s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw InputError("not a number: '" + std::string(s) + "'");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string opt_field(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

std::optional<double> opt_parse(std::string_view s) {
  if (s.empty()) return std::nullopt;
  return parse_double(s);
}

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

ExperimentConfig config_from_json(const json& j) {
  check_keys(j,
             {"name", "family", "sizes", "path", "vertices", "duration", "dt", "noise", "engine",
              "exact_max_sites", "mps", "initial_state", "reference_state", "k_max", "observe",
              "record_every", "seed", "output"},
             "config");
  ExperimentConfig c;
  read_opt(j, "name", c.name);
  if (j.contains("family")) {
    const auto name = get_as<std::string>(j, "family");
    const auto f = family_from_string(name);
    if (!f) throw InputError("unknown model family '" + name + "'");
    c.family = *f;
  }
  read_opt(j, "sizes", c.sizes);
  if (j.contains("path") && j.contains("vertices")) {
    throw InputError("give either 'path' or 'vertices', not both");
  }
  if (j.contains("path")) {
    const auto name = get_as<std::string>(j, "path");
    const auto v = paths::named(name);
    if (!v) throw InputError("unknown path '" + name + "'");
    c.vertices = *v;
  } else if (j.contains("vertices")) {
    if (!j.at("vertices").is_array()) throw InputError("'vertices' must be an array");
    for (const auto& v : j.at("vertices")) c.vertices.push_back(params_from_json(v));
  } else {
    c.vertices = c.family == Family::ZZXZ ? paths::zzxz_sweep() : paths::heisenberg_loop();
  }
  if (j.contains("duration")) {
    const json& d = j.at("duration");
    std::optional<DurationRule> rule;
    if (d.is_number()) {
      rule = DurationRule{d.get<double>(), 0.0, format_double(d.get<double>())};
    } else if (d.is_string()) {
      rule = DurationRule::parse(d.get<std::string>());
    }
    if (!rule) throw InputError("cannot parse duration rule " + d.dump());
    c.duration = *rule;
  }
  read_opt(j, "dt", c.dt);
  if (j.contains("noise")) {
    const json& n = j.at("noise");
    check_keys(n, {"enabled", "axis", "site", "time_fraction", "time"}, "noise");
    read_opt(n, "enabled", c.noise.enabled);
    if (n.contains("axis")) {
      const auto name = get_as<std::string>(n, "axis");
      const auto a = axis_from_string(name);
      if (!a) throw InputError("unknown Pauli axis '" + name + "'");
      c.noise.axis = *a;
    }
    if (n.contains("site")) c.noise.site = get_as<int>(n, "site");
    read_opt(n, "time_fraction", c.noise.time_fraction);
    if (n.contains("time")) c.noise.time = get_as<double>(n, "time");
  }
  if (j.contains("engine")) {
    c.engine_name = get_as<std::string>(j, "engine");
    c.engine = engine_from_string(c.engine_name);
  }
  read_opt(j, "exact_max_sites", c.exact_max_sites);
  if (j.contains("mps")) {
    const json& m = j.at("mps");
    check_keys(m, {"cutoff", "max_bond", "trotter_order", "checkpoint"}, "mps");
    read_opt(m, "cutoff", c.mps_cutoff);
    read_opt(m, "max_bond", c.mps_max_bond);
    read_opt(m, "trotter_order", c.trotter_order);
    read_opt(m, "checkpoint", c.mps_checkpoint);
  }
  read_opt(j, "initial_state", c.initial_state);
  read_opt(j, "reference_state", c.reference_state);
  read_opt(j, "k_max", c.k_max);
  if (j.contains("observe")) {
    const json& o = j.at("observe");
    check_keys(o, {"delta_e", "fidelity", "populations", "spectrum"}, "observe");
    read_opt(o, "delta_e", c.observe_delta_e);
    read_opt(o, "fidelity", c.observe_fidelity);
    read_opt(o, "populations", c.observe_populations);
    read_opt(o, "spectrum", c.observe_spectrum);
  }
  read_opt(j, "record_every", c.record_every);
  read_opt(j, "seed", c.seed);
  if (j.contains("output")) {
    const json& o = j.at("output");
    check_keys(o, {"dir", "format"}, "output");
    read_opt(o, "dir", c.output_dir);
    read_opt(o, "format", c.output_format);
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InputError("config " + path + " is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

json config_to_json(const ExperimentConfig& c) {
  json vertices = json::array();
  for (const auto& v : c.vertices) vertices.push_back(params_to_json(v));
  json noise = {{"enabled", c.noise.enabled},
                {"axis", std::string(to_string(c.noise.axis))},
                {"time_fraction", c.noise.time_fraction}};
  if (c.noise.site) noise["site"] = *c.noise.site;
  if (c.noise.time) noise["time"] = *c.noise.time;
  return {{"name", c.name},
          {"family", std::string(to_string(c.family))},
          {"sizes", c.sizes},
          {"vertices", vertices},
          {"duration", c.duration.text},
          {"dt", c.dt},
          {"noise", noise},
          {"engine", c.engine_name},
          {"exact_max_sites", c.exact_max_sites},
          {"mps",
           {{"cutoff", c.mps_cutoff},
            {"max_bond", c.mps_max_bond},
            {"trotter_order", c.trotter_order},
            {"checkpoint", c.mps_checkpoint}}},
          {"initial_state", c.initial_state},
          {"reference_state", c.reference_state},
          {"k_max", c.k_max},
          {"observe",
           {{"delta_e", c.observe_delta_e},
            {"fidelity", c.observe_fidelity},
            {"populations", c.observe_populations},
            {"spectrum", c.observe_spectrum}}},
          {"record_every", c.record_every},
          {"seed", c.seed},
          {"output", {{"dir", c.output_dir}, {"format", c.output_format}}}};
}

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc()) throw NumericalError("cannot format number");
  return std::string(buf, ptr);
}

std::vector<std::string> csv_header(Family family, int k_max) {
  std::vector<std::string> h{"t", "J", "Bx", family == Family::HeisenbergX ? "Jz" : "Bz",
                             "energy", "delta_e", "fidelity"};
  for (int k = 0; k <= k_max; ++k) h.push_back("p" + std::to_string(k));
  h.insert(h.end(), {"p_rest", "max_chi", "trunc_weight"});
  return h;
}

std::string to_csv(const std::vector<Row>& rows, Family family, int k_max) {
  std::string out;
  const auto header = csv_header(family, k_max);
  for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + header[i];
  out += '\n';
  for (const Row& r : rows) {
    const double fourth = family == Family::HeisenbergX ? r.params.Jz : r.params.Bz;
    out += format_double(r.t) + ',' + format_double(r.params.J) + ',' + format_double(r.params.Bx) +
           ',' + format_double(fourth) + ',' + format_double(r.energy) + ',' + opt_field(r.delta_e) +
           ',' + opt_field(r.fidelity);
    for (int k = 0; k <= k_max; ++k) {
      out += ',';
      if (k < static_cast<int>(r.p.size())) out += format_double(r.p[k]);
    }
    out += ',' + opt_field(r.p_rest) + ',' + (r.max_chi ? std::to_string(*r.max_chi) : "") + ',' +
           opt_field(r.trunc_weight) + '\n';
  }
  return out;
}

std::string to_csv(const ResultRecord& record) { return to_csv(record.rows, record.family, record.k_max); }

CsvTable parse_csv(std::string_view text) {
  std::vector<std::string_view> lines;
  for (auto line : split(text, '\n')) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) lines.push_back(line);
  }
  if (lines.empty()) throw InputError("CSV has no header");
  const auto header = split(lines[0], ',');
  if (header.size() < 11) throw InputError("CSV header is too short");
  CsvTable table;
  table.family = header[3] == "Jz" ? Family::HeisenbergX : Family::ZZXZ;
  table.k_max = static_cast<int>(header.size()) - 11;
  const auto expected = csv_header(table.family, table.k_max);
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] != expected[i]) throw InputError("unexpected CSV column '" + std::string(header[i]) + "'");
  }
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const auto f = split(lines[li], ',');
    if (f.size() != header.size()) throw InputError("CSV row " + std::to_string(li) + " has wrong width");
    Row r;
    r.t = parse_double(f[0]);
    r.params.J = parse_double(f[1]);
    r.params.Bx = parse_double(f[2]);
    (table.family == Family::HeisenbergX ? r.params.Jz : r.params.Bz) = parse_double(f[3]);
    r.energy = parse_double(f[4]);
    r.delta_e = opt_parse(f[5]);
    r.fidelity = opt_parse(f[6]);
    bool any_p = false;
    std::vector<double> p;
    for (int k = 0; k <= table.k_max; ++k) {
      const auto v = opt_parse(f[7 + k]);
      any_p = any_p || v.has_value();
      p.push_back(v.value_or(0.0));
    }
    if (any_p) r.p = std::move(p);
    const std::size_t tail = 8 + table.k_max;
    r.p_rest = opt_parse(f[tail]);
    if (auto chi = opt_parse(f[tail + 1])) r.max_chi = static_cast<int>(*chi);
    r.trunc_weight = opt_parse(f[tail + 2]);
    table.rows.push_back(std::move(r));
  }
  return table;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open CSV: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_csv(ss.str());
}

json to_json(const ResultRecord& record) {
  json rows = json::array();
  for (const Row& r : record.rows) {
    rows.push_back({{"t", r.t},
                    {"params", params_to_json(r.params)},
                    {"energy", r.energy},
                    {"delta_e", opt_json(r.delta_e)},
                    {"fidelity", opt_json(r.fidelity)},
                    {"p", r.p},
                    {"p_rest", opt_json(r.p_rest)},
                    {"max_chi", r.max_chi ? json(*r.max_chi) : json(nullptr)},
                    {"trunc_weight", opt_json(r.trunc_weight)}});
  }
  const RunInfo& info = record.info;
  json noise = nullptr;
  if (info.noise) {
    noise = {{"t_apply", info.noise->t_apply},
             {"site", info.noise->site},
             {"axis", std::string(to_string(info.noise->axis))}};
  }
  json out = {{"config", record.config_name},
              {"family", std::string(to_string(record.family))},
              {"engine", info.engine},
              {"label", info.label},
              {"n", info.n},
              {"duration", info.duration},
              {"dt", info.dt},
              {"seed", info.seed},
              {"wall_seconds", info.wall_seconds},
              {"version", info.version},
              {"noise", noise},
              {"truncation_flagged", info.truncation_flagged},
              {"k_max", record.k_max},
              {"rows", rows}};
  if (record.final_spectrum) {
    json groups = json::array();
    for (const auto& g : record.final_spectrum->groups) {
      groups.push_back({{"energy", g.energy}, {"degeneracy", g.degeneracy}, {"population", g.population}});
    }
    out["final_spectrum"] = groups;
  }
  return out;
}

json manifest(const json& config_echo, const std::vector<ResultRecord>& records,
              const std::vector<std::string>& files) {
  json runs = json::array();
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    json run = {{"n", r.info.n},
                {"label", r.info.label},
                {"engine", r.info.engine},
                {"duration", r.info.duration},
                {"wall_seconds", r.info.wall_seconds},
                {"truncation_flagged", r.info.truncation_flagged},
                {"final_energy", r.rows.empty() ? json(nullptr) : json(r.rows.back().energy)},
                {"final_delta_e", r.rows.empty() ? json(nullptr) : opt_json(r.rows.back().delta_e)}};
    if (i < files.size()) run["file"] = files[i];
    runs.push_back(run);
  }
  const std::uint64_t seed = records.empty() ? 0 : records.front().info.seed;
  return {{"config", config_echo}, {"seed", seed}, {"version", version()}, {"runs", runs}};
}

void write_text(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  std::error_code ec;
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path(), ec);
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path);
  out << text;
  if (!out) throw InputError("failed writing " + path);
}

std::string record_stem(const ResultRecord& record) {
  return record.config_name + "_n" + std::to_string(record.info.n) + "_" + record.info.label;
}

std::vector<std::string> export_records(const std::vector<ResultRecord>& records,
                                        const json& config_echo, const std::string& dir,
                                        const std::string& format) {
  if (format != "csv" && format != "json") throw InputError("unknown output format '" + format + "'");
  std::vector<std::string> files;
  for (const auto& r : records) {
    std::string name = record_stem(r);
    for (char& ch : name) {
      if (ch == '/' || ch == '=' || ch == ' ') ch = '_';
    }
    const std::string path = (std::filesystem::path(dir) / (name + "." + format)).string();
    write_text(path, format == "csv" ? to_csv(r) : to_json(r).dump(2) + "\n");
    files.push_back(path);
    if (r.final_checkpoint) {
      const std::string cpath = (std::filesystem::path(dir) / (name + ".mps")).string();
      mps::save_checkpoint(cpath, *r.final_checkpoint);
      files.push_back(cpath);
    }
  }
  const std::string mpath = (std::filesystem::path(dir) / "manifest.json").string();
  write_text(mpath, manifest(config_echo, records, files).dump(2) + "\n");
  files.push_back(mpath);
  return files;
}

}  // namespace adiaerr::io
