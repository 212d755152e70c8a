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

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "adiaerr/experiment.hpp"
#include "adiaerr/models.hpp"

/// JSON experiment configs, CSV / JSON export and CSV import.
namespace adiaerr::io {

/// Throws InputError on malformed JSON, unknown keys or wrong types. Engine
/// names are kept verbatim so validate() can report unknown ones.
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);
nlohmann::json config_to_json(const ExperimentConfig& config);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double x);

/// Column names: t, J, Bx, Bz (Jz for HeisenbergX), energy, delta_e,
/// fidelity, p0..p{k_max}, p_rest, max_chi, trunc_weight.
std::vector<std::string> csv_header(Family family, int k_max);
std::string to_csv(const std::vector<Row>& rows, Family family, int k_max);
std::string to_csv(const ResultRecord& record);

struct CsvTable {
  Family family = Family::ZZXZ;
  int k_max = 0;
  std::vector<Row> rows;
};

/// Inverse of to_csv.
CsvTable parse_csv(std::string_view text);
CsvTable read_csv(const std::string& path);

nlohmann::json to_json(const ResultRecord& record);
nlohmann::json manifest(const nlohmann::json& config_echo, const std::vector<ResultRecord>& records,
                        const std::vector<std::string>& files);

/// Writes text, creating parent directories. Throws InputError with the
/// path when the file cannot be written.
void write_text(const std::string& path, const std::string& text);

/// File stem for a record: <config>_n<n>_<label>.
std::string record_stem(const ResultRecord& record);

/// One data file per record plus manifest.json in `dir`. Returns the paths.
std::vector<std::string> export_records(const std::vector<ResultRecord>& records,
                                        const nlohmann::json& config_echo, const std::string& dir,
                                        const std::string& format);

}  // namespace adiaerr::io
