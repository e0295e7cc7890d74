// Copyright 2026 The psvgd Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "psvgd/run_record.hpp"
#include "psvgd/types.hpp"

namespace psvgd {

// Ordered (name, value) pairs; written in insertion order.
using MetricList = std::vector<std::pair<std::string, double>>;

// Shortest text that parses back to the same double.
std::string format_double(double value);
double parse_double(const std::string& text);

// Comma-separated, header x0,x1,…; one particle per line.
void write_matrix_csv(const std::filesystem::path& path, const RowMatrix& matrix,
                      const std::string& column_prefix = "x");
RowMatrix read_matrix_csv(const std::filesystem::path& path);

void write_metrics_csv(const std::filesystem::path& path, const MetricList& metrics);
MetricList read_metrics_csv(const std::filesystem::path& path);

// run.csv, iterations.csv, adaptations.csv, spectra.csv and timings.csv in
// `dir`. Only timings.csv depends on wall-clock time.
void write_run_record(const std::filesystem::path& dir, const RunRecord& record);
RunRecord read_run_record(const std::filesystem::path& dir);

// Writes `text` to `path`, replacing any existing file.
void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace psvgd
