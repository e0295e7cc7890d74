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

#include "psvgd/harness/artifacts.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <system_error>

#include "psvgd/errors.hpp"

namespace psvgd {

namespace fs = std::filesystem;

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

// Header plus rows of fields; throws on a ragged table.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

Table read_table(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  Table table;
  std::string line;
  if (!std::getline(in, line)) throw ConfigError(path.string() + " is empty");
  table.header = split(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = split(line);
    if (fields.size() != table.header.size()) {
      throw ConfigError(path.string() + ": row has " + std::to_string(fields.size()) +
                        " fields, header has " + std::to_string(table.header.size()));
    }
    table.rows.push_back(std::move(fields));
  }
  return table;
}

std::ofstream open_for_write(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path.string());
  return out;
}

Index parse_index(const std::string& text) {
  Index value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError("not an integer: '" + text + "'");
  }
  return value;
}

std::map<std::string, std::string> read_key_values(const fs::path& path) {
  const Table t = read_table(path);
  if (t.header.size() != 2) throw ConfigError(path.string() + " must have two columns");
  std::map<std::string, std::string> out;
  for (const auto& row : t.rows) out[row[0]] = row[1];
  return out;
}

}  // namespace

std::string format_double(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) throw NumericalError("cannot format a double");
  return std::string(buffer, ptr);
}

double parse_double(const std::string& text) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError("not a number: '" + text + "'");
  }
  return value;
}

void write_matrix_csv(const fs::path& path, const RowMatrix& matrix,
                      const std::string& column_prefix) {
  std::ofstream out = open_for_write(path);
  for (Index j = 0; j < matrix.cols(); ++j) {
    out << (j ? "," : "") << column_prefix << j;
  }
  out << '\n';
  for (Index i = 0; i < matrix.rows(); ++i) {
    for (Index j = 0; j < matrix.cols(); ++j) out << (j ? "," : "") << format_double(matrix(i, j));
    out << '\n';
  }
}

RowMatrix read_matrix_csv(const fs::path& path) {
  const Table t = read_table(path);
  RowMatrix m(static_cast<Index>(t.rows.size()), static_cast<Index>(t.header.size()));
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      m(i, j) = parse_double(t.rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
    }
  }
  return m;
}

void write_metrics_csv(const fs::path& path, const MetricList& metrics) {
  std::ofstream out = open_for_write(path);
  out << "metric,value\n";
  for (const auto& [name, value] : metrics) out << name << ',' << format_double(value) << '\n';
}

MetricList read_metrics_csv(const fs::path& path) {
  const Table t = read_table(path);
  if (t.header.size() != 2) throw ConfigError(path.string() + " must have two columns");
  MetricList metrics;
  for (const auto& row : t.rows) metrics.emplace_back(row[0], parse_double(row[1]));
  return metrics;
}

void write_run_record(const fs::path& dir, const RunRecord& record) {
  {
    std::ofstream out = open_for_write(dir / "run.csv");
    out << "key,value\n"
        << "converged," << (record.converged ? 1 : 0) << '\n'
        << "iterations," << record.iterations.size() << '\n'
        << "adaptations," << record.adaptations.size() << '\n';
  }
  {
    std::ofstream out = open_for_write(dir / "iterations.csv");
    out << "iteration,outer,mean_step_norm,bandwidth,step_size,line_search_exhausted\n";
    for (const auto& it : record.iterations) {
      out << it.iteration << ',' << it.outer << ',' << format_double(it.mean_step_norm) << ','
          << format_double(it.bandwidth) << ',' << format_double(it.step_size) << ','
          << (it.line_search_exhausted ? 1 : 0) << '\n';
    }
  }
  {
    std::ofstream out = open_for_write(dir / "adaptations.csv");
    out << "outer,first_iteration,rank,tail_bound,outer_step_norm,spectrum_length\n";
    for (const auto& a : record.adaptations) {
      out << a.outer << ',' << a.first_iteration << ',' << a.rank << ','
          << format_double(a.tail_bound) << ',' << format_double(a.outer_step_norm) << ','
          << a.spectrum.size() << '\n';
    }
  }
  {
    std::ofstream out = open_for_write(dir / "spectra.csv");
    out << "outer,index,eigenvalue\n";
    for (const auto& a : record.adaptations) {
      for (Index i = 0; i < a.spectrum.size(); ++i) {
        out << a.outer << ',' << i << ',' << format_double(a.spectrum[i]) << '\n';
      }
    }
  }
  {
    std::ofstream out = open_for_write(dir / "timings.csv");
    out << "phase,seconds\n"
        << "gradient," << format_double(record.timings.gradient) << '\n'
        << "kernel," << format_double(record.timings.kernel) << '\n'
        << "update," << format_double(record.timings.update) << '\n'
        << "total," << format_double(record.timings.total) << '\n';
  }
}

RunRecord read_run_record(const fs::path& dir) {
  RunRecord record;
  const auto run = read_key_values(dir / "run.csv");
  const auto field = [&](const char* key) {
    const auto it = run.find(key);
    if (it == run.end()) throw ConfigError("run.csv lacks '" + std::string(key) + "'");
    return parse_index(it->second);
  };
  record.converged = field("converged") != 0;

  for (const auto& row : read_table(dir / "iterations.csv").rows) {
    IterationRecord it;
    it.iteration = parse_index(row[0]);
    it.outer = parse_index(row[1]);
    it.mean_step_norm = parse_double(row[2]);
    it.bandwidth = parse_double(row[3]);
    it.step_size = parse_double(row[4]);
    it.line_search_exhausted = parse_index(row[5]) != 0;
    record.iterations.push_back(it);
  }

  std::vector<Index> lengths;
  for (const auto& row : read_table(dir / "adaptations.csv").rows) {
    AdaptationRecord a;
    a.outer = parse_index(row[0]);
    a.first_iteration = parse_index(row[1]);
    a.rank = parse_index(row[2]);
    a.tail_bound = parse_double(row[3]);
    a.outer_step_norm = parse_double(row[4]);
    lengths.push_back(parse_index(row[5]));
    a.spectrum = Vector::Zero(lengths.back());
    record.adaptations.push_back(std::move(a));
  }
  for (const auto& row : read_table(dir / "spectra.csv").rows) {
    const Index outer = parse_index(row[0]);
    const Index i = parse_index(row[1]);
    bool placed = false;
    for (auto& a : record.adaptations) {
      if (a.outer == outer && i >= 0 && i < a.spectrum.size()) {
        a.spectrum[i] = parse_double(row[2]);
        placed = true;
        break;
      }
    }
    if (!placed) throw ConfigError("spectra.csv entry does not match any adaptation");
  }

  if (field("iterations") != record.iteration_count() ||
      field("adaptations") != static_cast<Index>(record.adaptations.size())) {
    throw ConfigError("run.csv counts disagree with the record files");
  }

  const auto timings = read_key_values(dir / "timings.csv");
  const auto seconds = [&](const char* key) {
    const auto it = timings.find(key);
    if (it == timings.end()) throw ConfigError("timings.csv lacks '" + std::string(key) + "'");
    return parse_double(it->second);
  };
  record.timings.gradient = seconds("gradient");
  record.timings.kernel = seconds("kernel");
  record.timings.update = seconds("update");
  record.timings.total = seconds("total");
  return record;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out = open_for_write(path);
  out << text;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

}  // namespace psvgd
