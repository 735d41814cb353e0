/*
 Copyright 2026 The snn-smp Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#include "snn/dataset.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "snn/errors.hpp"

namespace snn {

using nlohmann::json;

namespace {

// Index of the first record line that is not a complete JSON array.
std::size_t first_broken_record(const std::string& text) {
  const auto start = text.find("\"records\":[");
  if (start == std::string::npos) return 0;
  std::istringstream lines(text.substr(start));
  std::string line;
  std::getline(lines, line);
  std::size_t index = 0;
  while (std::getline(lines, line)) {
    if (!line.empty() && line.back() == ',') line.pop_back();
    if (line.empty() || line[0] != '[' || !json::accept(line)) break;
    ++index;
  }
  return index;
}

}  // namespace

void Dataset::validate() const {
  if (samples.empty()) throw DataError("dataset is empty");
  if (input_dim < 1 || label_dim < 1) throw DataError("dataset dimensions must be positive");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].input.size() != input_dim || samples[i].label.size() != label_dim) {
      throw DataError("record " + std::to_string(i) + ": dimension mismatch (expected " +
                      std::to_string(input_dim) + " inputs and " + std::to_string(label_dim) +
                      " labels)");
    }
  }
}

bool operator==(const Dataset& a, const Dataset& b) {
  if (a.task != b.task || a.parameters != b.parameters || a.seed != b.seed ||
      a.input_dim != b.input_dim || a.label_dim != b.label_dim || a.size() != b.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.samples[i].input != b.samples[i].input || a.samples[i].label != b.samples[i].label) return false;
  }
  return true;
}

std::string dataset_to_string(const Dataset& data) {
  json header = {{"task", data.task},
                 {"parameters", data.parameters},
                 {"seed", data.seed},
                 {"input_dim", data.input_dim},
                 {"label_dim", data.label_dim},
                 {"count", data.samples.size()}};
  json records = json::array();
  for (const auto& s : data.samples) {
    json row = json::array();
    for (double v : s.input) row.push_back(v);
    for (double v : s.label) row.push_back(v);
    records.push_back(std::move(row));
  }
  // Records one per line keeps the files diffable.
  std::ostringstream out;
  out << "{\"header\":" << header.dump() << ",\n\"records\":[\n";
  for (std::size_t i = 0; i < records.size(); ++i) {
    out << records[i].dump() << (i + 1 < records.size() ? ",\n" : "\n");
  }
  out << "]}\n";
  return out.str();
}

Dataset dataset_from_string(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DataError("malformed dataset file near record " + std::to_string(first_broken_record(text)) +
                    ": " + e.what());
  }
  if (!doc.is_object() || !doc.contains("header") || !doc.contains("records")) {
    throw DataError("dataset file must contain 'header' and 'records'");
  }
  Dataset data;
  try {
    const auto& h = doc.at("header");
    data.task = h.at("task").get<std::string>();
    data.parameters = h.at("parameters").get<std::map<std::string, double>>();
    data.seed = h.at("seed").get<std::uint64_t>();
    data.input_dim = h.at("input_dim").get<int>();
    data.label_dim = h.at("label_dim").get<int>();
    const auto count = h.at("count").get<std::size_t>();
    const auto& records = doc.at("records");
    if (!records.is_array()) throw DataError("'records' must be an array");
    if (records.size() != count) {
      throw DataError("header declares " + std::to_string(count) + " records but file has " +
                      std::to_string(records.size()) + " (truncated at record " +
                      std::to_string(records.size()) + ")");
    }
    const std::size_t width = static_cast<std::size_t>(data.input_dim + data.label_dim);
    data.samples.reserve(count);
    for (std::size_t i = 0; i < records.size(); ++i) {
      const auto& row = records[i];
      if (!row.is_array() || row.size() != width) {
        throw DataError("record " + std::to_string(i) + ": expected " + std::to_string(width) +
                        " numbers, found " + std::to_string(row.is_array() ? row.size() : 0));
      }
      Sample s{Vector(data.input_dim), Vector(data.label_dim)};
      for (int j = 0; j < data.input_dim; ++j) s.input[j] = row[j].get<double>();
      for (int j = 0; j < data.label_dim; ++j) s.label[j] = row[data.input_dim + j].get<double>();
      data.samples.push_back(std::move(s));
    }
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed dataset header or record: ") + e.what());
  }
  data.validate();
  return data;
}

void write_dataset(const Dataset& data, const std::filesystem::path& path) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open '" + path.string() + "' for writing");
  out << dataset_to_string(data);
  if (!out) throw DataError("failed writing '" + path.string() + "'");
}

Dataset read_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open dataset '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return dataset_from_string(buf.str());
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

}  // namespace snn
