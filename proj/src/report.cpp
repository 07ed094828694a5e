// Copyright 2026 the sqabench authors
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

#include "sqa/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace sqa {

const std::vector<std::string> kDefaultTaskOrder = {
    "mmlu_clinical_kg",    "mmlu_medical_genetics", "mmlu_anatomy",
    "mmlu_pro_medicine",   "mmlu_college_biology",  "mmlu_college_medicine",
    "medqa",               "medmcqa"};

double round_half_up(double value, int decimals) {
  double scale = std::pow(10.0, decimals);
  return std::floor(value * scale + 0.5) / scale;
}

double accuracy(const std::vector<std::pair<char, char>>& selected_vs_answer) {
  if (selected_vs_answer.empty())
    throw std::invalid_argument("accuracy over an empty prediction set");
  std::size_t correct = 0;
  for (const auto& [selected, answer] : selected_vs_answer)
    if (selected == answer) ++correct;
  return static_cast<double>(correct) / static_cast<double>(selected_vs_answer.size());
}

double ResultTable::row_average(const std::string& method) const {
  const auto& row = rows.at(method);
  double sum = 0.0;
  for (const std::string& task : task_order) sum += row.at(task);
  return sum / static_cast<double>(task_order.size());
}

ResultTable aggregate_table(const std::vector<EvalResult>& results,
                            const std::vector<std::string>& task_order) {
  ResultTable table;
  table.task_order = task_order;
  std::set<std::pair<std::string, std::string>> seen;
  for (const EvalResult& result : results) {
    if (!seen.insert({result.method, result.task}).second)
      throw std::invalid_argument("duplicate cell for method '" + result.method + "', task '" +
                                  result.task + "'");
    if (std::find(task_order.begin(), task_order.end(), result.task) == task_order.end())
      throw std::invalid_argument("task '" + result.task + "' not in the table's task order");
    if (!table.rows.count(result.method)) table.method_order.push_back(result.method);
    table.rows[result.method][result.task] = result.accuracy_value();
  }
  for (const auto& [method, row] : table.rows) {
    for (const std::string& task : task_order)
      if (!row.count(task))
        throw std::invalid_argument("incomplete row for method '" + method + "': missing task '" +
                                    task + "'");
  }
  return table;
}

namespace {

std::string format_percent(double fraction, int decimals) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(decimals);
  out << round_half_up(fraction * 100.0, decimals);
  return out.str();
}

std::string format_full(double value) {
  std::ostringstream out;
  out.precision(17);
  out << value;
  return out.str();
}

}  // namespace

std::string render_table(const ResultTable& table, TableFormat format, int decimals) {
  std::ostringstream out;
  if (format == TableFormat::kMarkdown) {
    out << "| Method |";
    for (const std::string& task : table.task_order) out << ' ' << task << " |";
    out << " Avg. |\n|";
    for (std::size_t i = 0; i < table.task_order.size() + 2; ++i) out << "---|";
    out << '\n';
    for (const std::string& method : table.method_order) {
      out << "| " << method << " |";
      for (const std::string& task : table.task_order)
        out << ' ' << format_percent(table.rows.at(method).at(task), decimals) << " |";
      out << ' ' << format_percent(table.row_average(method), decimals) << " |\n";
    }
  } else {
    out << "method";
    for (const std::string& task : table.task_order) out << '\t' << task;
    out << "\tavg\n";
    for (const std::string& method : table.method_order) {
      out << method;
      for (const std::string& task : table.task_order)
        out << '\t' << format_full(table.rows.at(method).at(task));
      out << '\t' << format_full(table.row_average(method)) << '\n';
    }
  }
  return out.str();
}

ResultTable parse_table(const std::string& delimited) {
  std::istringstream in(delimited);
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("empty table");

  auto split_tabs = [](const std::string& s) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      std::size_t tab = s.find('\t', start);
      fields.push_back(s.substr(start, tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    return fields;
  };

  std::vector<std::string> header = split_tabs(line);
  if (header.size() < 3 || header.front() != "method" || header.back() != "avg")
    throw std::invalid_argument("malformed table header");

  ResultTable table;
  table.task_order.assign(header.begin() + 1, header.end() - 1);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields = split_tabs(line);
    if (fields.size() != header.size())
      throw std::invalid_argument("row width mismatch in table row '" + fields.front() + "'");
    table.method_order.push_back(fields.front());
    auto& row = table.rows[fields.front()];
    for (std::size_t i = 0; i < table.task_order.size(); ++i)
      row[table.task_order[i]] = std::stod(fields[i + 1]);
  }
  return table;
}

}  // namespace sqa
