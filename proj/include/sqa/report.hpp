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

#pragma once

#include <array>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace sqa {

struct PredictionRecord {
  std::string item_id;
  std::string task;
  std::string method;
  std::array<double, 4> scores{};
  char selected = 'A';
  char answer = 'A';
  bool correct = false;
  bool errored = false;
};

struct EvalResult {
  std::string task;
  std::string method;
  std::size_t n_items = 0;
  std::size_t n_correct = 0;
  std::size_t n_errored = 0;

  double accuracy_value() const {
    std::size_t denom = n_items - n_errored;
    return denom == 0 ? 0.0 : static_cast<double>(n_correct) / static_cast<double>(denom);
  }
};

// method -> task -> value (fraction). The Avg. column is the unweighted
// mean over the task columns.
struct ResultTable {
  std::vector<std::string> task_order;
  std::vector<std::string> method_order;
  std::map<std::string, std::map<std::string, double>> rows;

  double row_average(const std::string& method) const;
};

// Column order matching the benchmark's 8 tasks.
extern const std::vector<std::string> kDefaultTaskOrder;

// Exact-match fraction. Throws on an empty prediction set.
double accuracy(const std::vector<std::pair<char, char>>& selected_vs_answer);

// Rejects duplicate (method, task) cells and rows that do not cover every
// task in task_order.
ResultTable aggregate_table(const std::vector<EvalResult>& results,
                            const std::vector<std::string>& task_order);

enum class TableFormat { kMarkdown, kDelimited };

// Markdown renders percentages rounded half-up to `decimals`; the delimited
// format is full precision and round-trips losslessly through parse_table.
std::string render_table(const ResultTable& table, TableFormat format, int decimals = 1);
ResultTable parse_table(const std::string& delimited);

double round_half_up(double value, int decimals);

}  // namespace sqa
