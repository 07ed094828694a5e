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

#include <filesystem>
#include <string>

#include "sqa/corpus.hpp"
#include "sqa/pipeline.hpp"

namespace sqa::testing {

// Deterministic items with answers rotating A,B,C,D by index.
TaskSpec make_fixture_task(const std::string& name, std::size_t n_items, std::uint64_t seed = 7);

void write_jsonl(const std::filesystem::path& path, const TaskSpec& spec);

// Fresh empty directory under the system temp dir; removed and recreated.
std::filesystem::path temp_dir(const std::string& tag);

// Mock-only config over the given fixture tasks; backend modes:
// hash | oracle | uniform applied to every scoring backend.
RunConfig make_mock_config(const std::filesystem::path& dir,
                           const std::vector<TaskSpec>& tasks, const std::string& mode,
                           std::uint64_t seed = 42);

std::string slurp(const std::filesystem::path& path);

}  // namespace sqa::testing
