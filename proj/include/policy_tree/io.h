// Copyright 2026 The policy_tree Authors.
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

#ifndef POLICY_TREE_IO_H_
#define POLICY_TREE_IO_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "policy_tree/bounded_search.h"
#include "policy_tree/dataset.h"
#include "policy_tree/tree.h"

namespace policy_tree {

// A parsed numeric CSV: header names and row-major cells.
struct NumericTable {
  std::vector<std::string> header;
  std::vector<double> cells;
  std::size_t rows = 0;
};

// Reads a comma-separated file with a mandatory header row. When `prefix` is
// non-empty the header must read prefix1, prefix2, ... Throws DataError with
// file, line and column for unreadable files, header mismatches, ragged rows
// and non-numeric cells.
NumericTable read_numeric_csv(const std::filesystem::path& path, std::string_view prefix);

// Covariates (header x1..xp) and rewards (header a1..am) with equal row counts.
Dataset load_csv(const std::filesystem::path& covariates, const std::filesystem::path& rewards);

// Shortest text that parses back to exactly `value`.
std::string format_double(double value);

// CSV text with header prefix1..prefixk over a row-major matrix.
std::string matrix_to_csv(std::string_view prefix, std::span<const double> cells,
                          std::size_t columns);
// Single-column CSV of integers under `name`.
std::string column_to_csv(std::string_view name, std::span<const std::uint32_t> values);

// Canonical compact JSON: {"leaf":{"action":a}} or
// {"split":{"covariate":j,"value":v,"left":...,"right":...}}.
std::string tree_to_json(const PolicyTree& tree);
nlohmann::ordered_json tree_to_json_value(const PolicyTree& tree);
// Throws DataError naming the offending node path (e.g. $.split.left.leaf).
PolicyTree tree_from_json(std::string_view text);
PolicyTree tree_from_json_value(const nlohmann::ordered_json& value);

nlohmann::ordered_json stats_to_json(const SearchStats& stats);

std::string read_text_file(const std::filesystem::path& path);

// Writes every file through a temporary sibling and renames only after all
// temporaries are complete, so a failure leaves no partial outputs.
void write_files_atomically(
    const std::vector<std::pair<std::filesystem::path, std::string>>& files);

}  // namespace policy_tree

#endif  // POLICY_TREE_IO_H_
