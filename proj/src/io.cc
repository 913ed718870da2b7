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

#include "policy_tree/io.h"

#include <unistd.h>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <system_error>

namespace policy_tree {

using nlohmann::ordered_json;

namespace {

std::string location(const std::filesystem::path& path, std::size_t line, std::size_t column) {
  return path.string() + ":" + std::to_string(line) + ":" + std::to_string(column);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

bool parse_number(std::string_view text, double& out) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return false;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && end == text.data() + text.size();
}

}  // namespace

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

NumericTable read_numeric_csv(const std::filesystem::path& path, std::string_view prefix) {
  std::string text = read_text_file(path);
  std::string_view rest(text);
  if (rest.starts_with("\xEF\xBB\xBF")) rest.remove_prefix(3);
  std::vector<std::string_view> lines;
  while (!rest.empty()) {
    std::size_t nl = rest.find('\n');
    lines.push_back(rest.substr(0, nl));
    if (nl == std::string_view::npos) break;
    rest.remove_prefix(nl + 1);
  }
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) throw DataError(path.string() + ": missing header row");

  NumericTable table;
  auto header = split_fields(lines[0]);
  for (std::size_t c = 0; c < header.size(); ++c) {
    std::string name(header[c]);
    if (!prefix.empty() && name != std::string(prefix) + std::to_string(c + 1)) {
      throw DataError(location(path, 1, c + 1) + ": expected header " + std::string(prefix) +
                      std::to_string(c + 1) + ", found \"" + name + "\"");
    }
    table.header.push_back(std::move(name));
  }
  const std::size_t columns = table.header.size();
  for (std::size_t r = 1; r < lines.size(); ++r) {
    auto fields = split_fields(lines[r]);
    if (fields.size() != columns) {
      throw DataError(location(path, r + 1, 1) + ": expected " + std::to_string(columns) +
                      " fields, found " + std::to_string(fields.size()));
    }
    for (std::size_t c = 0; c < columns; ++c) {
      double v;
      if (!parse_number(fields[c], v)) {
        throw DataError(location(path, r + 1, c + 1) + ": not a number: \"" +
                        std::string(fields[c]) + "\"");
      }
      table.cells.push_back(v);
    }
    ++table.rows;
  }
  return table;
}

Dataset load_csv(const std::filesystem::path& covariates, const std::filesystem::path& rewards) {
  NumericTable x = read_numeric_csv(covariates, "x");
  NumericTable r = read_numeric_csv(rewards, "a");
  if (x.rows != r.rows) {
    throw DataError("row count mismatch: " + covariates.string() + " has " +
                    std::to_string(x.rows) + " rows, " + rewards.string() + " has " +
                    std::to_string(r.rows));
  }
  return build_dataset(x.cells, x.header.size(), r.cells, r.header.size());
}

std::string format_double(double value) {
  char buffer[64];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, end);
}

std::string matrix_to_csv(std::string_view prefix, std::span<const double> cells,
                          std::size_t columns) {
  std::string out;
  for (std::size_t c = 0; c < columns; ++c) {
    if (c) out += ',';
    out += prefix;
    out += std::to_string(c + 1);
  }
  out += '\n';
  for (std::size_t k = 0; k < cells.size(); ++k) {
    out += format_double(cells[k]);
    out += (k + 1) % columns == 0 ? '\n' : ',';
  }
  return out;
}

std::string column_to_csv(std::string_view name, std::span<const std::uint32_t> values) {
  std::string out(name);
  out += '\n';
  for (std::uint32_t v : values) {
    out += std::to_string(v);
    out += '\n';
  }
  return out;
}

namespace {

ordered_json node_to_json(const PolicyTree& tree, std::uint32_t index) {
  const PolicyTree::Node& node = tree.node(index);
  ordered_json out;
  if (node.is_leaf) {
    out["leaf"]["action"] = node.action;
    return out;
  }
  ordered_json& split = out["split"];
  split["covariate"] = node.covariate;
  split["value"] = node.value;
  split["left"] = node_to_json(tree, node.left);
  split["right"] = node_to_json(tree, node.right);
  return out;
}

const ordered_json& member(const ordered_json& object, const char* key, const std::string& path) {
  auto it = object.find(key);
  if (it == object.end()) throw DataError(path + ": missing \"" + key + "\"");
  return *it;
}

void expect_keys(const ordered_json& object, std::initializer_list<const char*> keys,
                 const std::string& path) {
  if (!object.is_object()) throw DataError(path + ": expected an object");
  for (const auto& [key, unused] : object.items()) {
    bool known = false;
    for (const char* k : keys) known = known || key == k;
    if (!known) throw DataError(path + ": unexpected key \"" + key + "\"");
  }
}

std::uint32_t index_field(const ordered_json& value, const std::string& path) {
  if (!value.is_number_unsigned() ||
      value.get<std::uint64_t>() > std::numeric_limits<std::uint32_t>::max()) {
    throw DataError(path + ": expected a non-negative integer");
  }
  return static_cast<std::uint32_t>(value.get<std::uint64_t>());
}

PolicyTree node_from_json(const ordered_json& value, const std::string& path) {
  if (!value.is_object() || value.size() != 1) {
    throw DataError(path + ": expected an object with one key, \"leaf\" or \"split\"");
  }
  if (value.contains("leaf")) {
    const std::string at = path + ".leaf";
    const ordered_json& leaf = value["leaf"];
    expect_keys(leaf, {"action"}, at);
    return PolicyTree::leaf(index_field(member(leaf, "action", at), at + ".action"));
  }
  if (value.contains("split")) {
    const std::string at = path + ".split";
    const ordered_json& split = value["split"];
    expect_keys(split, {"covariate", "value", "left", "right"}, at);
    const std::uint32_t covariate =
        index_field(member(split, "covariate", at), at + ".covariate");
    const ordered_json& v = member(split, "value", at);
    if (!v.is_number()) throw DataError(at + ".value: expected a number");
    PolicyTree left = node_from_json(member(split, "left", at), at + ".left");
    PolicyTree right = node_from_json(member(split, "right", at), at + ".right");
    return PolicyTree::split(covariate, v.get<double>(), left, right);
  }
  throw DataError(path + ": expected \"leaf\" or \"split\"");
}

}  // namespace

ordered_json tree_to_json_value(const PolicyTree& tree) { return node_to_json(tree, 0); }

std::string tree_to_json(const PolicyTree& tree) { return tree_to_json_value(tree).dump(); }

PolicyTree tree_from_json_value(const ordered_json& value) { return node_from_json(value, "$"); }

PolicyTree tree_from_json(std::string_view text) {
  ordered_json value;
  try {
    value = ordered_json::parse(text);
  } catch (const ordered_json::parse_error& e) {
    throw DataError(std::string("invalid tree JSON: ") + e.what());
  }
  return tree_from_json_value(value);
}

ordered_json stats_to_json(const SearchStats& stats) {
  ordered_json out;
  out["subproblems"] = stats.subproblems;
  out["splits_evaluated"] = stats.splits_evaluated;
  out["bound_prunes"] = stats.bound_prunes;
  out["cache_hits"] = stats.cache_hits;
  out["cache_misses"] = stats.cache_misses;
  out["perfect_exits"] = stats.perfect_exits;
  // Millisecond precision.
  out["elapsed_seconds"] = static_cast<double>(std::llround(stats.elapsed_seconds * 1000.0)) / 1000.0;
  return out;
}

void write_files_atomically(
    const std::vector<std::pair<std::filesystem::path, std::string>>& files) {
  std::vector<std::filesystem::path> temps;
  auto discard = [&] {
    std::error_code ignored;
    for (const auto& t : temps) std::filesystem::remove(t, ignored);
  };
  for (const auto& [path, content] : files) {
    std::filesystem::path temp = path;
    temp += ".tmp" + std::to_string(::getpid());
    temps.push_back(temp);
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    out << content;
    out.close();
    if (!out) {
      discard();
      throw DataError("cannot write " + path.string());
    }
  }
  for (std::size_t k = 0; k < files.size(); ++k) {
    std::error_code ec;
    std::filesystem::rename(temps[k], files[k].first, ec);
    if (ec) {
      discard();
      throw DataError("cannot write " + files[k].first.string() + ": " + ec.message());
    }
  }
}

}  // namespace policy_tree
