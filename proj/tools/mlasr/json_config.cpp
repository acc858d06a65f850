// Copyright 2026 The mlasr Authors.
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
#include "mlasr/json_config.hpp"

#include <cctype>
#include <set>
#include <sstream>

#include <json.hpp>

namespace mlasr::cli {
namespace {

using nlohmann::json;
using ojson = nlohmann::ordered_json;

const std::set<std::string> kExecutionOnly = {"help", "config", "jobs", "out"};

// Numbers and booleans are logged as JSON values, everything else as strings.
ojson typed(const std::string& s) {
  if (s == "true" || s == "false") return s == "true";
  if (!s.empty() && (std::isdigit(static_cast<unsigned char>(s[0])) || s[0] == '-')) {
    ojson v = ojson::parse(s, nullptr, false);
    if (v.is_number()) return v;
  }
  return s;
}

std::vector<std::string> scalar_inputs(const json& v) {
  std::vector<std::string> out;
  auto one = [](const json& x) -> std::string {
    if (x.is_string()) return x.get<std::string>();
    if (x.is_boolean()) return x.get<bool>() ? "true" : "false";
    return x.dump();
  };
  if (v.is_array()) {
    for (const auto& x : v) out.push_back(one(x));
  } else {
    out.push_back(one(v));
  }
  return out;
}

bool is_prefix(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  if (a.size() > b.size()) return false;
  return std::equal(a.begin(), a.end(), b.begin());
}

void collect(const json& obj, const CLI::App& app, std::vector<std::string> parents,
             const std::vector<std::string>& active, std::vector<CLI::ConfigItem>& out) {
  for (const auto& [key, value] : obj.items()) {
    if (value.is_object()) {
      const CLI::App* sub = nullptr;
      try {
        sub = app.get_subcommand(key);
      } catch (const CLI::OptionNotFound&) {
        throw CLI::ConfigError("config: unknown section '" + key + "'");
      }
      auto next = parents;
      next.push_back(key);
      if (is_prefix(next, active)) collect(value, *sub, next, active, out);
      continue;
    }
    if (value.is_null()) continue;
    CLI::ConfigItem item;
    // Scalars at the root belong to the invoked subcommand.
    item.parents = parents.empty() ? active : parents;
    item.name = key;
    item.inputs = scalar_inputs(value);
    out.push_back(std::move(item));
  }
}

void resolve_options(const CLI::App& app, ojson& out) {
  for (const CLI::Option* opt : app.get_options()) {
    std::string name = opt->get_single_name();
    if (name.empty() || kExecutionOnly.contains(name)) continue;
    if (opt->count() > 0) {
      const auto& res = opt->results();
      if (res.size() == 1) {
        out[name] = typed(res.front());
      } else {
        ojson arr = ojson::array();
        for (const auto& r : res) arr.push_back(typed(r));
        out[name] = arr;
      }
    } else if (opt->get_expected_min() == 0) {
      out[name] = false;
    } else {
      out[name] = typed(opt->get_default_str());
    }
  }
}

}  // namespace

std::vector<std::string> active_path(const CLI::App& root) {
  std::vector<std::string> path;
  const CLI::App* node = &root;
  for (;;) {
    auto subs = node->get_subcommands();
    if (subs.empty()) break;
    node = subs.front();
    path.push_back(node->get_name());
  }
  return path;
}

std::vector<CLI::ConfigItem> JsonConfig::from_config(std::istream& input) const {
  json j;
  try {
    j = json::parse(input);
  } catch (const json::parse_error& e) {
    throw CLI::ConfigError(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw CLI::ConfigError("config: expected a JSON object");
  std::vector<CLI::ConfigItem> items;
  collect(j, *root_, {}, active_path(*root_), items);
  return items;
}

std::string JsonConfig::to_config(const CLI::App* app, bool, bool, std::string) const {
  ojson j;
  resolve_options(*app, j);
  return j.dump(2);
}

std::string resolved_config_json(const CLI::App& root) {
  ojson j = ojson::object();
  resolve_options(root, j);
  const CLI::App* node = &root;
  ojson* section = &j;
  for (const auto& name : active_path(root)) {
    node = node->get_subcommand(name);
    ojson& child = (*section)[name];
    child = ojson::object();
    resolve_options(*node, child);
    section = &child;
  }
  return j.dump();
}

}  // namespace mlasr::cli
