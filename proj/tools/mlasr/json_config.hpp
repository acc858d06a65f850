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
#pragma once

#include <istream>
#include <string>
#include <vector>

#include <CLI11.hpp>

namespace mlasr::cli {

// Reads a JSON object whose keys mirror long flag names. Nested objects keyed
// by subcommand name scope their contents to that subcommand; top-level
// scalars apply to the subcommand actually invoked. Values for subcommands
// that were not invoked are ignored. Flags given on the command line win.
class JsonConfig : public CLI::Config {
 public:
  explicit JsonConfig(const CLI::App* root) : root_(root) {}

  std::string to_config(const CLI::App* app, bool default_also, bool write_description,
                        std::string prefix) const override;
  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override;

 private:
  const CLI::App* root_;
};

// Names of the invoked subcommand chain, outermost first.
std::vector<std::string> active_path(const CLI::App& root);

// Fully resolved option values of the invoked subcommand chain as a JSON
// object (flag values as given or defaulted). Execution-only options
// (help, config, jobs, out) are omitted so reports do not depend on them.
std::string resolved_config_json(const CLI::App& root);

}  // namespace mlasr::cli
