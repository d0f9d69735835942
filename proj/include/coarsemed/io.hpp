// Copyright 2026 The coarsemed Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "coarsemed/diagram.hpp"
#include "coarsemed/hhs.hpp"
#include "coarsemed/median.hpp"

namespace coarsemed::io {

using Json = nlohmann::ordered_json;

// Loads JSON documents and remembers a content digest for each file read.
class Loader {
 public:
  Json load(const std::filesystem::path& path);
  // A string is a file path (relative to base); anything else is inline.
  Json resolve(const Json& ref, const std::filesystem::path& base);
  const std::vector<std::pair<std::string, std::string>>& digests() const { return digests_; }

 private:
  std::vector<std::pair<std::string, std::string>> digests_;
};

std::string fnv1a64(const std::string& bytes);

// Integer or string ("p/q", "inf"); JSON floats are rejected.
Dist dist_from_json(const Json& j, const std::string& field);
Json dist_to_json(const Dist& d);

SpacePtr space_from_json(const Json& j);
Json space_to_json(const FiniteMetricSpace& X);
// "graph" kind with unit edges.
Json rips_to_json(const RipsGraph& rips);

// Accepts {"kind": ...} objects or a bare kind string.
TernaryOp median_from_json(const Json& j, const SpacePtr& space, Loader& loader, const std::filesystem::path& base);
Json median_to_json(const TernaryOp& mu);

std::vector<Point> map_table_from_json(const Json& j, std::size_t domain_size, std::size_t codomain_size,
                                       const std::string& field);

struct DiagramInput {
  UCDiagram diagram;
  std::vector<std::optional<TernaryOp>> medians;
  bool complete() const;
  std::vector<TernaryOp> all_medians() const;
};

DiagramInput diagram_from_json(const Json& j, Loader& loader, const std::filesystem::path& base);
Json diagram_to_json(const UCDiagram& d, const std::vector<TernaryOp>& medians);

Family family_from_json(const Json& j, Loader& loader, const std::filesystem::path& base,
                        const EnumerationBudget& budget = {});
Json family_to_json(const Family& F);

}  // namespace coarsemed::io
