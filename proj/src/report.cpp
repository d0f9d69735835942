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

#include "coarsemed/report.hpp"

namespace coarsemed {

using io::Json;

RunReport::RunReport(std::string command) {
  json_["command"] = std::move(command);
  json_["inputs"] = Json::object();
  json_["constants"] = Json::object();
  json_["witnesses"] = Json::object();
  json_["assertions"] = Json::array();
  json_["data"] = Json::object();
}

void RunReport::inputs(const std::vector<std::pair<std::string, std::string>>& digests) {
  for (const auto& [name, digest] : digests) json_["inputs"][name] = digest;
}

void RunReport::constant(const std::string& name, const Dist& value) { json_["constants"][name] = value.to_string(); }

void RunReport::constant(const std::string& name, Json value) { json_["constants"][name] = std::move(value); }

void RunReport::witness(const std::string& name, const FiniteMetricSpace& X, const std::vector<Point>& points) {
  Json labels = Json::array();
  for (const auto p : points) labels.push_back(X.label(p));
  json_["witnesses"][name] = std::move(labels);
}

void RunReport::witness(const std::string& name, Json value) { json_["witnesses"][name] = std::move(value); }

void RunReport::check(const std::string& name, const Dist& bound, const Dist& value, bool pass) {
  json_["assertions"].push_back(
      {{"name", name}, {"bound", bound.to_string()}, {"value", value.to_string()}, {"pass", pass}});
  pass_ = pass_ && pass;
}

void RunReport::check(const BoundCheck& c) { check(c.name, c.bound, c.value, c.pass()); }

void RunReport::failed(const std::string& name, const std::string& detail) {
  json_["assertions"].push_back({{"name", name}, {"detail", detail}, {"pass", false}});
  pass_ = false;
}

std::string RunReport::dump() const {
  Json out = json_;
  out["pass"] = pass_;
  return out.dump(2) + "\n";
}

Json control_to_json(const ControlFunction& rho) {
  Json samples = Json::array();
  for (const auto& s : rho.samples()) samples.push_back({s.threshold.to_string(), s.bound.to_string()});
  Json j{{"samples", std::move(samples)}};
  if (rho.infinite_fiber_diameter()) j["infinite_fiber"] = rho.infinite_fiber_diameter()->to_string();
  return j;
}

Json defect_to_json(const Defect& d, const FiniteMetricSpace& X) {
  Json w = Json::array();
  for (const auto p : d.witness) w.push_back(X.label(p));
  return {{"value", d.value.to_string()}, {"witness", std::move(w)}, {"exhaustive", d.exhaustive}, {"vacuous", d.vacuous}};
}

}  // namespace coarsemed
