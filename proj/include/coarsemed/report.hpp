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

#include <string>
#include <vector>

#include "coarsemed/diagram.hpp"
#include "coarsemed/io.hpp"

namespace coarsemed {

// Deterministic JSON record of one command: constants, witnesses and
// bound assertions. Key order is insertion order.
class RunReport {
 public:
  explicit RunReport(std::string command);

  void inputs(const std::vector<std::pair<std::string, std::string>>& digests);
  void constant(const std::string& name, const Dist& value);
  void constant(const std::string& name, io::Json value);
  void witness(const std::string& name, const FiniteMetricSpace& X, const std::vector<Point>& points);
  void witness(const std::string& name, io::Json value);
  void check(const std::string& name, const Dist& bound, const Dist& value, bool pass);
  void check(const BoundCheck& c);
  // A failure raised by an internal assertion.
  void failed(const std::string& name, const std::string& detail);
  io::Json& data() { return json_["data"]; }

  bool pass() const { return pass_; }
  std::string dump() const;

 private:
  io::Json json_;
  bool pass_ = true;
};

io::Json control_to_json(const ControlFunction& rho);
io::Json defect_to_json(const Defect& d, const FiniteMetricSpace& X);

}  // namespace coarsemed
