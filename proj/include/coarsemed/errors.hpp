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

#include <stdexcept>
#include <string>

namespace coarsemed {

// Malformed input: bad JSON, inconsistent tables, violated preconditions on
// user-supplied data.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An enumeration cap was exceeded and the operation refused to run.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A bound that must hold by construction failed on concrete data.
class AssertionFailure : public std::logic_error {
 public:
  AssertionFailure(std::string name, const std::string& detail)
      : std::logic_error(name + ": " + detail), name_(std::move(name)) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

}  // namespace coarsemed
