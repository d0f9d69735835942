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

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

namespace coarsemed {

// Extended non-negative rational: the value type of every distance, defect
// and constant in the toolkit. Infinity absorbs addition and dominates every
// finite value.
class Dist {
 public:
  using Rational = boost::rational<std::int64_t>;

  Dist() = default;
  Dist(std::int64_t value);  // NOLINT(google-explicit-constructor)
  Dist(std::int64_t num, std::int64_t den);
  explicit Dist(Rational value);

  static Dist infinity();

  bool is_infinite() const { return infinite_; }
  bool is_finite() const { return !infinite_; }

  // Precondition: finite.
  const Rational& value() const;
  std::int64_t numerator() const { return value_.numerator(); }
  std::int64_t denominator() const { return value_.denominator(); }

  // "p/q" for finite values, "inf" otherwise.
  std::string to_string() const;
  // Accepts "inf", "p", "p/q" (non-negative).
  static Dist parse(std::string_view text);

  friend Dist operator+(const Dist& a, const Dist& b);
  friend Dist operator*(const Dist& a, const Dist& b);
  // Division by a positive integer.
  friend Dist operator/(const Dist& a, std::int64_t k);

  Dist& operator+=(const Dist& other) { return *this = *this + other; }

  friend bool operator==(const Dist& a, const Dist& b);
  friend std::strong_ordering operator<=>(const Dist& a, const Dist& b);

 private:
  bool infinite_ = false;
  Rational value_{0};
};

inline Dist max(const Dist& a, const Dist& b) { return a < b ? b : a; }
inline Dist min(const Dist& a, const Dist& b) { return b < a ? b : a; }

std::ostream& operator<<(std::ostream& os, const Dist& d);

}  // namespace coarsemed
