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

#include "coarsemed/dist.hpp"

#include <charconv>
#include <ostream>

#include "coarsemed/errors.hpp"

namespace coarsemed {

namespace {

std::int64_t parse_int(std::string_view s, std::string_view whole) {
  std::int64_t v = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || s.empty()) {
    throw InputError("malformed rational '" + std::string(whole) + "'");
  }
  return v;
}

}  // namespace

Dist::Dist(std::int64_t value) : Dist(Rational(value)) {}

Dist::Dist(std::int64_t num, std::int64_t den) {
  if (den == 0) throw InputError("rational with zero denominator");
  *this = Dist(Rational(num, den));
}

Dist::Dist(Rational value) : value_(value) {
  if (value_ < 0) throw InputError("negative distance " + std::to_string(value_.numerator()));
}

Dist Dist::infinity() {
  Dist d;
  d.infinite_ = true;
  return d;
}

const Dist::Rational& Dist::value() const {
  if (infinite_) throw std::logic_error("value() on infinite Dist");
  return value_;
}

std::string Dist::to_string() const {
  if (infinite_) return "inf";
  return std::to_string(value_.numerator()) + "/" + std::to_string(value_.denominator());
}

Dist Dist::parse(std::string_view text) {
  if (text == "inf") return infinity();
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Dist(parse_int(text, text));
  return Dist(parse_int(text.substr(0, slash), text), parse_int(text.substr(slash + 1), text));
}

Dist operator+(const Dist& a, const Dist& b) {
  if (a.infinite_ || b.infinite_) return Dist::infinity();
  return Dist(a.value_ + b.value_);
}

Dist operator*(const Dist& a, const Dist& b) {
  if ((a.infinite_ && b == Dist(0)) || (b.infinite_ && a == Dist(0))) return Dist(0);
  if (a.infinite_ || b.infinite_) return Dist::infinity();
  return Dist(a.value_ * b.value_);
}

Dist operator/(const Dist& a, std::int64_t k) {
  if (k <= 0) throw std::invalid_argument("Dist division by non-positive integer");
  if (a.infinite_) return a;
  return Dist(a.value_ / k);
}

bool operator==(const Dist& a, const Dist& b) {
  if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
  return a.value_ == b.value_;
}

std::strong_ordering operator<=>(const Dist& a, const Dist& b) {
  if (a.infinite_ || b.infinite_) {
    if (a.infinite_ == b.infinite_) return std::strong_ordering::equal;
    return a.infinite_ ? std::strong_ordering::greater : std::strong_ordering::less;
  }
  if (a.value_ == b.value_) return std::strong_ordering::equal;
  return a.value_ < b.value_ ? std::strong_ordering::less : std::strong_ordering::greater;
}

std::ostream& operator<<(std::ostream& os, const Dist& d) { return os << d.to_string(); }

}  // namespace coarsemed
