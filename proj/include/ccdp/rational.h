// Copyright 2026 The ccdp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CCDP_RATIONAL_H_
#define CCDP_RATIONAL_H_

#include <boost/multiprecision/cpp_int.hpp>
#include <string>

namespace ccdp {

// Arbitrary-precision rational; always stored in lowest terms with a
// positive denominator.
using Rat = boost::multiprecision::cpp_rational;
using Int = boost::multiprecision::cpp_int;

// Canonical wire form "num/den" (always with the slash, e.g. "0/1", "2/3").
std::string format_rat(const Rat& r);

// Parses "num/den" or a bare integer "num". Throws ParseError on anything
// else (including a zero denominator). `context` names the offending field
// in diagnostics.
Rat parse_rat(const std::string& s, const std::string& context = "");

// Parses a decimal string like "0.005" or "1e-5" into the exact rational it
// denotes. Throws ParseError if the string is not a finite decimal.
Rat rat_from_decimal(const std::string& s);

// Best rational approximation to `r` with denominator <= max_den, via the
// Stern-Brocot / continued-fraction walk. Used when CLI decimals feed exact
// paths; the conversion is echoed by callers.
Rat approximate_rat(const Rat& r, const Int& max_den);

double rat_to_double(const Rat& r);

// ln of a positive rational, for display next to exact scales.
double log_rat(const Rat& r);

// A rational constrained to [0, 1]. The checked boundary type for masses and
// delta parameters.
class Prob {
 public:
  Prob() : value_(0) {}
  explicit Prob(Rat value);
  static Prob parse(const std::string& s, const std::string& context = "");

  const Rat& rat() const { return value_; }
  std::string str() const { return format_rat(value_); }
  bool is_zero() const { return value_ == 0; }
  bool is_one() const { return value_ == 1; }

  friend bool operator==(const Prob& a, const Prob& b) {
    return a.value_ == b.value_;
  }
  friend bool operator<(const Prob& a, const Prob& b) {
    return a.value_ < b.value_;
  }
  friend bool operator<=(const Prob& a, const Prob& b) {
    return a.value_ <= b.value_;
  }

 private:
  Rat value_;
};

}  // namespace ccdp

#endif  // CCDP_RATIONAL_H_
