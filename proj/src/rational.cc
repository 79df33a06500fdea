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

#include "ccdp/rational.h"

#include <cctype>
#include <cmath>
#include <cstdlib>

#include "ccdp/errors.h"

namespace ccdp {

namespace {

bool is_integer_token(const std::string& s) {
  if (s.empty()) return false;
  size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

std::string with_context(const std::string& msg, const std::string& context) {
  return context.empty() ? msg : msg + " (" + context + ")";
}

}  // namespace

std::string format_rat(const Rat& r) {
  return numerator(r).str() + "/" + denominator(r).str();
}

Rat parse_rat(const std::string& s, const std::string& context) {
  const size_t slash = s.find('/');
  if (slash == std::string::npos) {
    if (!is_integer_token(s)) {
      throw ParseError(with_context("bad rational '" + s + "'", context));
    }
    return Rat(Int(s));
  }
  const std::string num = s.substr(0, slash);
  const std::string den = s.substr(slash + 1);
  if (!is_integer_token(num) || !is_integer_token(den)) {
    throw ParseError(with_context("bad rational '" + s + "'", context));
  }
  Int d(den);
  if (d == 0) {
    throw ParseError(with_context("zero denominator in '" + s + "'", context));
  }
  return Rat(Int(num), d);
}

Rat rat_from_decimal(const std::string& s) {
  // [sign] digits [. digits] [e [sign] digits]
  size_t i = 0;
  bool negative = false;
  if (i < s.size() && (s[i] == '-' || s[i] == '+')) {
    negative = (s[i] == '-');
    ++i;
  }
  Int mantissa = 0;
  long frac_digits = 0;
  long exponent = 0;
  bool any_digit = false;
  for (; i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])); ++i) {
    mantissa = mantissa * 10 + (s[i] - '0');
    any_digit = true;
  }
  if (i < s.size() && s[i] == '.') {
    ++i;
    for (; i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]));
         ++i) {
      mantissa = mantissa * 10 + (s[i] - '0');
      ++frac_digits;
      any_digit = true;
    }
  }
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    ++i;
    bool exp_neg = false;
    if (i < s.size() && (s[i] == '-' || s[i] == '+')) {
      exp_neg = (s[i] == '-');
      ++i;
    }
    bool exp_digit = false;
    long e = 0;
    for (; i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]));
         ++i) {
      e = e * 10 + (s[i] - '0');
      if (e > 100000) throw ParseError("decimal exponent out of range: " + s);
      exp_digit = true;
    }
    if (!exp_digit) throw ParseError("bad decimal '" + s + "'");
    exponent = exp_neg ? -e : e;
  }
  if (!any_digit || i != s.size()) {
    throw ParseError("bad decimal '" + s + "'");
  }
  Rat value(mantissa);
  long pow10 = exponent - frac_digits;
  Int scale = 1;
  for (long k = 0; k < std::labs(pow10); ++k) scale *= 10;
  if (pow10 >= 0) {
    value *= Rat(scale);
  } else {
    value /= Rat(scale);
  }
  return negative ? -value : value;
}

Rat approximate_rat(const Rat& r, const Int& max_den) {
  if (denominator(r) <= max_den) return r;
  const bool negative = r < 0;
  Rat x = negative ? Rat(-r) : r;

  // Continued-fraction convergents p_k/q_k; on overflow of the denominator
  // bound, take the best semiconvergent.
  Int p0 = 1, q0 = 0;  // h_{-1}
  Int p1 = numerator(x) / denominator(x), q1 = 1;
  Rat frac = x - Rat(p1);
  while (frac != 0) {
    Rat inv = Rat(1) / frac;
    Int a = numerator(inv) / denominator(inv);
    frac = inv - Rat(a);
    Int p2 = a * p1 + p0;
    Int q2 = a * q1 + q0;
    if (q2 > max_den) {
      // Largest t with q0 + t*q1 <= max_den gives the best semiconvergent.
      Int t = (max_den - q0) / q1;
      Rat semi(p0 + t * p1, q0 + t * q1);
      Rat conv(p1, q1);
      Rat best = (abs(x - semi) < abs(x - conv)) ? semi : conv;
      return negative ? Rat(-best) : best;
    }
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
  }
  Rat best(p1, q1);
  return negative ? Rat(-best) : best;
}

double rat_to_double(const Rat& r) { return static_cast<double>(r); }

double log_rat(const Rat& r) {
  if (r <= 0) throw ParameterError("log of nonpositive rational");
  // log(num) - log(den), each via frexp-style scaling to stay in range.
  auto log_int = [](const Int& v) {
    const long bits = static_cast<long>(msb(v));
    if (bits < 512) return std::log(static_cast<double>(v));
    Int shifted = v >> (bits - 512);
    return std::log(static_cast<double>(shifted)) +
           (bits - 512) * std::log(2.0);
  };
  return log_int(numerator(r)) - log_int(denominator(r));
}

Prob::Prob(Rat value) : value_(std::move(value)) {
  if (value_ < 0 || value_ > 1) {
    throw InvariantViolation("probability out of [0,1]: " +
                             format_rat(value_));
  }
}

Prob Prob::parse(const std::string& s, const std::string& context) {
  Rat r = parse_rat(s, context);
  if (r < 0 || r > 1) {
    throw InvariantViolation(
        context.empty()
            ? "probability out of [0,1]: " + s
            : "probability out of [0,1]: " + s + " (" + context + ")");
  }
  return Prob(std::move(r));
}

}  // namespace ccdp
