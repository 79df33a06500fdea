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

#ifndef CCDP_ERRORS_H_
#define CCDP_ERRORS_H_

#include <stdexcept>
#include <string>

namespace ccdp {

// Base class for all library errors. `exit_code()` is the process exit code
// the CLI maps the error to: 2 for computation errors (a well-posed question
// whose answer is "no" or "out of range"), 3 for invariant violations
// (malformed inputs, broken internal state).
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
  virtual int exit_code() const { return 2; }
};

// Malformed data: unparseable files, distributions that do not normalize,
// ragged mechanism tables, labels containing reserved delimiters.
class InvariantViolation : public Error {
 public:
  using Error::Error;
  int exit_code() const override { return 3; }
};

// File-format errors with field diagnostics.
class ParseError : public InvariantViolation {
 public:
  using InvariantViolation::InvariantViolation;
};

// A precondition on an operation argument failed (scale below 1, delta out
// of range, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Two distributions that must share a support do not.
class SupportMismatch : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

// No finite epsilon satisfies the request: some adversary separates the
// supports by more than the allowed delta.
class UnboundedEpsilon : public Error {
 public:
  using Error::Error;
};

// The mechanism is not pure-DP at the requested scale; carries the violating
// transcript in the message.
class NotDpAtScale : public Error {
 public:
  using Error::Error;
};

// A configuration limit (depth, alphabet size, adversary count, subset
// enumeration size) would be exceeded. Hard error, never silent truncation.
class LimitExceeded : public Error {
 public:
  using Error::Error;
};

// A bound query has no solution (e.g. delta_g smaller than the composed
// delta floor in the noninteractive optimal bound).
class NoSolution : public Error {
 public:
  using Error::Error;
};

}  // namespace ccdp

#endif  // CCDP_ERRORS_H_
