/* Copyright 2026 The detdiag Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef DETDIAG_ERRORS_H_
#define DETDIAG_ERRORS_H_

#include <stdexcept>
#include <string>
#include <utility>

namespace detdiag {

// Base of every error raised by the library. The CLI maps IoError to exit
// code 2 and everything else to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file: invalid JSON or a field of the wrong shape.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Well-formed input that breaks a domain invariant. `offending_id` names the
// record at fault when there is one.
class ValidationError : public Error {
 public:
  ValidationError(const std::string& message, std::string offending_id = {})
      : Error(offending_id.empty() ? message
                                   : message + " (id: " + offending_id + ")"),
        offending_id_(std::move(offending_id)) {}

  const std::string& offending_id() const { return offending_id_; }

 private:
  std::string offending_id_;
};

// Argument outside the domain of a numeric operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Prefix schedule for the false-positive distribution is unusable.
class ScheduleError : public Error {
 public:
  using Error::Error;
};

// Fewer than two distinct feature values; quantile bins are meaningless.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace detdiag

#endif  // DETDIAG_ERRORS_H_
