// Copyright 2026 The BiSELD Toolkit Authors
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

#ifndef BISELD_COMMON_ERROR_H_
#define BISELD_COMMON_ERROR_H_

#include <stdexcept>
#include <string>

namespace biseld {

enum class ErrorKind {
  kInvalidArgument,
  kIo,
  kParse,
  kDomain,
  kShape,
};

// Base error for everything the core throws. The C API maps `kind()` onto its
// status codes; the message already carries file/line/field context.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

inline Error InvalidArgument(const std::string& what) {
  return Error(ErrorKind::kInvalidArgument, what);
}
inline Error IoError(const std::string& what) {
  return Error(ErrorKind::kIo, what);
}
inline Error ParseError(const std::string& file, std::size_t line,
                        const std::string& what) {
  return Error(ErrorKind::kParse,
               file + ":" + std::to_string(line) + ": " + what);
}
inline Error DomainError(const std::string& what) {
  return Error(ErrorKind::kDomain, what);
}
inline Error ShapeError(const std::string& what) {
  return Error(ErrorKind::kShape, what);
}

}  // namespace biseld

#endif  // BISELD_COMMON_ERROR_H_
