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

#ifndef BISELD_COMMON_BINIO_H_
#define BISELD_COMMON_BINIO_H_

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>

#include "common/error.h"

namespace biseld {

// Little-endian scalar I/O independent of host byte order.
inline void WriteU32(std::ostream& os, std::uint32_t v) {
  const char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                     static_cast<char>((v >> 16) & 0xff),
                     static_cast<char>((v >> 24) & 0xff)};
  os.write(b, 4);
}

inline void WriteF32(std::ostream& os, float f) {
  WriteU32(os, std::bit_cast<std::uint32_t>(f));
}

inline std::uint32_t ReadU32(std::istream& is, const std::string& what) {
  unsigned char b[4];
  if (!is.read(reinterpret_cast<char*>(b), 4)) {
    throw Error(ErrorKind::kParse, what + ": truncated file");
  }
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) |
         (static_cast<std::uint32_t>(b[3]) << 24);
}

inline float ReadF32(std::istream& is, const std::string& what) {
  return std::bit_cast<float>(ReadU32(is, what));
}

}  // namespace biseld

#endif  // BISELD_COMMON_BINIO_H_
