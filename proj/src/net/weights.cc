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

#include "net/weights.h"

#include <fstream>

#include "common/binio.h"
#include "common/error.h"

namespace biseld::net {

std::string ShapeString(const Shape& s) {
  std::string out = "(";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(s[i]);
  }
  return out + ")";
}

void Weights::Set(const std::string& name, Tensor value) {
  if (value.data.size() != NumElements(value.shape)) {
    throw ShapeError("weights: data size does not match shape for " + name);
  }
  arrays_[name] = std::move(value);
}

bool Weights::Has(const std::string& name) const { return arrays_.count(name) > 0; }

const Tensor& Weights::Get(const std::string& name, const Shape& expected) const {
  const auto it = arrays_.find(name);
  if (it == arrays_.end()) throw InvalidArgument("weights: missing array " + name);
  if (it->second.shape != expected) {
    throw ShapeError("weights: " + name + " has shape " + ShapeString(it->second.shape) +
                     ", expected " + ShapeString(expected));
  }
  return it->second;
}

void SaveWeights(const std::string& path, const Weights& w) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path + " for writing");
  os.write("BSWT", 4);
  WriteU32(os, 1);
  WriteU32(os, static_cast<std::uint32_t>(w.arrays().size()));
  for (const auto& [name, t] : w.arrays()) {
    WriteU32(os, static_cast<std::uint32_t>(name.size()));
    os.write(name.data(), static_cast<std::streamsize>(name.size()));
    WriteU32(os, 0);
    WriteU32(os, static_cast<std::uint32_t>(t.shape.size()));
    for (std::size_t d : t.shape) WriteU32(os, static_cast<std::uint32_t>(d));
    for (double v : t.data) WriteF32(os, static_cast<float>(v));
  }
  if (!os) throw IoError("write failed: " + path);
}

Weights LoadWeights(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path);
  char magic[4];
  if (!is.read(magic, 4) || std::string(magic, 4) != "BSWT") {
    throw Error(ErrorKind::kParse, path + ": not a weight file");
  }
  if (ReadU32(is, path) != 1) throw Error(ErrorKind::kParse, path + ": unsupported version");
  const std::uint32_t count = ReadU32(is, path);
  Weights w;
  for (std::uint32_t i = 0; i < count; ++i) {
    const std::uint32_t len = ReadU32(is, path);
    if (len == 0 || len > 4096) throw Error(ErrorKind::kParse, path + ": bad array name");
    std::string name(len, '\0');
    if (!is.read(name.data(), len)) throw Error(ErrorKind::kParse, path + ": truncated file");
    if (ReadU32(is, path) != 0) throw Error(ErrorKind::kParse, path + ": unsupported dtype");
    const std::uint32_t rank = ReadU32(is, path);
    if (rank > 8) throw Error(ErrorKind::kParse, path + ": bad rank for " + name);
    Shape shape(rank);
    for (auto& d : shape) d = ReadU32(is, path);
    Tensor t(shape);
    for (double& v : t.data) v = ReadF32(is, path);
    w.Set(name, std::move(t));
  }
  return w;
}

}  // namespace biseld::net
