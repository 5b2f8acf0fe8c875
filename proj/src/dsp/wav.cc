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

#include "dsp/wav.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>

#include "common/error.h"

namespace biseld::dsp {
namespace {

std::uint32_t ReadU32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}
std::uint16_t ReadU16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}
void PutU32(std::string& s, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) s.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
void PutU16(std::string& s, std::uint16_t v) {
  s.push_back(static_cast<char>(v & 0xff));
  s.push_back(static_cast<char>(v >> 8));
}

}  // namespace

Audio ReadWav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open WAV file " + path);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw Error(ErrorKind::kParse, path + ": not a RIFF/WAVE file");
  }
  int format = 0, channels = 0, bits = 0;
  std::uint32_t fs = 0;
  const unsigned char* data = nullptr;
  std::size_t data_len = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* chunk = bytes.data() + pos;
    std::uint32_t len = ReadU32(chunk + 4);
    std::size_t body = pos + 8;
    if (body + len > bytes.size()) len = static_cast<std::uint32_t>(bytes.size() - body);
    if (std::memcmp(chunk, "fmt ", 4) == 0 && len >= 16) {
      format = ReadU16(bytes.data() + body);
      channels = ReadU16(bytes.data() + body + 2);
      fs = ReadU32(bytes.data() + body + 4);
      bits = ReadU16(bytes.data() + body + 14);
      if (format == 0xFFFE && len >= 26) format = ReadU16(bytes.data() + body + 24);
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = bytes.data() + body;
      data_len = len;
    }
    pos = body + len + (len & 1);
  }
  if (channels <= 0 || fs == 0 || data == nullptr) {
    throw Error(ErrorKind::kParse, path + ": missing fmt or data chunk");
  }
  const bool is_float = format == 3 && bits == 32;
  if (!(format == 1 && (bits == 16 || bits == 24 || bits == 32)) && !is_float) {
    throw Error(ErrorKind::kParse, path + ": unsupported WAV encoding (format " +
                                       std::to_string(format) + ", " +
                                       std::to_string(bits) + " bits)");
  }
  const std::size_t bytes_per = static_cast<std::size_t>(bits / 8);
  const std::size_t frames = data_len / (bytes_per * channels);
  Audio audio;
  audio.fs = static_cast<int>(fs);
  audio.channels.assign(channels, std::vector<double>(frames));
  for (std::size_t n = 0; n < frames; ++n) {
    for (int c = 0; c < channels; ++c) {
      const unsigned char* p = data + (n * channels + c) * bytes_per;
      double v = 0.0;
      if (is_float) {
        float f;
        std::memcpy(&f, p, 4);
        v = f;
      } else if (bits == 16) {
        v = static_cast<std::int16_t>(ReadU16(p)) / 32768.0;
      } else if (bits == 24) {
        std::int32_t s = static_cast<std::int32_t>((p[0] << 8) | (p[1] << 16) | (p[2] << 24)) >> 8;
        v = s / 8388608.0;
      } else {
        v = static_cast<std::int32_t>(ReadU32(p)) / 2147483648.0;
      }
      audio.channels[c][n] = v;
    }
  }
  return audio;
}

void WriteWav16(const std::string& path, const Audio& audio) {
  const std::size_t channels = audio.channels.size();
  if (channels == 0 || audio.fs <= 0) throw InvalidArgument("WriteWav16: empty audio");
  const std::size_t frames = audio.frames();
  for (const auto& ch : audio.channels) {
    if (ch.size() != frames) throw InvalidArgument("WriteWav16: ragged channels");
  }
  const std::uint32_t data_len = static_cast<std::uint32_t>(frames * channels * 2);
  std::string out;
  out.reserve(44 + data_len);
  out += "RIFF";
  PutU32(out, 36 + data_len);
  out += "WAVEfmt ";
  PutU32(out, 16);
  PutU16(out, 1);
  PutU16(out, static_cast<std::uint16_t>(channels));
  PutU32(out, static_cast<std::uint32_t>(audio.fs));
  PutU32(out, static_cast<std::uint32_t>(audio.fs * channels * 2));
  PutU16(out, static_cast<std::uint16_t>(channels * 2));
  PutU16(out, 16);
  out += "data";
  PutU32(out, data_len);
  for (std::size_t n = 0; n < frames; ++n) {
    for (std::size_t c = 0; c < channels; ++c) {
      const long q = std::clamp(std::lround(audio.channels[c][n] * 32768.0), -32768L, 32767L);
      PutU16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
    }
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write WAV file " + path);
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw IoError("short write to " + path);
}

}  // namespace biseld::dsp
