// Copyright 2026 The ldsc Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ldsc/errors.hpp"
#include "ldsc/numerics/matrix.hpp"

namespace ldsc {

// On-disk layout (all integers unsigned 32-bit little-endian):
//
//   "LDSCLSTM1"                       9-byte magic
//   meta_len, meta bytes              UTF-8 text block (model metadata)
//   count                             number of parameter records
//   count x { name_len, name, rows, cols, rows*cols IEEE-754 doubles LE }
//
// Values are stored row-major. See docs/checkpoint.md.
inline constexpr std::string_view kCheckpointMagic = "LDSCLSTM1";

struct NamedMatrix {
  std::string name;
  Matrix value;
};

struct Checkpoint {
  std::string metadata;
  std::vector<NamedMatrix> tensors;

  const Matrix* find(const std::string& name) const {
    for (const auto& t : tensors) {
      if (t.name == name) return &t.value;
    }
    return nullptr;
  }
};

namespace detail {

inline void put_u32(std::ostream& os, std::uint32_t v) {
  std::array<char, 4> b{};
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  os.write(b.data(), 4);
}

inline void put_f64(std::ostream& os, double d) {
  const auto v = std::bit_cast<std::uint64_t>(d);
  std::array<char, 8> b{};
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  os.write(b.data(), 8);
}

inline std::uint32_t get_u32(std::istream& is) {
  std::array<unsigned char, 4> b{};
  if (!is.read(reinterpret_cast<char*>(b.data()), 4)) {
    throw IoError("truncated checkpoint");
  }
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

inline double get_f64(std::istream& is) {
  std::array<unsigned char, 8> b{};
  if (!is.read(reinterpret_cast<char*>(b.data()), 8)) {
    throw IoError("truncated checkpoint");
  }
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return std::bit_cast<double>(v);
}

inline std::string get_bytes(std::istream& is, std::size_t n) {
  std::string s(n, '\0');
  if (n > 0 && !is.read(s.data(), static_cast<std::streamsize>(n))) {
    throw IoError("truncated checkpoint");
  }
  return s;
}

}  // namespace detail

inline void write_checkpoint(std::ostream& os, const Checkpoint& ckpt) {
  os.write(kCheckpointMagic.data(),
           static_cast<std::streamsize>(kCheckpointMagic.size()));
  detail::put_u32(os, static_cast<std::uint32_t>(ckpt.metadata.size()));
  os.write(ckpt.metadata.data(),
           static_cast<std::streamsize>(ckpt.metadata.size()));
  detail::put_u32(os, static_cast<std::uint32_t>(ckpt.tensors.size()));
  for (const auto& t : ckpt.tensors) {
    detail::put_u32(os, static_cast<std::uint32_t>(t.name.size()));
    os.write(t.name.data(), static_cast<std::streamsize>(t.name.size()));
    detail::put_u32(os, static_cast<std::uint32_t>(t.value.rows()));
    detail::put_u32(os, static_cast<std::uint32_t>(t.value.cols()));
    for (double v : t.value.data()) detail::put_f64(os, v);
  }
}

inline Checkpoint read_checkpoint(std::istream& is) {
  const std::string magic = detail::get_bytes(is, kCheckpointMagic.size());
  if (magic != kCheckpointMagic) throw IoError("bad checkpoint magic");
  Checkpoint ckpt;
  ckpt.metadata = detail::get_bytes(is, detail::get_u32(is));
  const std::uint32_t count = detail::get_u32(is);
  ckpt.tensors.reserve(count);
  for (std::uint32_t k = 0; k < count; ++k) {
    NamedMatrix t;
    t.name = detail::get_bytes(is, detail::get_u32(is));
    const std::uint32_t rows = detail::get_u32(is);
    const std::uint32_t cols = detail::get_u32(is);
    t.value = Matrix(rows, cols);
    for (double& v : t.value.data()) v = detail::get_f64(is);
    ckpt.tensors.push_back(std::move(t));
  }
  return ckpt;
}

inline void save_checkpoint(const std::filesystem::path& path,
                            const Checkpoint& ckpt) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot write " + path.string());
  write_checkpoint(os, ckpt);
  if (!os) throw IoError("write failed: " + path.string());
}

inline Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path.string());
  return read_checkpoint(is);
}

}  // namespace ldsc
