// semshift/common.hpp
//
// Copyright 2026 the semshift authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

namespace semshift {

inline constexpr std::string_view kVersion = "1.0.0";
inline constexpr std::string_view kModelMagic = "SSEM1";

/// Base class for all errors thrown by the library.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// File could not be opened, read, or written.
struct io_error : error {
  using error::error;
};

/// Input data violates a contract (bad values, empty bins, unknown words).
struct data_error : error {
  using error::error;
};

/// On-disk artifact is malformed (bad magic, truncation, version mismatch).
struct format_error : error {
  using error::error;
};

/// A computation is undefined on the given inputs (zero vectors, zero variance).
struct numeric_error : error {
  using error::error;
};

namespace detail {

// FNV-1a. Used to derive per-word RNG streams from a user seed.
inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::mt19937_64 seeded_engine(std::uint64_t seed, std::string_view tag) {
  return std::mt19937_64{seed ^ fnv1a64(tag)};
}

} // namespace detail

/// Writes `payload` to `path` atomically: the content lands in a temporary
/// file next to the target and is renamed into place, so readers never see
/// a partially written file.
inline void atomic_write_file(const std::string& path, const std::string& payload) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("cannot open for writing: " + tmp.string());
    out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
    out.flush();
    if (!out) throw io_error("write failed: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw io_error("cannot rename " + tmp.string() + " to " + target.string());
  }
}

inline std::string read_entire_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open: " + path);
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return data;
}

} // namespace semshift
