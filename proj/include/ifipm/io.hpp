// Copyright 2026 The ifipm Authors
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

// Instance JSON:
//
//   {"m": 2, "n": 4,
//    "A": [[...], [...]],            row-major
//    "b": [...], "c": [...],
//    "optimal":  {"x": [...], "y": [...], "s": [...]},   optional
//    "interior": {"x": [...], "y": [...], "s": [...]},   optional
//    "basis": [0, 3],                                     optional
//    "partition": {"basic": [...], "nonbasic": [...]}}    optional
//
// Doubles are written in shortest round-trip form, so a write/read cycle is
// bit-exact.

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "ifipm/generator.hpp"
#include "ifipm/problem.hpp"

namespace ifipm {

struct InstanceFile {
  LinearProgram lp;
  std::optional<Iterate> optimal;
  std::optional<Iterate> interior;
  std::optional<IndexList> basis;
  std::optional<Partition> partition;
};

InstanceFile FromGenerated(const GeneratedInstance& inst);

// Throws kParseError on malformed JSON or schema violations; instance
// validation errors (rank, dimensions) propagate with their own codes.
InstanceFile ParseInstanceJson(std::string_view text);
std::string InstanceToJson(const InstanceFile& inst);

InstanceFile ReadInstance(const std::filesystem::path& path);
void WriteInstance(const std::filesystem::path& path, const InstanceFile& inst);

std::string IterateToJson(const Iterate& it);

// 17 significant digits, "nan"/"inf" spelled out.
std::string FormatDouble(double value);

std::string ReadTextFile(const std::filesystem::path& path);
// Writes with LF line endings exactly as given.
void WriteTextFile(const std::filesystem::path& path, std::string_view text);

}  // namespace ifipm
