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

#include "ifipm/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace ifipm {

using nlohmann::json;

namespace {

[[noreturn]] void SchemaError(const std::string& message) {
  throw Error(ErrorCode::kParseError, message);
}

Vector ToVector(const json& j, const char* what, Index expected) {
  if (!j.is_array()) SchemaError(std::string(what) + " must be an array");
  if (static_cast<Index>(j.size()) != expected) {
    std::ostringstream os;
    os << what << " has " << j.size() << " entries, expected " << expected;
    SchemaError(os.str());
  }
  Vector v(expected);
  for (Index i = 0; i < expected; ++i) {
    const json& e = j[static_cast<std::size_t>(i)];
    if (!e.is_number()) SchemaError(std::string(what) + " entries must be numbers");
    v(i) = e.get<double>();
  }
  return v;
}

IndexList ToIndexList(const json& j, const char* what, Index limit) {
  if (!j.is_array()) SchemaError(std::string(what) + " must be an array");
  IndexList out;
  for (const json& e : j) {
    if (!e.is_number_integer()) SchemaError(std::string(what) + " entries must be integers");
    const Index v = e.get<Index>();
    if (v < 0 || v >= limit) SchemaError(std::string(what) + " index out of range");
    out.push_back(v);
  }
  return out;
}

json FromVector(const Vector& v) {
  json j = json::array();
  for (Index i = 0; i < v.size(); ++i) j.push_back(v(i));
  return j;
}

json FromIterate(const Iterate& it) {
  return json{{"x", FromVector(it.x)}, {"y", FromVector(it.y)}, {"s", FromVector(it.s)}};
}

Iterate ToIterate(const json& j, const char* what, Index m, Index n) {
  if (!j.is_object()) SchemaError(std::string(what) + " must be an object");
  for (const char* key : {"x", "y", "s"}) {
    if (!j.contains(key)) SchemaError(std::string(what) + " lacks '" + key + "'");
  }
  return Iterate{ToVector(j["x"], "x", n), ToVector(j["y"], "y", m),
                 ToVector(j["s"], "s", n)};
}

}  // namespace

InstanceFile FromGenerated(const GeneratedInstance& inst) {
  InstanceFile file{inst.lp, inst.optimal, inst.start, std::nullopt, inst.partition};
  return file;
}

InstanceFile ParseInstanceJson(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    SchemaError(std::string("malformed JSON: ") + e.what());
  }
  if (!root.is_object()) SchemaError("instance must be a JSON object");
  for (const char* key : {"m", "n", "A", "b", "c"}) {
    if (!root.contains(key)) SchemaError(std::string("missing key '") + key + "'");
  }
  if (!root["m"].is_number_integer() || !root["n"].is_number_integer()) {
    SchemaError("m and n must be integers");
  }
  const Index m = root["m"].get<Index>();
  const Index n = root["n"].get<Index>();
  if (m < 1 || n < 1) SchemaError("m and n must be positive");
  const json& rows = root["A"];
  if (!rows.is_array() || static_cast<Index>(rows.size()) != m) {
    SchemaError("A must be an array of m rows");
  }
  Matrix a(m, n);
  for (Index i = 0; i < m; ++i) a.row(i) = ToVector(rows[static_cast<std::size_t>(i)], "A row", n);

  InstanceFile file{LinearProgram(std::move(a), ToVector(root["b"], "b", m),
                                  ToVector(root["c"], "c", n)),
                    std::nullopt, std::nullopt, std::nullopt, std::nullopt};
  if (root.contains("optimal")) file.optimal = ToIterate(root["optimal"], "optimal", m, n);
  if (root.contains("interior")) file.interior = ToIterate(root["interior"], "interior", m, n);
  if (root.contains("basis")) file.basis = ToIndexList(root["basis"], "basis", n);
  if (root.contains("partition")) {
    const json& p = root["partition"];
    if (!p.is_object() || !p.contains("basic") || !p.contains("nonbasic")) {
      SchemaError("partition needs 'basic' and 'nonbasic'");
    }
    file.partition = Partition{ToIndexList(p["basic"], "basic", n),
                               ToIndexList(p["nonbasic"], "nonbasic", n)};
  }
  return file;
}

std::string InstanceToJson(const InstanceFile& inst) {
  const LinearProgram& lp = inst.lp;
  json root;
  root["m"] = lp.rows();
  root["n"] = lp.cols();
  json rows = json::array();
  for (Index i = 0; i < lp.rows(); ++i) rows.push_back(FromVector(lp.A().row(i).transpose()));
  root["A"] = std::move(rows);
  root["b"] = FromVector(lp.b());
  root["c"] = FromVector(lp.c());
  if (inst.optimal) root["optimal"] = FromIterate(*inst.optimal);
  if (inst.interior) root["interior"] = FromIterate(*inst.interior);
  if (inst.basis) root["basis"] = *inst.basis;
  if (inst.partition) {
    root["partition"] = json{{"basic", inst.partition->basic},
                             {"nonbasic", inst.partition->nonbasic}};
  }
  return root.dump(1) + "\n";
}

std::string IterateToJson(const Iterate& it) { return FromIterate(it).dump(1) + "\n"; }

InstanceFile ReadInstance(const std::filesystem::path& path) {
  return ParseInstanceJson(ReadTextFile(path));
}

void WriteInstance(const std::filesystem::path& path, const InstanceFile& inst) {
  WriteTextFile(path, InstanceToJson(inst));
}

std::string FormatDouble(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::string ReadTextFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void WriteTextFile(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path.string() + "'");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorCode::kIo, "write to '" + path.string() + "' failed");
}

}  // namespace ifipm
