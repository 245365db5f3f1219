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

#include <filesystem>

#include "doctest.h"
#include "ifipm/io.hpp"

using namespace ifipm;

namespace {

ErrorCode ParseCode(const std::string& text) {
  try {
    ParseInstanceJson(text);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected a parse failure");
  return ErrorCode::kIo;
}

}  // namespace

TEST_CASE("instance round trip is bit exact") {
  GeneratorSpec spec;
  spec.m = 4;
  spec.n = 9;
  spec.kappa_target = 1e5;
  spec.mode = GeneratorMode::kKnownOptimal;
  spec.seed = 8;
  const InstanceFile file = FromGenerated(Generate(spec));
  const std::string text = InstanceToJson(file);
  const InstanceFile back = ParseInstanceJson(text);
  CHECK(back.lp.A() == file.lp.A());
  CHECK(back.lp.b() == file.lp.b());
  CHECK(back.lp.c() == file.lp.c());
  REQUIRE(back.interior.has_value());
  CHECK(back.interior->x == file.interior->x);
  CHECK(back.interior->y == file.interior->y);
  CHECK(back.optimal->s == file.optimal->s);
  CHECK(back.partition->basic == file.partition->basic);
  CHECK(InstanceToJson(back) == text);

  const auto path = std::filesystem::temp_directory_path() / "ifipm_io_roundtrip.json";
  WriteInstance(path, file);
  CHECK(InstanceToJson(ReadInstance(path)) == text);
  std::filesystem::remove(path);
}

TEST_CASE("minimal instance") {
  const InstanceFile f =
      ParseInstanceJson(R"({"m":1,"n":2,"A":[[1,1]],"b":[2],"c":[1,3],"basis":[0]})");
  CHECK(f.lp.rows() == 1);
  CHECK(f.lp.cols() == 2);
  CHECK(f.basis == IndexList{0});
  CHECK_FALSE(f.interior.has_value());
}

TEST_CASE("malformed and invalid input") {
  CHECK(ParseCode("{\"m\": 1,") == ErrorCode::kParseError);
  CHECK(ParseCode("[1, 2]") == ErrorCode::kParseError);
  CHECK(ParseCode(R"({"m":1,"n":2,"A":[[1,1]],"b":[2]})") == ErrorCode::kParseError);
  CHECK(ParseCode(R"({"m":1,"n":2,"A":[[1]],"b":[2],"c":[1,1]})") == ErrorCode::kParseError);
  CHECK(ParseCode(R"({"m":1,"n":2,"A":[[1,"x"]],"b":[2],"c":[1,1]})") ==
        ErrorCode::kParseError);
  CHECK(ParseCode(R"({"m":1,"n":2,"A":[[1,1]],"b":[2],"c":[1,1],"basis":[5]})") ==
        ErrorCode::kParseError);
  CHECK(ParseCode(R"({"m":2,"n":2,"A":[[1,1],[2,2]],"b":[2,4],"c":[1,1]})") ==
        ErrorCode::kRankDeficient);
  CHECK_THROWS_AS(ReadInstance("/nonexistent/dir/file.json"), Error);
}

TEST_CASE("double formatting") {
  CHECK(FormatDouble(0.1) == "0.10000000000000001");
  CHECK(FormatDouble(std::nan("")) == "nan");
  CHECK(FormatDouble(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(std::stod(FormatDouble(1.0 / 3.0)) == 1.0 / 3.0);
}
