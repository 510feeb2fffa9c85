// Copyright (c) 2026 The itnaug Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Entity rows with known spoken variants, shared by the generator tests
// and the acceptance run.

#pragma once

#include <string>
#include <vector>

namespace itnaug::testing {

struct GoldenRow {
  std::string written;
  std::vector<std::string> variants;
};

inline const std::vector<GoldenRow>& golden_rows() {
  static const std::vector<GoldenRow> rows = {
      {"6:15 am",
       {"six fifteen a m", "six fifteen in the morning", "six fifteen", "six past fifteen a m",
        "quarter past six a m", "quarter past six morning", "six and quarter a m"}},
      {"$1.20",
       {"one dollar and twenty cents", "one dollar twenty cents", "one dollar two zero cents",
        "one point two zero dollars", "a dollar twenty cents"}},
      {"123", {"one hundred twenty three", "one twenty three", "one hundred and twenty three", "one two three"}},
      {"$123",
       {"one hundred twenty three dollars", "one hundred twenty three dollar", "one twenty three dollars",
        "one twenty three dollar", "one hundred and twenty three dollars", "one twenty three dollars zero cents"}},
      {"123g",
       {"one hundred twenty three grams", "one hundred twenty three gram", "one twenty three grams",
        "one twenty three gram", "one hundred and twenty three grams", "one hundred and twenty three gram",
        "one two three grams"}},
  };
  return rows;
}

}  // namespace itnaug::testing
