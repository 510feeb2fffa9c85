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


// Line-protocol model used by the bridge tests.
//
//   stub_model echo
//   stub_model drop N         no reply to every Nth request
//   stub_model sleep MS       sleeps before each reply
//   stub_model crash N        exits after N replies
//   stub_model malformed N    every Nth reply is not JSON
//   stub_model error N        every Nth reply carries an error
//   stub_model reverse        replies to pairs of requests in swapped order

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include "json.hpp"

using json = nlohmann::json;

int main(int argc, char** argv) {
  std::string mode = argc > 1 ? argv[1] : "echo";
  long n = argc > 2 ? std::atol(argv[2]) : 0;
  std::ios::sync_with_stdio(false);
  std::string line;
  long count = 0;
  std::optional<json> held;
  while (std::getline(std::cin, line)) {
    ++count;
    json req = json::parse(line);
    json resp{{"id", req["id"]}, {"text", req["text"]}};
    if (mode == "drop" && count % n == 0) continue;
    if (mode == "sleep") std::this_thread::sleep_for(std::chrono::milliseconds(n));
    if (mode == "malformed" && count % n == 0) {
      std::cout << "{not json" << std::endl;
      continue;
    }
    if (mode == "error" && count % n == 0) resp = json{{"id", req["id"]}, {"error", "refused"}};
    if (mode == "reverse") {
      if (!held) {
        held = resp;
        continue;
      }
      std::cout << resp.dump() << '\n' << held->dump() << std::endl;
      held.reset();
      continue;
    }
    std::cout << resp.dump() << std::endl;
    if (mode == "crash" && count >= n) return 3;
  }
  if (held) std::cout << held->dump() << std::endl;
  return 0;
}
