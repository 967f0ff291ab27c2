// Copyright 2026 The qsub Authors
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


// Prints one PASS/FAIL line per acceptance criterion; exits nonzero on any failure.

#include <iostream>

#include "qsub/acceptance.hpp"

int main() {
  bool ok = true;
  for (const auto& r : qsub::acceptance::run_all(qsub::acceptance::Sizes{})) {
    std::cout << qsub::acceptance::format_outcome(r) << std::endl;
    ok = ok && r.passed;
  }
  return ok ? 0 : 1;
}
