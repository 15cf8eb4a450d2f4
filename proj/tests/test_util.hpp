// Copyright 2026 The ftqec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FTQEC_TESTS_TEST_UTIL_HPP
#define FTQEC_TESTS_TEST_UTIL_HPP

#include <random>
#include <string>

#include "ftqec/code.hpp"
#include "ftqec/circuit.hpp"

namespace ftqec::test_util {

inline std::string asset(const std::string &rel) { return std::string(FTQEC_ASSET_DIR) + "/" + rel; }

inline StabilizerCode code_asset(const std::string &name) {
  if (name.ends_with(".merge")) return load_merge(asset("codes/" + name));
  return load_code(asset("codes/" + name + ".code"));
}

inline Circuit circuit_asset(const std::string &name) { return load_circuit(asset("circuits/" + name + ".cir")); }

inline PauliOperator random_pauli(size_t n, std::mt19937_64 &rng) {
  PauliOperator p(n);
  for (size_t q = 0; q < n; ++q) p.set(q, "IXZY"[rng() & 3]);
  return p;
}

}  // namespace ftqec::test_util

#endif  // FTQEC_TESTS_TEST_UTIL_HPP
