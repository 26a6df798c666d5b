// Copyright 2026 The pepfold Authors
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

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace pepfold {

/// One byte per binary variable, each 0 or 1. Index i is variable (qubit) i,
/// which is character i of the textual form (leftmost = qubit 0).
using Bits = std::vector<std::uint8_t>;

/// Parses a string of '0'/'1' characters; whitespace is ignored.
Bits parse_bits(std::string_view text);

std::string to_string(const Bits& bits);

/// Bits of a basis-state index: variable i is bit i of `index`.
Bits bits_from_index(std::uint64_t index, std::size_t num_vars);

std::uint64_t index_from_bits(const Bits& bits);

}  // namespace pepfold
