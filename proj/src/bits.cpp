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

#include "pepfold/bits.hpp"

#include "pepfold/error.hpp"

namespace pepfold {

Bits parse_bits(std::string_view text) {
    Bits bits;
    bits.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (c == '0' || c == '1') {
            bits.push_back(static_cast<std::uint8_t>(c - '0'));
        } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
            continue;
        } else {
            throw DataError("invalid character '" + std::string(1, c) + "' at position " +
                            std::to_string(i) + " of bitstring");
        }
    }
    return bits;
}

std::string to_string(const Bits& bits) {
    std::string s(bits.size(), '0');
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i]) s[i] = '1';
    }
    return s;
}

Bits bits_from_index(std::uint64_t index, std::size_t num_vars) {
    Bits bits(num_vars, 0);
    for (std::size_t i = 0; i < num_vars; ++i) {
        bits[i] = static_cast<std::uint8_t>((index >> i) & 1U);
    }
    return bits;
}

std::uint64_t index_from_bits(const Bits& bits) {
    std::uint64_t index = 0;
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i]) index |= (std::uint64_t{1} << i);
    }
    return index;
}

}  // namespace pepfold
