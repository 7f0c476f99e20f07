/*
   Copyright 2026 The Chainharvest Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include <chainharvest/common/uint256.hpp>

#include <stdexcept>

#include <chainharvest/common/hex.hpp>

namespace chainharvest {

std::string to_decimal(const BigInt& value) { return value.str(); }

std::string to_decimal(const U256& value) { return value.str(); }

U256 u256_from_decimal(std::string_view text) {
    if (text.empty() || text.size() > 78) {
        throw std::invalid_argument{"decimal text out of range"};
    }
    BigInt acc{0};
    for (const char c : text) {
        if (c < '0' || c > '9') throw std::invalid_argument{"invalid decimal digit"};
        acc = acc * 10 + (c - '0');
    }
    if ((acc >> 256) != 0) {
        throw std::invalid_argument{"decimal value exceeds 256 bits"};
    }
    return static_cast<U256>(acc);
}

U256 u256_from_quantity(std::string_view hex) {
    if (hex.size() < 3 || hex[0] != '0' || (hex[1] != 'x' && hex[1] != 'X')) {
        throw HexError{"quantity must be 0x-prefixed and non-empty"};
    }
    hex.remove_prefix(2);
    if (hex.size() > 64) {
        throw HexError{"quantity exceeds 256 bits"};
    }
    std::string padded(hex.size() % 2, '0');
    padded.append(hex);
    return u256_from_big_endian(from_hex(padded));
}

std::string u256_to_quantity(const U256& value) {
    if (value == 0) return "0x0";
    std::string digits;
    U256 v = value;
    constexpr char kDigits[] = "0123456789abcdef";
    while (v != 0) {
        digits += kDigits[static_cast<unsigned>(v & 0xf)];
        v >>= 4;
    }
    return "0x" + std::string(digits.rbegin(), digits.rend());
}

Bytes u256_to_word(const U256& value) {
    Bytes word(32, 0);
    U256 v = value;
    for (int i = 31; i >= 0 && v != 0; --i) {
        word[static_cast<std::size_t>(i)] = static_cast<uint8_t>(v & 0xff);
        v >>= 8;
    }
    return word;
}

U256 u256_from_big_endian(ByteView bytes) {
    if (bytes.size() > 32) {
        throw std::invalid_argument{"more than 32 bytes for a 256-bit value"};
    }
    U256 v{0};
    for (const uint8_t b : bytes) {
        v = (v << 8) | b;
    }
    return v;
}

}  // namespace chainharvest
