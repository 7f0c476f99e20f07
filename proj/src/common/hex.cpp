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

#include <chainharvest/common/hex.hpp>

#include <charconv>

namespace chainharvest {

namespace {

    constexpr char kDigits[] = "0123456789abcdef";

    int nibble(char c) {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        return -1;
    }

    std::string_view strip_prefix(std::string_view hex) {
        if (hex.size() >= 2 && hex[0] == '0' && (hex[1] == 'x' || hex[1] == 'X')) {
            hex.remove_prefix(2);
        }
        return hex;
    }

}  // namespace

std::string to_hex(ByteView bytes) {
    std::string out;
    out.reserve(2 + bytes.size() * 2);
    out += "0x";
    for (const uint8_t b : bytes) {
        out += kDigits[b >> 4];
        out += kDigits[b & 0x0f];
    }
    return out;
}

Bytes from_hex(std::string_view hex) {
    hex = strip_prefix(hex);
    if (hex.size() % 2 != 0) {
        throw HexError{"odd number of hex digits"};
    }
    Bytes out;
    out.reserve(hex.size() / 2);
    for (std::size_t i = 0; i < hex.size(); i += 2) {
        const int hi = nibble(hex[i]);
        const int lo = nibble(hex[i + 1]);
        if (hi < 0 || lo < 0) {
            throw HexError{"invalid hex digit"};
        }
        out.push_back(static_cast<uint8_t>((hi << 4) | lo));
    }
    return out;
}

std::string to_quantity(uint64_t value) {
    char buf[2 + 16];
    buf[0] = '0';
    buf[1] = 'x';
    const auto [end, ec] = std::to_chars(buf + 2, buf + sizeof(buf), value, 16);
    return {buf, end};
}

uint64_t parse_quantity(std::string_view hex) {
    if (hex.size() < 3 || hex[0] != '0' || (hex[1] != 'x' && hex[1] != 'X')) {
        throw HexError{"quantity must be 0x-prefixed and non-empty"};
    }
    hex.remove_prefix(2);
    if (hex.size() > 16) {
        throw HexError{"quantity exceeds 64 bits"};
    }
    uint64_t value{0};
    for (const char c : hex) {
        const int n = nibble(c);
        if (n < 0) throw HexError{"invalid hex digit in quantity"};
        value = (value << 4) | static_cast<uint64_t>(n);
    }
    return value;
}

}  // namespace chainharvest
