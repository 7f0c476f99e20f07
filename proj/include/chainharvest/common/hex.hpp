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

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <chainharvest/common/bytes.hpp>

namespace chainharvest {

class HexError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

//! Lowercase hex with 0x prefix.
std::string to_hex(ByteView bytes);

//! Accepts an optional 0x/0X prefix and either case. Odd digit counts are rejected.
Bytes from_hex(std::string_view hex);

//! Ethereum wire quantity: 0x-prefixed, no leading zeros, "0x0" for zero.
std::string to_quantity(uint64_t value);
uint64_t parse_quantity(std::string_view hex);

}  // namespace chainharvest
