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

#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include <chainharvest/common/bytes.hpp>

namespace chainharvest {

using BigInt = boost::multiprecision::cpp_int;
using U256 = boost::multiprecision::uint256_t;

std::string to_decimal(const BigInt& value);
std::string to_decimal(const U256& value);

//! Parses a non-negative decimal string; throws std::invalid_argument.
U256 u256_from_decimal(std::string_view text);

//! Parses a 0x-prefixed hex quantity of at most 256 bits.
U256 u256_from_quantity(std::string_view hex);
std::string u256_to_quantity(const U256& value);

//! Big-endian 32-byte word.
Bytes u256_to_word(const U256& value);
U256 u256_from_big_endian(ByteView bytes);

}  // namespace chainharvest
