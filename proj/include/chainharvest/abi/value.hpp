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
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include <chainharvest/abi/type.hpp>
#include <chainharvest/chain/types.hpp>
#include <chainharvest/common/uint256.hpp>

namespace chainharvest::abi {

struct Value;

struct UnsignedInt {
    BigInt value;
};

struct SignedInt {
    BigInt value;
};

struct ValueList {
    std::vector<Value> items;
};

struct ValueTuple {
    std::vector<Value> items;
};

//! Decoded (or to-be-encoded) ABI value. Fixed and dynamic byte strings share the Bytes alternative;
//! the accompanying AbiType disambiguates.
struct Value {
    using Storage = std::variant<UnsignedInt, SignedInt, Address, bool, Bytes, std::string, ValueList, ValueTuple>;

    Storage data;

    static Value uint(BigInt v) { return {UnsignedInt{std::move(v)}}; }
    static Value sint(BigInt v) { return {SignedInt{std::move(v)}}; }
    static Value address(const Address& a) { return {a}; }
    static Value boolean(bool b) { return {b}; }
    static Value bytes(Bytes b) { return {std::move(b)}; }
    static Value string(std::string s) { return {std::move(s)}; }
    static Value list(std::vector<Value> items) { return {ValueList{std::move(items)}}; }
    static Value tuple(std::vector<Value> items) { return {ValueTuple{std::move(items)}}; }
};

inline bool operator==(const Value& a, const Value& b);
inline bool operator==(const UnsignedInt& a, const UnsignedInt& b) { return a.value == b.value; }
inline bool operator==(const SignedInt& a, const SignedInt& b) { return a.value == b.value; }
inline bool operator==(const ValueList& a, const ValueList& b) { return a.items == b.items; }
inline bool operator==(const ValueTuple& a, const ValueTuple& b) { return a.items == b.items; }
inline bool operator==(const Value& a, const Value& b) { return a.data == b.data; }

//! Store form: integers as decimal text, byte strings and addresses as 0x-hex,
//! booleans as true/false, arrays and tuples as nested arrays.
nlohmann::json to_json(const AbiType& type, const Value& value);

//! Inverse of to_json. Throws AbiError{kTypeMismatch} on shape errors.
Value from_json(const AbiType& type, const nlohmann::json& doc);

}  // namespace chainharvest::abi
