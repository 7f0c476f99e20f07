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

#include <chainharvest/abi/value.hpp>

#include <chainharvest/abi/error.hpp>
#include <chainharvest/common/hex.hpp>

namespace chainharvest::abi {

using Kind = AbiType::Kind;
using nlohmann::json;

namespace {

    [[noreturn]] void mismatch(const AbiType& type, const std::string& why) {
        throw AbiError{AbiErrc::kTypeMismatch, "cannot convert " + type.canonical() + ": " + why};
    }

    BigInt parse_integer(const AbiType& type, const json& doc) {
        if (doc.is_number_integer()) {
            return doc.is_number_unsigned() ? BigInt{doc.get<uint64_t>()} : BigInt{doc.get<int64_t>()};
        }
        if (!doc.is_string()) mismatch(type, "expected decimal string");
        std::string text = doc.get<std::string>();
        bool negative = false;
        if (!text.empty() && text[0] == '-') {
            negative = true;
            text.erase(0, 1);
        }
        if (text.empty() || text.size() > 80) mismatch(type, "bad integer text");
        BigInt v{0};
        if (text.starts_with("0x") || text.starts_with("0X")) {
            for (const uint8_t b : from_hex(text)) v = (v << 8) | b;
        } else {
            for (const char c : text) {
                if (c < '0' || c > '9') mismatch(type, "bad decimal digit");
                v = v * 10 + (c - '0');
            }
        }
        return negative ? BigInt{-v} : v;
    }

    std::vector<Value> parse_items(const AbiType& type, const json& doc) {
        if (!doc.is_array()) mismatch(type, "expected array");
        std::vector<Value> items;
        if (type.kind() == Kind::kTuple) {
            if (doc.size() != type.components().size()) mismatch(type, "tuple arity");
            for (std::size_t i = 0; i < doc.size(); ++i) items.push_back(from_json(type.components()[i], doc[i]));
        } else {
            if (type.kind() == Kind::kFixedArray && doc.size() != type.length()) mismatch(type, "array length");
            for (const auto& item : doc) items.push_back(from_json(type.element(), item));
        }
        return items;
    }

}  // namespace

json to_json(const AbiType& type, const Value& value) {
    return std::visit(
        [&](const auto& v) -> json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, UnsignedInt> || std::is_same_v<T, SignedInt>) {
                return to_decimal(v.value);
            } else if constexpr (std::is_same_v<T, Address>) {
                return v.to_hex();
            } else if constexpr (std::is_same_v<T, bool>) {
                return v;
            } else if constexpr (std::is_same_v<T, Bytes>) {
                return chainharvest::to_hex(v);
            } else if constexpr (std::is_same_v<T, std::string>) {
                return v;
            } else {
                json arr = json::array();
                for (std::size_t i = 0; i < v.items.size(); ++i) {
                    const AbiType& t = type.kind() == Kind::kTuple ? type.components().at(i) : type.element();
                    arr.push_back(to_json(t, v.items[i]));
                }
                return arr;
            }
        },
        value.data);
}

Value from_json(const AbiType& type, const json& doc) {
    try {
        switch (type.kind()) {
            case Kind::kUint:
                return Value::uint(parse_integer(type, doc));
            case Kind::kInt:
                return Value::sint(parse_integer(type, doc));
            case Kind::kAddress:
                if (!doc.is_string()) mismatch(type, "expected hex string");
                return Value::address(Address::from_hex(doc.get<std::string>()));
            case Kind::kBool:
                if (!doc.is_boolean()) mismatch(type, "expected boolean");
                return Value::boolean(doc.get<bool>());
            case Kind::kFixedBytes:
            case Kind::kBytes:
                if (!doc.is_string()) mismatch(type, "expected hex string");
                return Value::bytes(from_hex(doc.get<std::string>()));
            case Kind::kString:
                if (!doc.is_string()) mismatch(type, "expected string");
                return Value::string(doc.get<std::string>());
            case Kind::kFixedArray:
            case Kind::kArray:
                return Value::list(parse_items(type, doc));
            case Kind::kTuple:
                return Value::tuple(parse_items(type, doc));
        }
    } catch (const HexError& e) {
        mismatch(type, e.what());
    }
    mismatch(type, "unknown kind");
}

}  // namespace chainharvest::abi
