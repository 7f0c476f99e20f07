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

#include "random_abi.hpp"

namespace chainharvest::test {

using abi::AbiType;
using abi::Value;
using Kind = AbiType::Kind;

namespace {

    BigInt random_bits(Rng& rng, unsigned bits) {
        BigInt v{0};
        for (unsigned produced = 0; produced < bits; produced += 64) v = (v << 64) | rng.next_u64();
        return v & ((BigInt{1} << bits) - 1);
    }

    BigInt random_unsigned(Rng& rng, unsigned bits) {
        const BigInt max = (BigInt{1} << bits) - 1;
        switch (rng.index(5)) {
            case 0:
                return 0;
            case 1:
                return max;
            case 2:
                return BigInt{rng.index(1000)} & max;
            default:
                return random_bits(rng, static_cast<unsigned>(1 + rng.index(bits)));
        }
    }

    BigInt random_signed(Rng& rng, unsigned bits) {
        const BigInt limit = BigInt{1} << (bits - 1);
        switch (rng.index(6)) {
            case 0:
                return 0;
            case 1:
                return limit - 1;
            case 2:
                return -limit;
            case 3:
                return -1;
            default: {
                BigInt v = random_bits(rng, bits - 1);
                return rng.index(2) == 0 ? v : BigInt{-v - 1};
            }
        }
    }

    Bytes random_bytes(Rng& rng, std::size_t n) {
        Bytes b(n);
        for (auto& x : b) x = static_cast<uint8_t>(rng.next_u64());
        return b;
    }

}  // namespace

AbiType random_type(Rng& rng, std::size_t max_depth) {
    const std::size_t choices = max_depth > 0 ? 10 : 7;
    switch (rng.index(choices)) {
        case 0:
            return AbiType::uint(static_cast<unsigned>(8 * (1 + rng.index(32))));
        case 1:
            return AbiType::sint(static_cast<unsigned>(8 * (1 + rng.index(32))));
        case 2:
            return AbiType::address();
        case 3:
            return AbiType::boolean();
        case 4:
            return AbiType::fixed_bytes(1 + rng.index(32));
        case 5:
            return AbiType::bytes();
        case 6:
            return AbiType::string();
        case 7:
            return AbiType::fixed_array(random_type(rng, max_depth - 1), 1 + rng.index(3));
        case 8:
            return AbiType::array(random_type(rng, max_depth - 1));
        default: {
            std::vector<AbiType> c;
            const std::size_t n = 1 + rng.index(3);
            for (std::size_t i = 0; i < n; ++i) c.push_back(random_type(rng, max_depth - 1));
            return AbiType::tuple(std::move(c));
        }
    }
}

Value random_value(Rng& rng, const AbiType& type) {
    switch (type.kind()) {
        case Kind::kUint:
            return Value::uint(random_unsigned(rng, type.bits()));
        case Kind::kInt:
            return Value::sint(random_signed(rng, type.bits()));
        case Kind::kAddress: {
            Address a;
            for (auto& b : a.bytes()) b = static_cast<uint8_t>(rng.next_u64());
            return Value::address(a);
        }
        case Kind::kBool:
            return Value::boolean(rng.index(2) == 1);
        case Kind::kFixedBytes:
            return Value::bytes(random_bytes(rng, type.length()));
        case Kind::kBytes:
            return Value::bytes(random_bytes(rng, rng.index(4) == 0 ? 0 : rng.index(70)));
        case Kind::kString: {
            std::string s;
            const std::size_t n = rng.index(4) == 0 ? 0 : rng.index(70);
            for (std::size_t i = 0; i < n; ++i) s += static_cast<char>(' ' + rng.index(95));
            return Value::string(std::move(s));
        }
        case Kind::kFixedArray:
        case Kind::kArray: {
            const std::size_t n = type.kind() == Kind::kFixedArray ? type.length() : rng.index(4);
            std::vector<Value> items;
            for (std::size_t i = 0; i < n; ++i) items.push_back(random_value(rng, type.element()));
            return Value::list(std::move(items));
        }
        case Kind::kTuple: {
            std::vector<Value> items;
            for (const auto& c : type.components()) items.push_back(random_value(rng, c));
            return Value::tuple(std::move(items));
        }
    }
    return {};
}

abi::FunctionAbi random_function(Rng& rng, std::size_t max_inputs, std::size_t max_depth) {
    abi::FunctionAbi f;
    f.name = "fn" + std::to_string(rng.index(1u << 20));
    const std::size_t n = rng.index(max_inputs + 1);
    for (std::size_t i = 0; i < n; ++i) f.inputs.push_back({"p" + std::to_string(i), random_type(rng, max_depth)});
    return f;
}

}  // namespace chainharvest::test
