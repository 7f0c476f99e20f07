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

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace chainharvest::abi {

//! Maximum nesting of arrays and tuples accepted by the codec.
inline constexpr std::size_t kMaxNestingDepth{4};

class AbiType {
  public:
    enum class Kind {
        kUint,
        kInt,
        kAddress,
        kBool,
        kFixedBytes,
        kBytes,
        kString,
        kFixedArray,
        kArray,
        kTuple,
    };

    static AbiType uint(unsigned bits = 256);
    static AbiType sint(unsigned bits = 256);
    static AbiType address();
    static AbiType boolean();
    static AbiType fixed_bytes(std::size_t length);
    static AbiType bytes();
    static AbiType string();
    static AbiType fixed_array(AbiType element, std::size_t length);
    static AbiType array(AbiType element);
    static AbiType tuple(std::vector<AbiType> components);

    //! Parses a type name such as "uint", "bytes32[2][]" or "(address,(uint8,string))[]".
    //! Aliases normalize (uint -> uint256, int -> int256, byte -> bytes1).
    //! Throws AbiError{kUnsupportedType}.
    static AbiType parse(std::string_view name);

    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    //! Bit width for kUint/kInt.
    [[nodiscard]] unsigned bits() const noexcept { return static_cast<unsigned>(size_); }
    //! Byte length for kFixedBytes, element count for kFixedArray.
    [[nodiscard]] std::size_t length() const noexcept { return size_; }
    //! Element type for arrays.
    [[nodiscard]] const AbiType& element() const { return components_.front(); }
    [[nodiscard]] const std::vector<AbiType>& components() const noexcept { return components_; }

    [[nodiscard]] std::string canonical() const;
    [[nodiscard]] bool is_dynamic() const noexcept;
    //! Bytes occupied in the enclosing head: 32 for dynamic types, the full static size otherwise.
    [[nodiscard]] std::size_t head_size() const noexcept;
    //! 0 for elementary types; each array or tuple level adds one.
    [[nodiscard]] std::size_t depth() const noexcept;
    //! Value types fit a single topic word directly when indexed in an event.
    [[nodiscard]] bool is_value_type() const noexcept;

    friend bool operator==(const AbiType&, const AbiType&) = default;

  private:
    AbiType(Kind kind, std::size_t size, std::vector<AbiType> components = {});

    Kind kind_;
    std::size_t size_;
    std::vector<AbiType> components_;
};

}  // namespace chainharvest::abi
