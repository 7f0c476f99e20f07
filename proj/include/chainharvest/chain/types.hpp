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

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <chainharvest/common/bytes.hpp>
#include <chainharvest/common/hex.hpp>
#include <chainharvest/common/uint256.hpp>

namespace chainharvest {

//! Fixed-length byte string. Tag keeps hashes and addresses from mixing.
template <std::size_t N, class Tag>
class FixedBytes {
  public:
    static constexpr std::size_t kSize = N;

    constexpr FixedBytes() noexcept = default;
    explicit constexpr FixedBytes(const std::array<uint8_t, N>& bytes) noexcept : bytes_{bytes} {}

    //! Throws HexError unless the input decodes to exactly N bytes.
    static FixedBytes from_hex(std::string_view hex) {
        const Bytes raw = chainharvest::from_hex(hex);
        return from_bytes(raw);
    }

    static FixedBytes from_bytes(ByteView raw) {
        if (raw.size() != N) {
            throw HexError{"expected " + std::to_string(N) + " bytes, got " + std::to_string(raw.size())};
        }
        FixedBytes out;
        std::copy(raw.begin(), raw.end(), out.bytes_.begin());
        return out;
    }

    [[nodiscard]] std::string to_hex() const { return chainharvest::to_hex(bytes_); }
    [[nodiscard]] ByteView view() const noexcept { return bytes_; }
    [[nodiscard]] const std::array<uint8_t, N>& bytes() const noexcept { return bytes_; }
    [[nodiscard]] std::array<uint8_t, N>& bytes() noexcept { return bytes_; }
    [[nodiscard]] bool is_zero() const noexcept {
        return std::all_of(bytes_.begin(), bytes_.end(), [](uint8_t b) { return b == 0; });
    }

    friend constexpr auto operator<=>(const FixedBytes&, const FixedBytes&) = default;

  private:
    std::array<uint8_t, N> bytes_{};
};

using Hash32 = FixedBytes<32, struct Hash32Tag>;
using Address = FixedBytes<20, struct AddressTag>;

struct BlockHeader {
    uint64_t number{0};
    Hash32 hash;
    Hash32 parent_hash;
    uint64_t timestamp{0};
    Hash32 tx_root;
    Address miner;

    friend bool operator==(const BlockHeader&, const BlockHeader&) = default;
};

struct Transaction {
    Hash32 hash;
    uint64_t block_number{0};
    uint64_t tx_index{0};
    Address from;
    std::optional<Address> to;  // nullopt: contract creation
    U256 value{0};
    uint64_t gas_limit{0};
    U256 gas_price{0};
    uint64_t nonce{0};
    Bytes input;

    friend bool operator==(const Transaction&, const Transaction&) = default;
};

struct LogEntry {
    Address address;
    std::vector<Hash32> topics;  // at most 4
    Bytes data;
    uint64_t block_number{0};
    uint64_t tx_index{0};
    uint64_t log_index{0};

    friend bool operator==(const LogEntry&, const LogEntry&) = default;
};

inline constexpr std::size_t kMaxLogTopics{4};

}  // namespace chainharvest
