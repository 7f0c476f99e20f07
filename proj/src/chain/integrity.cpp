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

#include <chainharvest/chain/integrity.hpp>

#include <string>

#include <chainharvest/chain/keccak.hpp>

namespace chainharvest {

namespace {

    void append_be64(Bytes& out, uint64_t v) {
        for (int shift = 56; shift >= 0; shift -= 8) {
            out.push_back(static_cast<uint8_t>(v >> shift));
        }
    }

    template <class Fixed>
    void append(Bytes& out, const Fixed& fixed) {
        out.insert(out.end(), fixed.bytes().begin(), fixed.bytes().end());
    }

    Hash32 hash_pair(const Hash32& left, const Hash32& right) {
        std::array<uint8_t, 64> buf{};
        std::copy(left.bytes().begin(), left.bytes().end(), buf.begin());
        std::copy(right.bytes().begin(), right.bytes().end(), buf.begin() + 32);
        return keccak256(ByteView{buf});
    }

}  // namespace

Hash32 merkle_root(std::span<const Hash32> leaves) {
    if (leaves.empty()) {
        throw ChainError{ChainErrc::kEmptyLeaves, "merkle_root: empty leaf list"};
    }
    std::vector<Hash32> level(leaves.begin(), leaves.end());
    while (level.size() > 1) {
        if (level.size() % 2 != 0) {
            level.push_back(level.back());
        }
        std::vector<Hash32> next;
        next.reserve(level.size() / 2);
        for (std::size_t i = 0; i < level.size(); i += 2) {
            next.push_back(hash_pair(level[i], level[i + 1]));
        }
        level = std::move(next);
    }
    return level.front();
}

Hash32 transactions_root(std::span<const Hash32> tx_hashes) {
    if (tx_hashes.empty()) {
        return keccak256(ByteView{});
    }
    return merkle_root(tx_hashes);
}

LinkageReport verify_linkage(std::span<const BlockHeader> headers) {
    LinkageReport report;
    for (std::size_t i = 1; i < headers.size(); ++i) {
        const BlockHeader& prev = headers[i - 1];
        const BlockHeader& cur = headers[i];
        if (cur.number != prev.number + 1) {
            throw ChainError{ChainErrc::kNonContiguous, "verify_linkage: height " + std::to_string(prev.number) +
                                                            " followed by " + std::to_string(cur.number)};
        }
        if (cur.parent_hash != prev.hash || cur.timestamp < prev.timestamp) {
            report.offending_heights.push_back(cur.number);
        }
    }
    if (!report.offending_heights.empty()) {
        report.ok = false;
        report.first_offending_height = report.offending_heights.front();
    }
    return report;
}

Hash32 seal_header(const BlockHeader& header) {
    Bytes buf;
    buf.reserve(8 + 32 + 8 + 32 + 20);
    append_be64(buf, header.number);
    append(buf, header.parent_hash);
    append_be64(buf, header.timestamp);
    append(buf, header.tx_root);
    append(buf, header.miner);
    return keccak256(buf);
}

Hash32 seal_transaction(const Transaction& tx) {
    Bytes buf;
    append_be64(buf, tx.block_number);
    append_be64(buf, tx.tx_index);
    append(buf, tx.from);
    if (tx.to) {
        buf.push_back(1);
        append(buf, *tx.to);
    } else {
        buf.push_back(0);
    }
    const Bytes value = u256_to_word(tx.value);
    buf.insert(buf.end(), value.begin(), value.end());
    append_be64(buf, tx.gas_limit);
    const Bytes price = u256_to_word(tx.gas_price);
    buf.insert(buf.end(), price.begin(), price.end());
    append_be64(buf, tx.nonce);
    append_be64(buf, tx.input.size());
    buf.insert(buf.end(), tx.input.begin(), tx.input.end());
    return keccak256(buf);
}

}  // namespace chainharvest
