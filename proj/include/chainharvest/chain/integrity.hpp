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
#include <optional>
#include <span>
#include <vector>

#include <chainharvest/chain/types.hpp>
#include <chainharvest/common/error.hpp>

namespace chainharvest {

enum class ChainErrc {
    kEmptyLeaves,
    kNonContiguous,
};

using ChainError = Error<ChainErrc>;

//! Binary Merkle root over keccak256(left || right). Odd levels duplicate their last node;
//! a single leaf is its own root. Throws ChainError{kEmptyLeaves} on an empty list.
Hash32 merkle_root(std::span<const Hash32> leaves);

//! Root committed by a block's tx_root: merkle_root of the tx hashes, or keccak256("") when empty.
Hash32 transactions_root(std::span<const Hash32> tx_hashes);

struct LinkageReport {
    bool ok{true};
    std::optional<uint64_t> first_offending_height;
    std::vector<uint64_t> offending_heights;  // ascending
};

//! Checks parent_hash linkage and non-decreasing timestamps over contiguous headers.
//! A header offends when its parent_hash differs from its predecessor's hash or its
//! timestamp is smaller than its predecessor's. Throws ChainError{kNonContiguous}.
LinkageReport verify_linkage(std::span<const BlockHeader> headers);

//! Header hash used by fixture chains: keccak256 over
//! be64(number) || parent_hash || be64(timestamp) || tx_root || miner.
Hash32 seal_header(const BlockHeader& header);

//! Transaction hash used by fixture chains: keccak256 over the fixed-order field encoding.
Hash32 seal_transaction(const Transaction& tx);

}  // namespace chainharvest
