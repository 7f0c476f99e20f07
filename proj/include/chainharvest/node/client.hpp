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
#include <memory>
#include <optional>
#include <vector>

#include <chainharvest/chain/types.hpp>
#include <chainharvest/node/error.hpp>
#include <chainharvest/node/transport.hpp>

namespace chainharvest::node {

struct Block {
    BlockHeader header;
    std::vector<Transaction> transactions;  // empty unless requested
};

struct Receipt {
    Hash32 transaction_hash;
    uint64_t block_number{0};
    uint64_t tx_index{0};
    std::vector<LogEntry> logs;
};

//! Closed block interval [from, to].
struct BlockRange {
    uint64_t from{0};
    uint64_t to{0};
};

//! Typed access to a node. Transport failures are retried with doubling backoff
//! up to endpoint.max_retries, then surface as NodeError{kTransport}.
class NodeClient {
  public:
    NodeClient(std::shared_ptr<Transport> transport, NodeEndpoint endpoint);

    uint64_t block_number();
    Block get_block_by_number(uint64_t number, bool include_txs);
    Block get_block_by_hash(const Hash32& hash, bool include_txs);
    //! Logs ordered by (block, tx, log index).
    std::vector<LogEntry> get_logs(BlockRange range, const std::optional<Address>& address = std::nullopt);
    Receipt get_transaction_receipt(const Hash32& tx_hash);

    [[nodiscard]] const NodeEndpoint& endpoint() const noexcept { return endpoint_; }

  private:
    nlohmann::json call(const std::string& method, const nlohmann::json& params);
    Block parse_block(const nlohmann::json& result, bool include_txs);

    std::shared_ptr<Transport> transport_;
    NodeEndpoint endpoint_;
};

//! Greatest block number whose timestamp is <= t, by binary search over heights.
//! Issues at most ceil(log2(head + 1)) + 2 node calls in total. Throws NodeError{kBeforeGenesis}.
uint64_t find_block_by_timestamp(NodeClient& client, uint64_t timestamp);

}  // namespace chainharvest::node
