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

#include <chainharvest/node/client.hpp>

#include <algorithm>
#include <bit>
#include <thread>

#include <spdlog/spdlog.h>

#include <chainharvest/node/wire.hpp>

namespace chainharvest::node {

using nlohmann::json;

NodeClient::NodeClient(std::shared_ptr<Transport> transport, NodeEndpoint endpoint)
    : transport_{std::move(transport)}, endpoint_{std::move(endpoint)} {
    if (!transport_) {
        throw std::invalid_argument{"NodeClient requires a transport"};
    }
}

json NodeClient::call(const std::string& method, const json& params) {
    auto backoff{endpoint_.retry_backoff};
    for (unsigned attempt{0};; ++attempt) {
        try {
            return transport_->call(method, params);
        } catch (const RpcError& ex) {
            throw NodeError{NodeErrc::kRpcError, method + ": " + ex.what() + " (code " + std::to_string(ex.code()) + ")"};
        } catch (const TransportError& ex) {
            if (attempt >= endpoint_.max_retries) {
                throw NodeError{NodeErrc::kTransport, method + " failed after " + std::to_string(attempt + 1) +
                                                          " attempts: " + ex.what()};
            }
            spdlog::debug("{} attempt {} failed ({}), retrying in {:.3f}s", method, attempt + 1, ex.what(),
                          backoff.count());
            std::this_thread::sleep_for(backoff);
            backoff *= 2;
        }
    }
}

uint64_t NodeClient::block_number() {
    const json result = call("eth_blockNumber", json::array());
    try {
        return parse_quantity(result.get<std::string>());
    } catch (const std::exception& ex) {
        throw NodeError{NodeErrc::kMalformedResponse, std::string{"eth_blockNumber: "} + ex.what()};
    }
}

Block NodeClient::parse_block(const json& result, bool include_txs) {
    try {
        Block block;
        block.header = wire::header_from_json(result);
        if (include_txs) {
            for (const json& tx : result.at("transactions")) {
                if (!tx.is_object()) {
                    throw std::invalid_argument{"expected full transaction objects"};
                }
                block.transactions.push_back(wire::transaction_from_json(tx));
            }
        }
        return block;
    } catch (const std::exception& ex) {
        throw NodeError{NodeErrc::kMalformedResponse, std::string{"block: "} + ex.what()};
    }
}

Block NodeClient::get_block_by_number(uint64_t number, bool include_txs) {
    const json result = call("eth_getBlockByNumber", json::array({to_quantity(number), include_txs}));
    if (result.is_null()) {
        throw NodeError{NodeErrc::kNotFound, "block " + std::to_string(number) + " not found"};
    }
    return parse_block(result, include_txs);
}

Block NodeClient::get_block_by_hash(const Hash32& hash, bool include_txs) {
    const json result = call("eth_getBlockByHash", json::array({hash.to_hex(), include_txs}));
    if (result.is_null()) {
        throw NodeError{NodeErrc::kNotFound, "block " + hash.to_hex() + " not found"};
    }
    return parse_block(result, include_txs);
}

std::vector<LogEntry> NodeClient::get_logs(BlockRange range, const std::optional<Address>& address) {
    if (range.from > range.to) {
        throw NodeError{NodeErrc::kRangeOutOfBounds, "inverted block range " + std::to_string(range.from) + ".." +
                                                         std::to_string(range.to)};
    }
    json filter{{"fromBlock", to_quantity(range.from)}, {"toBlock", to_quantity(range.to)}};
    if (address) {
        filter["address"] = address->to_hex();
    }
    json result;
    try {
        result = call("eth_getLogs", json::array({filter}));
    } catch (const NodeError& ex) {
        if (ex.code() == NodeErrc::kRpcError) {
            throw NodeError{NodeErrc::kRangeOutOfBounds, ex.what()};
        }
        throw;
    }
    std::vector<LogEntry> logs;
    try {
        for (const json& entry : result) {
            logs.push_back(wire::log_from_json(entry));
        }
    } catch (const std::exception& ex) {
        throw NodeError{NodeErrc::kMalformedResponse, std::string{"eth_getLogs: "} + ex.what()};
    }
    std::stable_sort(logs.begin(), logs.end(), [](const LogEntry& a, const LogEntry& b) {
        return std::tie(a.block_number, a.tx_index, a.log_index) < std::tie(b.block_number, b.tx_index, b.log_index);
    });
    return logs;
}

Receipt NodeClient::get_transaction_receipt(const Hash32& tx_hash) {
    const json result = call("eth_getTransactionReceipt", json::array({tx_hash.to_hex()}));
    if (result.is_null()) {
        throw NodeError{NodeErrc::kNotFound, "receipt " + tx_hash.to_hex() + " not found"};
    }
    try {
        Receipt receipt;
        receipt.transaction_hash = Hash32::from_hex(result.at("transactionHash").get<std::string>());
        receipt.block_number = parse_quantity(result.at("blockNumber").get<std::string>());
        receipt.tx_index = parse_quantity(result.at("transactionIndex").get<std::string>());
        for (const json& entry : result.at("logs")) {
            receipt.logs.push_back(wire::log_from_json(entry));
        }
        return receipt;
    } catch (const std::exception& ex) {
        throw NodeError{NodeErrc::kMalformedResponse, std::string{"receipt: "} + ex.what()};
    }
}

uint64_t find_block_by_timestamp(NodeClient& client, uint64_t timestamp) {
    const uint64_t head{client.block_number()};
    // Invariant: ts(hi) > t, with a virtual block at head + 1; ts(lo) <= t once lo > 0.
    uint64_t lo{0};
    uint64_t hi{head + 1};
    while (hi - lo > 1) {
        const uint64_t mid{lo + (hi - lo) / 2};
        if (client.get_block_by_number(mid, false).header.timestamp <= timestamp) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if (lo == 0) {
        const uint64_t genesis_ts{client.get_block_by_number(0, false).header.timestamp};
        if (timestamp < genesis_ts) {
            throw NodeError{NodeErrc::kBeforeGenesis, "timestamp " + std::to_string(timestamp) +
                                                          " precedes genesis at " + std::to_string(genesis_ts)};
        }
    }
    return lo;
}

}  // namespace chainharvest::node
