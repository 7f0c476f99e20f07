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

#include <chainharvest/node/fixture.hpp>

#include <fstream>
#include <thread>

#include <chainharvest/chain/integrity.hpp>
#include <chainharvest/node/error.hpp>
#include <chainharvest/node/wire.hpp>

namespace chainharvest::node {

using nlohmann::json;

std::size_t FixtureChain::transaction_count() const {
    std::size_t n{0};
    for (const FixtureBlock& block : blocks) {
        n += block.transactions.size();
    }
    return n;
}

std::size_t FixtureChain::log_count() const {
    std::size_t n{0};
    for (const FixtureBlock& block : blocks) {
        for (const auto& logs : block.logs) {
            n += logs.size();
        }
    }
    return n;
}

json fixture_to_json(const FixtureChain& chain) {
    json blocks = json::array();
    for (const FixtureBlock& block : chain.blocks) {
        json entry = wire::header_to_json(block.header);
        json txs = json::array();
        for (std::size_t i{0}; i < block.transactions.size(); ++i) {
            json tx = wire::transaction_to_json(block.transactions[i]);
            json logs = json::array();
            for (const LogEntry& log : block.logs[i]) {
                logs.push_back(wire::log_to_json(log));
            }
            tx["logs"] = std::move(logs);
            txs.push_back(std::move(tx));
        }
        entry["transactions"] = std::move(txs);
        blocks.push_back(std::move(entry));
    }
    return json{{"format", kFixtureFormat}, {"blocks", std::move(blocks)}};
}

FixtureChain fixture_from_json(const json& doc) {
    try {
        if (doc.at("format").get<std::string>() != kFixtureFormat) {
            throw std::invalid_argument{"unsupported fixture format"};
        }
        FixtureChain chain;
        for (const json& entry : doc.at("blocks")) {
            FixtureBlock block;
            block.header = wire::header_from_json(entry);
            if (block.header.number != chain.blocks.size()) {
                throw std::invalid_argument{"block numbers must start at 0 and be contiguous"};
            }
            for (const json& tx_doc : entry.at("transactions")) {
                Transaction tx{wire::transaction_from_json(tx_doc)};
                if (tx.block_number != block.header.number || tx.tx_index != block.transactions.size()) {
                    throw std::invalid_argument{"transaction " + tx.hash.to_hex() + " is out of place"};
                }
                std::vector<LogEntry> logs;
                for (const json& log_doc : tx_doc.value("logs", json::array())) {
                    LogEntry log{wire::log_from_json(log_doc)};
                    if (log.block_number != tx.block_number || log.tx_index != tx.tx_index) {
                        throw std::invalid_argument{"log does not belong to transaction " + tx.hash.to_hex()};
                    }
                    logs.push_back(std::move(log));
                }
                block.transactions.push_back(std::move(tx));
                block.logs.push_back(std::move(logs));
            }
            chain.blocks.push_back(std::move(block));
        }
        if (chain.blocks.empty()) {
            throw std::invalid_argument{"fixture has no blocks"};
        }
        return chain;
    } catch (const NodeError&) {
        throw;
    } catch (const std::exception& ex) {
        throw NodeError{NodeErrc::kBadFixture, std::string{"invalid fixture: "} + ex.what()};
    }
}

FixtureChain load_fixture(const std::filesystem::path& path) {
    std::ifstream in{path};
    if (!in) {
        throw NodeError{NodeErrc::kBadFixture, "cannot open fixture " + path.string()};
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& ex) {
        throw NodeError{NodeErrc::kBadFixture, path.string() + ": " + ex.what()};
    }
    return fixture_from_json(doc);
}

void save_fixture(const FixtureChain& chain, const std::filesystem::path& path) {
    std::ofstream out{path, std::ios::binary | std::ios::trunc};
    if (!out) {
        throw NodeError{NodeErrc::kBadFixture, "cannot write fixture " + path.string()};
    }
    out << fixture_to_json(chain).dump(1) << '\n';
}

FixtureBuilder::FixtureBuilder(Address miner) : miner_{miner} {}

void FixtureBuilder::begin_block(uint64_t timestamp) {
    FixtureBlock block;
    block.header.number = blocks_.size();
    block.header.timestamp = timestamp;
    block.header.miner = miner_;
    blocks_.push_back(std::move(block));
    next_log_index_ = 0;
}

Transaction FixtureBuilder::add_transaction(Transaction tx, std::vector<LogEntry> logs) {
    if (blocks_.empty()) {
        throw std::logic_error{"begin_block must precede add_transaction"};
    }
    FixtureBlock& block{blocks_.back()};
    tx.block_number = block.header.number;
    tx.tx_index = block.transactions.size();
    tx.nonce = nonces_[tx.from]++;
    tx.hash = seal_transaction(tx);
    for (LogEntry& log : logs) {
        log.block_number = tx.block_number;
        log.tx_index = tx.tx_index;
        log.log_index = next_log_index_++;
    }
    block.transactions.push_back(tx);
    block.logs.push_back(std::move(logs));
    return tx;
}

FixtureChain FixtureBuilder::finish() {
    FixtureChain chain;
    Hash32 parent{};
    for (FixtureBlock& block : blocks_) {
        std::vector<Hash32> hashes;
        for (const Transaction& tx : block.transactions) {
            hashes.push_back(tx.hash);
        }
        block.header.parent_hash = parent;
        block.header.tx_root = transactions_root(hashes);
        block.header.hash = seal_header(block.header);
        parent = block.header.hash;
    }
    chain.blocks = std::move(blocks_);
    blocks_.clear();
    nonces_.clear();
    return chain;
}

FixtureChain make_timestamp_chain(const std::vector<uint64_t>& timestamps) {
    FixtureBuilder builder;
    for (const uint64_t ts : timestamps) {
        builder.begin_block(ts);
    }
    return builder.finish();
}

// ---------------------------------------------------------------------------------------------

namespace {

    RpcError invalid_params(const std::string& what) { return RpcError{kRpcInvalidParams, what}; }

    const json& param(const json& params, std::size_t i) {
        if (!params.is_array() || params.size() <= i) {
            throw invalid_params("missing parameter " + std::to_string(i));
        }
        return params[i];
    }

    template <class T>
    T parse_param(const json& value, const char* what) {
        try {
            if constexpr (std::is_same_v<T, uint64_t>) {
                return parse_quantity(value.get<std::string>());
            } else {
                return T::from_hex(value.get<std::string>());
            }
        } catch (const std::exception&) {
            throw invalid_params(std::string{"invalid "} + what);
        }
    }

    bool topic_matches(const json& filter, const std::vector<Hash32>& topics) {
        if (filter.is_null()) {
            return true;
        }
        if (!filter.is_array()) {
            throw invalid_params("topics must be an array");
        }
        for (std::size_t i{0}; i < filter.size(); ++i) {
            const json& slot{filter[i]};
            if (slot.is_null()) {
                continue;
            }
            if (i >= topics.size()) {
                return false;
            }
            bool any{false};
            const json alternatives = slot.is_array() ? slot : json::array({slot});
            for (const json& alt : alternatives) {
                any = any || parse_param<Hash32>(alt, "topic") == topics[i];
            }
            if (!any) {
                return false;
            }
        }
        return true;
    }

}  // namespace

FixtureTransport::FixtureTransport(FixtureChain chain) : chain_{std::move(chain)} {
    if (chain_.blocks.empty()) {
        throw NodeError{NodeErrc::kBadFixture, "fixture has no blocks"};
    }
    for (const FixtureBlock& block : chain_.blocks) {
        by_block_hash_.emplace(block.header.hash, block.header.number);
        for (const Transaction& tx : block.transactions) {
            by_tx_hash_.emplace(tx.hash, std::pair{block.header.number, tx.tx_index});
        }
    }
}

void FixtureTransport::set_transient_failures(unsigned k) {
    std::lock_guard lock{mutex_};
    transient_failures_ = k;
    attempts_.clear();
}

void FixtureTransport::fail_after(std::optional<uint64_t> n) {
    std::lock_guard lock{mutex_};
    remaining_before_outage_ = n;
}

uint64_t FixtureTransport::calls(const std::string& method) const {
    std::lock_guard lock{mutex_};
    const auto it{calls_.find(method)};
    return it == calls_.end() ? 0 : it->second;
}

void FixtureTransport::reset_counters() {
    std::lock_guard lock{mutex_};
    calls_.clear();
    total_calls_ = 0;
}

void FixtureTransport::maybe_fail(const std::string& method, const json& params) {
    std::lock_guard lock{mutex_};
    ++calls_[method];
    ++total_calls_;
    if (remaining_before_outage_) {
        if (*remaining_before_outage_ == 0) {
            throw TransportError{"fixture node is down"};
        }
        --*remaining_before_outage_;
    }
    if (transient_failures_ > 0) {
        unsigned& seen{attempts_[method + params.dump()]};
        if (seen < transient_failures_) {
            ++seen;
            throw TransportError{"injected transient failure"};
        }
    }
}

json FixtureTransport::call(const std::string& method, const json& params) {
    if (chain_.simulated_latency.count() > 0) {
        std::this_thread::sleep_for(chain_.simulated_latency);
    }
    maybe_fail(method, params);
    return dispatch(method, params);
}

json FixtureTransport::handle(const json& request) {
    const json id = request.is_object() ? request.value("id", json(nullptr)) : json(nullptr);
    auto error_reply = [&id](int code, const std::string& message) {
        return json{{"jsonrpc", "2.0"}, {"id", id}, {"error", {{"code", code}, {"message", message}}}};
    };
    if (!request.is_object() || !request.contains("method") || !request["method"].is_string()) {
        return error_reply(kRpcInvalidRequest, "invalid request");
    }
    try {
        json result = call(request["method"].get<std::string>(), request.value("params", json::array()));
        return json{{"jsonrpc", "2.0"}, {"id", id}, {"result", std::move(result)}};
    } catch (const RpcError& ex) {
        return error_reply(ex.code(), ex.what());
    }
}

json FixtureTransport::block_json(const FixtureBlock& block, bool include_txs) const {
    json doc = wire::header_to_json(block.header);
    json txs = json::array();
    for (const Transaction& tx : block.transactions) {
        txs.push_back(include_txs ? wire::transaction_to_json(tx) : json(tx.hash.to_hex()));
    }
    doc["transactions"] = std::move(txs);
    return doc;
}

json FixtureTransport::dispatch(const std::string& method, const json& params) const {
    const uint64_t head{chain_.blocks.size() - 1};
    auto resolve_block = [&](const json& tag) -> uint64_t {
        if (tag.is_string()) {
            const auto text{tag.get<std::string>()};
            if (text == "latest" || text == "pending" || text == "safe" || text == "finalized") {
                return head;
            }
            if (text == "earliest") {
                return 0;
            }
        }
        return parse_param<uint64_t>(tag, "block number");
    };
    auto log_json = [&](const LogEntry& log) {
        json doc = wire::log_to_json(log);
        const FixtureBlock& block{chain_.blocks[log.block_number]};
        doc["transactionHash"] = block.transactions[log.tx_index].hash.to_hex();
        doc["blockHash"] = block.header.hash.to_hex();
        return doc;
    };

    if (method == "eth_blockNumber") {
        return to_quantity(head);
    }
    if (method == "eth_getBlockByNumber") {
        const uint64_t number{resolve_block(param(params, 0))};
        const bool full{params.size() > 1 && params[1].is_boolean() && params[1].get<bool>()};
        return number > head ? json(nullptr) : block_json(chain_.blocks[number], full);
    }
    if (method == "eth_getBlockByHash") {
        const Hash32 hash{parse_param<Hash32>(param(params, 0), "block hash")};
        const bool full{params.size() > 1 && params[1].is_boolean() && params[1].get<bool>()};
        const auto it{by_block_hash_.find(hash)};
        return it == by_block_hash_.end() ? json(nullptr) : block_json(chain_.blocks[it->second], full);
    }
    if (method == "eth_getTransactionReceipt") {
        const Hash32 hash{parse_param<Hash32>(param(params, 0), "transaction hash")};
        const auto it{by_tx_hash_.find(hash)};
        if (it == by_tx_hash_.end()) {
            return nullptr;
        }
        const auto [number, index] = it->second;
        const FixtureBlock& block{chain_.blocks[number]};
        json logs = json::array();
        for (const LogEntry& log : block.logs[index]) {
            logs.push_back(log_json(log));
        }
        return json{
            {"transactionHash", hash.to_hex()},
            {"blockHash", block.header.hash.to_hex()},
            {"blockNumber", to_quantity(number)},
            {"transactionIndex", to_quantity(index)},
            {"status", "0x1"},
            {"logs", std::move(logs)},
        };
    }
    if (method == "eth_getLogs") {
        const json& filter{param(params, 0)};
        if (!filter.is_object()) {
            throw invalid_params("filter must be an object");
        }
        const uint64_t from{resolve_block(filter.value("fromBlock", json("latest")))};
        const uint64_t to{resolve_block(filter.value("toBlock", json("latest")))};
        if (from > to || to > head) {
            throw invalid_params("block range out of bounds");
        }
        std::vector<Address> addresses;
        if (const auto it{filter.find("address")}; it != filter.end() && !it->is_null()) {
            for (const json& a : it->is_array() ? *it : json::array({*it})) {
                addresses.push_back(parse_param<Address>(a, "address"));
            }
        }
        const json topics = filter.value("topics", json(nullptr));
        json out = json::array();
        for (uint64_t n{from}; n <= to; ++n) {
            for (const auto& tx_logs : chain_.blocks[n].logs) {
                for (const LogEntry& log : tx_logs) {
                    const bool address_ok{addresses.empty() ||
                                          std::find(addresses.begin(), addresses.end(), log.address) != addresses.end()};
                    if (address_ok && topic_matches(topics, log.topics)) {
                        out.push_back(log_json(log));
                    }
                }
            }
        }
        return out;
    }
    throw RpcError{kRpcMethodNotFound, "method not found: " + method};
}

}  // namespace chainharvest::node
