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

#include <chainharvest/node/wire.hpp>

namespace chainharvest::node::wire {

using nlohmann::json;

namespace {

    const json& member(const json& doc, const char* key) {
        const auto it{doc.find(key)};
        if (it == doc.end() || it->is_null()) {
            throw std::invalid_argument{std::string{"missing field '"} + key + "'"};
        }
        return *it;
    }

    std::string text(const json& doc, const char* key) { return member(doc, key).get<std::string>(); }

    uint64_t quantity(const json& doc, const char* key) { return parse_quantity(text(doc, key)); }

    U256 big_quantity(const json& doc, const char* key, bool optional = false) {
        const auto it{doc.find(key)};
        if (optional && (it == doc.end() || it->is_null())) {
            return 0;
        }
        return u256_from_quantity(text(doc, key));
    }

}  // namespace

json header_to_json(const BlockHeader& header) {
    return json{
        {"number", to_quantity(header.number)},
        {"hash", header.hash.to_hex()},
        {"parentHash", header.parent_hash.to_hex()},
        {"timestamp", to_quantity(header.timestamp)},
        {"transactionsRoot", header.tx_root.to_hex()},
        {"miner", header.miner.to_hex()},
    };
}

BlockHeader header_from_json(const json& doc) {
    BlockHeader header;
    header.number = quantity(doc, "number");
    header.hash = Hash32::from_hex(text(doc, "hash"));
    header.parent_hash = Hash32::from_hex(text(doc, "parentHash"));
    header.timestamp = quantity(doc, "timestamp");
    header.tx_root = Hash32::from_hex(text(doc, "transactionsRoot"));
    if (const auto it{doc.find("miner")}; it != doc.end() && !it->is_null()) {
        header.miner = Address::from_hex(it->get<std::string>());
    }
    return header;
}

json transaction_to_json(const Transaction& tx) {
    return json{
        {"hash", tx.hash.to_hex()},
        {"blockNumber", to_quantity(tx.block_number)},
        {"transactionIndex", to_quantity(tx.tx_index)},
        {"from", tx.from.to_hex()},
        {"to", tx.to ? json(tx.to->to_hex()) : json(nullptr)},
        {"value", u256_to_quantity(tx.value)},
        {"gas", to_quantity(tx.gas_limit)},
        {"gasPrice", u256_to_quantity(tx.gas_price)},
        {"nonce", to_quantity(tx.nonce)},
        {"input", to_hex(tx.input)},
    };
}

Transaction transaction_from_json(const json& doc) {
    Transaction tx;
    tx.hash = Hash32::from_hex(text(doc, "hash"));
    tx.block_number = quantity(doc, "blockNumber");
    tx.tx_index = quantity(doc, "transactionIndex");
    tx.from = Address::from_hex(text(doc, "from"));
    if (const auto it{doc.find("to")}; it != doc.end() && !it->is_null()) {
        tx.to = Address::from_hex(it->get<std::string>());
    }
    tx.value = big_quantity(doc, "value");
    tx.gas_limit = quantity(doc, "gas");
    tx.gas_price = big_quantity(doc, "gasPrice", /*optional=*/true);
    tx.nonce = quantity(doc, "nonce");
    tx.input = from_hex(doc.contains("input") ? text(doc, "input") : text(doc, "data"));
    return tx;
}

json log_to_json(const LogEntry& log) {
    json topics = json::array();
    for (const Hash32& topic : log.topics) {
        topics.push_back(topic.to_hex());
    }
    return json{
        {"address", log.address.to_hex()},
        {"topics", std::move(topics)},
        {"data", to_hex(log.data)},
        {"blockNumber", to_quantity(log.block_number)},
        {"transactionIndex", to_quantity(log.tx_index)},
        {"logIndex", to_quantity(log.log_index)},
    };
}

LogEntry log_from_json(const json& doc) {
    LogEntry log;
    log.address = Address::from_hex(text(doc, "address"));
    const json& topics{member(doc, "topics")};
    if (!topics.is_array() || topics.size() > kMaxLogTopics) {
        throw std::invalid_argument{"log topics must be an array of at most 4 hashes"};
    }
    for (const json& topic : topics) {
        log.topics.push_back(Hash32::from_hex(topic.get<std::string>()));
    }
    log.data = from_hex(text(doc, "data"));
    log.block_number = quantity(doc, "blockNumber");
    log.tx_index = quantity(doc, "transactionIndex");
    log.log_index = quantity(doc, "logIndex");
    return log;
}

}  // namespace chainharvest::node::wire
