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

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include <chainharvest/chain/types.hpp>
#include <chainharvest/node/transport.hpp>

namespace chainharvest::node {

struct FixtureBlock {
    BlockHeader header;
    std::vector<Transaction> transactions;
    std::vector<std::vector<LogEntry>> logs;  // parallel to transactions
};

//! In-process chain used as a deterministic node stand-in.
struct FixtureChain {
    std::vector<FixtureBlock> blocks;
    std::chrono::microseconds simulated_latency{0};

    [[nodiscard]] std::size_t transaction_count() const;
    [[nodiscard]] std::size_t log_count() const;
};

inline constexpr std::string_view kFixtureFormat{"chainharvest-fixture/1"};

//! Document layout:
//!   {"format": "chainharvest-fixture/1",
//!    "blocks": [{<wire header fields>, "transactions": [{<wire tx fields>, "logs": [<wire log>...]}]}]}
nlohmann::json fixture_to_json(const FixtureChain& chain);
FixtureChain fixture_from_json(const nlohmann::json& doc);
FixtureChain load_fixture(const std::filesystem::path& path);
void save_fixture(const FixtureChain& chain, const std::filesystem::path& path);

//! Assembles sealed fixture chains: fills heights, indices, nonces, hashes and roots.
class FixtureBuilder {
  public:
    explicit FixtureBuilder(Address miner = {});

    //! Opens the next block (the first call opens the genesis).
    void begin_block(uint64_t timestamp);
    //! Appends to the open block and returns the sealed transaction. Block number, index,
    //! sender nonce and hash are assigned here; so are the logs' positions.
    Transaction add_transaction(Transaction tx, std::vector<LogEntry> logs = {});
    [[nodiscard]] std::size_t block_count() const noexcept { return blocks_.size(); }

    FixtureChain finish();

  private:
    Address miner_;
    std::vector<FixtureBlock> blocks_;
    std::map<Address, uint64_t> nonces_;
    uint64_t next_log_index_{0};
};

//! A sealed chain of empty blocks with the given timestamps.
FixtureChain make_timestamp_chain(const std::vector<uint64_t>& timestamps);

//! Serves the JSON-RPC methods eth_blockNumber, eth_getBlockByNumber, eth_getBlockByHash,
//! eth_getTransactionReceipt and eth_getLogs from a FixtureChain. Counts calls per method and
//! can inject transport failures.
class FixtureTransport final : public Transport {
  public:
    explicit FixtureTransport(FixtureChain chain);

    nlohmann::json call(const std::string& method, const nlohmann::json& params) override;

    //! Full JSON-RPC envelope handling, shared with the HTTP server.
    nlohmann::json handle(const nlohmann::json& request);

    //! Every distinct request fails `k` times before it succeeds.
    void set_transient_failures(unsigned k);
    //! After `n` further successful calls every call fails; nullopt disables.
    void fail_after(std::optional<uint64_t> n);

    [[nodiscard]] uint64_t calls(const std::string& method) const;
    [[nodiscard]] uint64_t total_calls() const noexcept { return total_calls_.load(); }
    void reset_counters();

    [[nodiscard]] const FixtureChain& chain() const noexcept { return chain_; }

  private:
    nlohmann::json dispatch(const std::string& method, const nlohmann::json& params) const;
    nlohmann::json block_json(const FixtureBlock& block, bool include_txs) const;
    void maybe_fail(const std::string& method, const nlohmann::json& params);

    FixtureChain chain_;
    std::map<Hash32, uint64_t> by_block_hash_;
    std::map<Hash32, std::pair<uint64_t, uint64_t>> by_tx_hash_;

    std::atomic<uint64_t> total_calls_{0};
    mutable std::mutex mutex_;
    std::map<std::string, uint64_t> calls_;
    std::map<std::string, unsigned> attempts_;
    unsigned transient_failures_{0};
    std::optional<uint64_t> remaining_before_outage_;
};

//! HTTP front for a FixtureTransport, for exercising the wire protocol end to end.
class FixtureRpcServer {
  public:
    explicit FixtureRpcServer(std::shared_ptr<FixtureTransport> backend);
    ~FixtureRpcServer();
    FixtureRpcServer(const FixtureRpcServer&) = delete;
    FixtureRpcServer& operator=(const FixtureRpcServer&) = delete;

    //! Binds 127.0.0.1 on `port` (0 picks a free one) and serves on a background thread.
    int start(int port = 0);
    //! Serves on the calling thread until stop().
    void run(const std::string& host, int port);
    void stop();

    [[nodiscard]] std::string url() const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace chainharvest::node
