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

#include <chainharvest/ingest/crawler.hpp>

#include <atomic>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <spdlog/spdlog.h>

#include <chainharvest/abi/codec.hpp>
#include <chainharvest/abi/error.hpp>

namespace chainharvest::ingest {

namespace fs = std::filesystem;

void CrawlStats::add(const BlockStats& block) {
    blocks_ingested += block.blocks;
    txs_ingested += block.txs;
    logs_ingested += block.logs;
    decode_hits += block.decode.call_hits;
    decode_misses += block.decode.call_misses;
    event_hits += block.decode.event_hits;
    event_misses += block.decode.event_misses;
    linkage_breaks += block.linkage_breaks;
}

AbiRegistry load_abi_registry(const fs::path& dir) {
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) {
        throw StoreError{StoreErrc::kIo, "ABI registry " + dir.string() + " is not a directory"};
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator{dir}) {
        if (entry.is_regular_file() && entry.path().extension() == ".abi") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    AbiRegistry registry;
    for (const fs::path& file : files) {
        Address address;
        try {
            address = Address::from_hex(file.stem().string());
        } catch (const HexError&) {
            throw StoreError{StoreErrc::kIo, "ABI file name is not an address: " + file.filename().string()};
        }
        std::ifstream in{file, std::ios::binary};
        std::ostringstream text;
        text << in.rdbuf();
        if (!in) {
            throw StoreError{StoreErrc::kIo, "cannot read " + file.string()};
        }
        registry.insert_or_assign(address, abi::parse_abi(text.str()));
    }
    return registry;
}

FetchedBlock fetch_block(uint64_t number, node::NodeClient& client, const AbiRegistry& registry) {
    FetchedBlock out;
    DecodeCounts& counts{out.decode};
    BlockRecord& record{out.record};
    node::Block block{client.get_block_by_number(number, true)};
    record.header = block.header;
    for (Transaction& tx : block.transactions) {
        StoredTransaction st;
        if (tx.to && !tx.input.empty()) {
            if (const auto it{registry.find(*tx.to)}; it != registry.end()) {
                try {
                    if (const auto call{abi::decode_call(tx.input, it->second)}) {
                        st.decoded_fn = call->function_name;
                        st.decoded_args = abi::args_document(*call).dump();
                        ++counts.call_hits;
                    }
                } catch (const abi::AbiError& ex) {
                    spdlog::debug("tx {}: {}", tx.hash.to_hex(), ex.what());
                    ++counts.call_misses;
                }
            }
        }
        st.tx = std::move(tx);
        st.timestamp = block.header.timestamp;
        record.transactions.push_back(std::move(st));
    }
    for (LogEntry& log : client.get_logs({number, number})) {
        StoredLog sl;
        if (const auto it{registry.find(log.address)}; it != registry.end()) {
            try {
                const abi::DecodedEvent event{abi::decode_event(log, it->second)};
                sl.decoded_event = event.event_name;
                sl.decoded_args = abi::args_document(event).dump();
                ++counts.event_hits;
            } catch (const abi::AbiError& ex) {
                spdlog::debug("log {}/{}: {}", log.block_number, log.log_index, ex.what());
                ++counts.event_misses;
            }
        }
        sl.log = std::move(log);
        record.logs.push_back(std::move(sl));
    }
    return out;
}

namespace {

    BlockStats store_block(const FetchedBlock& fetched, ChainStore& store,
                           const std::optional<CheckpointUpdate>& checkpoint) {
        const BlockRecord& record{fetched.record};
        const WriteResult written{store.write_block(record, checkpoint)};
        BlockStats stats;
        if (written.inserted) {
            stats.blocks = 1;
            stats.txs = written.transactions;
            stats.logs = written.logs;
            stats.decode = fetched.decode;
        }
        stats.linkage_breaks = written.linkage_breaks;
        if (written.linkage_breaks > 0) {
            spdlog::warn("linkage break recorded near block {}", record.header.number);
        }
        return stats;
    }

    //! Highest block below which every block of the job has been stored.
    class PrefixTracker {
      public:
        PrefixTracker(uint64_t from, std::optional<uint64_t> start) : from_{from}, last_{start} {}

        std::optional<uint64_t> complete(uint64_t number) {
            done_.insert(number);
            uint64_t next{last_ ? *last_ + 1 : from_};
            while (done_.erase(next) > 0) {
                last_ = next++;
            }
            return last_;
        }

      private:
        uint64_t from_;
        std::optional<uint64_t> last_;
        std::set<uint64_t> done_;
    };

    CrawlStats run_range(node::NodeClient& client, const CrawlJob& job, uint64_t from, ChainStore& store,
                         std::optional<uint64_t> prefix) {
        const auto started{std::chrono::steady_clock::now()};
        CrawlStats stats;
        std::mutex stats_mutex;
        std::mutex writer_mutex;
        PrefixTracker tracker{job.from_block, prefix};
        std::atomic<uint64_t> next_chunk{0};
        std::atomic<bool> abort{false};
        std::string failure;

        auto worker = [&] {
            for (;;) {
                const uint64_t chunk{next_chunk.fetch_add(1)};
                const uint64_t span{job.to_block - from + 1};
                if (chunk >= (span + job.chunk_size - 1) / job.chunk_size) {
                    return;
                }
                const uint64_t first{from + chunk * job.chunk_size};
                const uint64_t last{std::min(job.to_block, first + job.chunk_size - 1)};
                for (uint64_t n{first}; n <= last; ++n) {
                    if (abort.load()) {
                        return;
                    }
                    try {
                        BlockStats block;
                        std::optional<FetchedBlock> fetched;
                        if (!store.has_block(n)) {
                            fetched = fetch_block(n, client, job.abi_registry);
                        }
                        {
                            std::lock_guard lock{writer_mutex};
                            const CheckpointUpdate checkpoint{job.job_id, tracker.complete(n)};
                            if (fetched) {
                                block = store_block(*fetched, store, checkpoint);
                            } else {
                                store.update_checkpoint(checkpoint);
                            }
                        }
                        std::lock_guard lock{stats_mutex};
                        stats.add(block);
                    } catch (const std::exception& ex) {
                        std::lock_guard lock{stats_mutex};
                        if (!abort.exchange(true)) {
                            failure = "block " + std::to_string(n) + ": " + ex.what();
                        }
                        return;
                    }
                }
            }
        };

        std::vector<std::thread> threads;
        for (unsigned w{1}; w < job.workers; ++w) {
            threads.emplace_back(worker);
        }
        worker();
        for (auto& t : threads) {
            t.join();
        }

        stats.elapsed = std::chrono::steady_clock::now() - started;
        stats.blocks_per_second =
            stats.elapsed.count() > 0 ? static_cast<double>(stats.blocks_ingested) / stats.elapsed.count() : 0.0;
        if (abort) {
            throw IngestError{IngestErrc::kAborted, "crawl aborted at " + failure, stats};
        }
        return stats;
    }

    void validate(const CrawlJob& job) {
        if (job.from_block > job.to_block) {
            throw IngestError{IngestErrc::kBadJob, "from_block exceeds to_block"};
        }
        if (job.workers == 0 || job.chunk_size == 0) {
            throw IngestError{IngestErrc::kBadJob, "workers and chunk_size must be positive"};
        }
        if (job.job_id.empty()) {
            throw IngestError{IngestErrc::kBadJob, "job_id must not be empty"};
        }
    }

}  // namespace

BlockStats ingest_block(uint64_t number, node::NodeClient& client, const CrawlJob& job, ChainStore& store) {
    if (number < job.from_block || number > job.to_block) {
        throw IngestError{IngestErrc::kBadJob, "block " + std::to_string(number) + " outside job range"};
    }
    return store_block(fetch_block(number, client, job.abi_registry), store, std::nullopt);
}

CrawlStats crawl(node::NodeClient& client, const CrawlJob& job, ChainStore& store) {
    validate(job);
    store.create_job(Checkpoint{job.job_id, job.from_block, job.to_block, std::nullopt});
    return run_range(client, job, job.from_block, store, std::nullopt);
}

CrawlStats resume(const std::string& job_id, node::NodeClient& client, const CrawlJob& job, ChainStore& store) {
    const auto checkpoint{store.checkpoint(job_id)};
    if (!checkpoint) {
        throw IngestError{IngestErrc::kUnknownJob, "unknown job " + job_id};
    }
    CrawlJob resumed{job};
    resumed.job_id = job_id;
    resumed.from_block = checkpoint->from_block;
    resumed.to_block = checkpoint->to_block;
    validate(resumed);
    const uint64_t start{checkpoint->last_contiguous_block ? *checkpoint->last_contiguous_block + 1
                                                           : checkpoint->from_block};
    if (start > resumed.to_block) {
        return {};
    }
    return run_range(client, resumed, start, store, checkpoint->last_contiguous_block);
}

}  // namespace chainharvest::ingest
