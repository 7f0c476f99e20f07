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

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include <chainharvest/abi/definition.hpp>
#include <chainharvest/ingest/store.hpp>
#include <chainharvest/node/client.hpp>

namespace chainharvest::ingest {

using AbiRegistry = std::map<Address, abi::AbiDefinition>;

//! Loads every `<address>.abi` file in `dir`. Throws StoreError{kIo} or AbiError.
AbiRegistry load_abi_registry(const std::filesystem::path& dir);

struct CrawlJob {
    std::string job_id{"default"};
    uint64_t from_block{0};
    uint64_t to_block{0};
    unsigned workers{1};
    uint64_t chunk_size{64};
    AbiRegistry abi_registry;
};

//! Decode outcomes for calls to, and logs from, addresses with a registered ABI.
struct DecodeCounts {
    uint64_t call_hits{0};
    uint64_t call_misses{0};  // UnknownSelector, TruncatedData and other decode failures
    uint64_t event_hits{0};
    uint64_t event_misses{0};
};

struct BlockStats {
    uint64_t blocks{0};  // 1 when newly inserted
    uint64_t txs{0};
    uint64_t logs{0};
    DecodeCounts decode;
    uint64_t linkage_breaks{0};
};

struct CrawlStats {
    uint64_t blocks_ingested{0};
    uint64_t txs_ingested{0};
    uint64_t logs_ingested{0};
    uint64_t decode_hits{0};    // calldata decoded
    uint64_t decode_misses{0};  // calldata to a registered address that did not decode
    uint64_t event_hits{0};
    uint64_t event_misses{0};
    uint64_t linkage_breaks{0};
    std::chrono::duration<double> elapsed{0};
    double blocks_per_second{0};

    void add(const BlockStats& block);
};

enum class IngestErrc {
    kBadJob,
    kUnknownJob,
    kAborted,
};

class IngestError : public Error<IngestErrc> {
  public:
    IngestError(IngestErrc code, const std::string& what, CrawlStats stats = {})
        : Error<IngestErrc>{code, what}, stats_{stats} {}
    //! Work completed before the failure (kAborted only).
    [[nodiscard]] const CrawlStats& stats() const noexcept { return stats_; }

  private:
    CrawlStats stats_;
};

struct FetchedBlock {
    BlockRecord record;
    DecodeCounts decode;
};

//! Fetches a block with its logs and decodes what the registry covers.
FetchedBlock fetch_block(uint64_t number, node::NodeClient& client, const AbiRegistry& registry);

//! Fetches, decodes and stores one block. Decode counters only count newly inserted blocks.
BlockStats ingest_block(uint64_t number, node::NodeClient& client, const CrawlJob& job, ChainStore& store);

//! Ingests [from_block, to_block] with `workers` threads pulling `chunk_size` block chunks from a
//! shared queue. The job's checkpoint tracks the contiguous ingested prefix. Throws
//! IngestError{kBadJob} for an invalid job and IngestError{kAborted} on node or store failure.
CrawlStats crawl(node::NodeClient& client, const CrawlJob& job, ChainStore& store);

//! Continues job `job_id` from its checkpoint with the stored range; workers, chunk size and ABI
//! registry come from `job`. Throws IngestError{kUnknownJob}.
CrawlStats resume(const std::string& job_id, node::NodeClient& client, const CrawlJob& job, ChainStore& store);

}  // namespace chainharvest::ingest
