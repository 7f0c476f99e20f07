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
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <chainharvest/chain/types.hpp>
#include <chainharvest/common/error.hpp>

namespace chainharvest::ingest {

enum class StoreErrc {
    kOpen,
    kQuery,
    kIo,
    kUnknownJob,
};

using StoreError = Error<StoreErrc>;

struct StoredTransaction {
    Transaction tx;
    uint64_t timestamp{0};  // of the containing block
    std::optional<std::string> decoded_fn;
    std::optional<std::string> decoded_args;  // JSON document
};

struct StoredLog {
    LogEntry log;
    std::optional<std::string> decoded_event;
    std::optional<std::string> decoded_args;
};

//! Everything persisted for one block, written atomically.
struct BlockRecord {
    BlockHeader header;
    std::vector<StoredTransaction> transactions;
    std::vector<StoredLog> logs;
};

struct CheckpointUpdate {
    std::string job_id;
    std::optional<uint64_t> last_contiguous_block;
};

struct WriteResult {
    bool inserted{false};  // false: the block was already present and nothing changed
    uint64_t transactions{0};
    uint64_t logs{0};
    uint64_t linkage_breaks{0};  // new breaks recorded at this height or the next
};

struct Checkpoint {
    std::string job_id;
    uint64_t from_block{0};
    uint64_t to_block{0};
    std::optional<uint64_t> last_contiguous_block;  // nullopt: nothing ingested yet
};

struct LinkageBreak {
    uint64_t height{0};
    Hash32 expected_parent;  // hash of the stored block at height - 1
    Hash32 actual_parent;    // parent_hash recorded in the block at height
};

enum class Table {
    kBlocks,
    kTransactions,
    kLogs,
    kCheckpoints,
    kLinkageBreaks,
};

const char* to_string(Table table) noexcept;
std::optional<Table> table_from_string(std::string_view name);
//! Column order used by export_table.
std::vector<std::string> table_columns(Table table);

//! Relational chain store on an embedded single-file database. All members are thread-safe;
//! writes are serialized on one connection.
class ChainStore {
  public:
    //! Opens or creates the store; ":memory:" gives a private in-memory database.
    explicit ChainStore(const std::string& path);
    ~ChainStore();
    ChainStore(const ChainStore&) = delete;
    ChainStore& operator=(const ChainStore&) = delete;

    //! Inserts the block with its transactions and logs in one transaction. A block whose number
    //! is already stored is left untouched. Parent linkage is checked against both stored
    //! neighbours and mismatches are recorded. The checkpoint, when given, is written in the same
    //! transaction.
    WriteResult write_block(const BlockRecord& record, const std::optional<CheckpointUpdate>& checkpoint = {});

    [[nodiscard]] bool has_block(uint64_t number) const;
    [[nodiscard]] uint64_t row_count(Table table) const;

    void create_job(const Checkpoint& job);
    //! Throws StoreError{kUnknownJob}.
    void update_checkpoint(const CheckpointUpdate& update);
    [[nodiscard]] std::optional<Checkpoint> checkpoint(const std::string& job_id) const;

    [[nodiscard]] std::vector<BlockHeader> headers() const;
    //! Ordered by (block, index).
    [[nodiscard]] std::vector<StoredTransaction> transactions() const;
    [[nodiscard]] std::optional<StoredTransaction> find_transaction(const Hash32& hash) const;
    [[nodiscard]] std::vector<StoredLog> logs() const;
    [[nodiscard]] std::vector<LinkageBreak> linkage_breaks() const;

    //! keccak256 over an ordered, length-prefixed dump of blocks, transactions, logs and
    //! linkage breaks. Job checkpoints are bookkeeping and excluded.
    [[nodiscard]] Hash32 digest() const;

    //! CSV with a header row, columns as table_columns, rows in primary-key order.
    //! Returns the data row count. Throws StoreError{kIo}.
    uint64_t export_table(Table table, const std::filesystem::path& path) const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace chainharvest::ingest
