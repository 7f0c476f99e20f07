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

#include <chainharvest/ingest/store.hpp>

#include <fstream>
#include <mutex>

#include <nlohmann/json.hpp>

#include <chainharvest/chain/keccak.hpp>
#include <chainharvest/common/csv.hpp>

#include "sqlite.hpp"

namespace chainharvest::ingest {

namespace {

    constexpr std::string_view kSchema{R"sql(
CREATE TABLE IF NOT EXISTS blocks(
  number INTEGER PRIMARY KEY,
  hash TEXT NOT NULL UNIQUE,
  parent_hash TEXT NOT NULL,
  timestamp INTEGER NOT NULL,
  miner TEXT NOT NULL,
  tx_root TEXT NOT NULL);
CREATE TABLE IF NOT EXISTS transactions(
  hash TEXT PRIMARY KEY,
  block_number INTEGER NOT NULL REFERENCES blocks(number),
  tx_index INTEGER NOT NULL,
  "from" TEXT NOT NULL,
  "to" TEXT,
  value TEXT NOT NULL,
  gas_limit INTEGER NOT NULL,
  gas_price TEXT NOT NULL,
  nonce INTEGER NOT NULL,
  input TEXT NOT NULL,
  decoded_fn TEXT,
  decoded_args TEXT,
  UNIQUE(block_number, tx_index));
CREATE TABLE IF NOT EXISTS logs(
  block_number INTEGER NOT NULL,
  tx_index INTEGER NOT NULL,
  log_index INTEGER NOT NULL,
  address TEXT NOT NULL,
  topics TEXT NOT NULL,
  data TEXT NOT NULL,
  decoded_event TEXT,
  decoded_args TEXT,
  PRIMARY KEY(block_number, tx_index, log_index),
  FOREIGN KEY(block_number, tx_index) REFERENCES transactions(block_number, tx_index));
CREATE TABLE IF NOT EXISTS checkpoints(
  job_id TEXT PRIMARY KEY,
  from_block INTEGER NOT NULL,
  to_block INTEGER NOT NULL,
  last_contiguous_block INTEGER);
CREATE TABLE IF NOT EXISTS linkage_breaks(
  height INTEGER PRIMARY KEY,
  expected_parent TEXT NOT NULL,
  actual_parent TEXT NOT NULL);
)sql"};

    struct TableInfo {
        Table table;
        const char* name;
        std::vector<std::string> columns;
        const char* order_by;
    };

    const std::vector<TableInfo>& table_infos() {
        static const std::vector<TableInfo> infos{
            {Table::kBlocks, "blocks", {"number", "hash", "parent_hash", "timestamp", "miner", "tx_root"}, "number"},
            {Table::kTransactions,
             "transactions",
             {"hash", "block_number", "tx_index", "from", "to", "value", "gas_limit", "gas_price", "nonce", "input",
              "decoded_fn", "decoded_args"},
             "hash"},
            {Table::kLogs,
             "logs",
             {"block_number", "tx_index", "log_index", "address", "topics", "data", "decoded_event", "decoded_args"},
             "block_number, tx_index, log_index"},
            {Table::kCheckpoints, "checkpoints", {"job_id", "from_block", "to_block", "last_contiguous_block"}, "job_id"},
            {Table::kLinkageBreaks, "linkage_breaks", {"height", "expected_parent", "actual_parent"}, "height"},
        };
        return infos;
    }

    const TableInfo& info(Table table) {
        for (const TableInfo& i : table_infos()) {
            if (i.table == table) {
                return i;
            }
        }
        throw std::invalid_argument{"unknown table"};
    }

    std::string select_all(const TableInfo& t) {
        std::string sql{"SELECT "};
        for (std::size_t i{0}; i < t.columns.size(); ++i) {
            sql += (i > 0 ? ", \"" : "\"") + t.columns[i] + "\"";
        }
        return sql + " FROM " + t.name + " ORDER BY " + t.order_by;
    }

    std::string topics_text(const std::vector<Hash32>& topics) {
        nlohmann::json doc = nlohmann::json::array();
        for (const Hash32& t : topics) {
            doc.push_back(t.to_hex());
        }
        return doc.dump();
    }

    std::vector<Hash32> topics_from_text(const std::string& text) {
        std::vector<Hash32> out;
        for (const auto& t : nlohmann::json::parse(text)) {
            out.push_back(Hash32::from_hex(t.get<std::string>()));
        }
        return out;
    }

    constexpr std::string_view kTransactionColumns{
        R"(t.hash, t.block_number, t.tx_index, t."from", t."to", t.value, t.gas_limit, t.gas_price, t.nonce,
           t.input, t.decoded_fn, t.decoded_args, b.timestamp
           FROM transactions t JOIN blocks b ON b.number = t.block_number)"};

    StoredTransaction read_transaction(const sqlite::Statement& s) {
        StoredTransaction out;
        Transaction& tx{out.tx};
        tx.hash = Hash32::from_hex(s.text(0));
        tx.block_number = s.uint64(1);
        tx.tx_index = s.uint64(2);
        tx.from = Address::from_hex(s.text(3));
        if (!s.is_null(4)) {
            tx.to = Address::from_hex(s.text(4));
        }
        tx.value = u256_from_decimal(s.text(5));
        tx.gas_limit = s.uint64(6);
        tx.gas_price = u256_from_decimal(s.text(7));
        tx.nonce = s.uint64(8);
        tx.input = from_hex(s.text(9));
        out.decoded_fn = s.optional_text(10);
        out.decoded_args = s.optional_text(11);
        out.timestamp = s.uint64(12);
        return out;
    }

    void append_field(Bytes& out, const std::optional<std::string>& field) {
        out.push_back(field ? 1 : 0);
        const uint64_t size{field ? field->size() : 0};
        for (int shift{56}; shift >= 0; shift -= 8) {
            out.push_back(static_cast<uint8_t>(size >> shift));
        }
        if (field) {
            out.insert(out.end(), field->begin(), field->end());
        }
    }

    void write_checkpoint(sqlite::Database& db, const CheckpointUpdate& checkpoint) {
        auto update{db.prepare("UPDATE checkpoints SET last_contiguous_block = ? WHERE job_id = ?")};
        if (checkpoint.last_contiguous_block) {
            update.bind(1, *checkpoint.last_contiguous_block);
        } else {
            update.bind_null(1);
        }
        update.bind(2, checkpoint.job_id);
        if (update.run() == 0) {
            throw StoreError{StoreErrc::kUnknownJob, "unknown job " + checkpoint.job_id};
        }
    }

}  // namespace

const char* to_string(Table table) noexcept {
    switch (table) {
        case Table::kBlocks:
            return "blocks";
        case Table::kTransactions:
            return "transactions";
        case Table::kLogs:
            return "logs";
        case Table::kCheckpoints:
            return "checkpoints";
        case Table::kLinkageBreaks:
            return "linkage_breaks";
    }
    return "unknown";
}

std::optional<Table> table_from_string(std::string_view name) {
    for (const TableInfo& t : table_infos()) {
        if (name == t.name) {
            return t.table;
        }
    }
    return std::nullopt;
}

std::vector<std::string> table_columns(Table table) { return info(table).columns; }

struct ChainStore::Impl {
    explicit Impl(const std::string& path) : db{path} {}

    sqlite::Database db;
    mutable std::mutex mutex;
};

ChainStore::ChainStore(const std::string& path) : impl_{std::make_unique<Impl>(path)} {
    auto& db{impl_->db};
    if (path != ":memory:") {
        db.exec("PRAGMA journal_mode=WAL");
    }
    db.exec("PRAGMA synchronous=NORMAL");
    db.exec("PRAGMA foreign_keys=ON");
    db.exec(kSchema);
}

ChainStore::~ChainStore() = default;

WriteResult ChainStore::write_block(const BlockRecord& record, const std::optional<CheckpointUpdate>& checkpoint) {
    std::lock_guard lock{impl_->mutex};
    auto& db{impl_->db};
    sqlite::Transaction txn{db};
    WriteResult result;
    const BlockHeader& h{record.header};

    auto exists{db.prepare("SELECT 1 FROM blocks WHERE number = ?")};
    exists.bind(1, h.number);
    if (!exists.step()) {
        result.inserted = true;
        db.prepare("INSERT INTO blocks(number, hash, parent_hash, timestamp, miner, tx_root) VALUES (?, ?, ?, ?, ?, ?)")
            .bind(1, h.number)
            .bind(2, h.hash.to_hex())
            .bind(3, h.parent_hash.to_hex())
            .bind(4, h.timestamp)
            .bind(5, h.miner.to_hex())
            .bind(6, h.tx_root.to_hex())
            .run();

        auto insert_tx{db.prepare(
            R"(INSERT INTO transactions(hash, block_number, tx_index, "from", "to", value, gas_limit, gas_price,
               nonce, input, decoded_fn, decoded_args) VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?))")};
        for (const StoredTransaction& st : record.transactions) {
            const Transaction& tx{st.tx};
            insert_tx.bind(1, tx.hash.to_hex())
                .bind(2, tx.block_number)
                .bind(3, tx.tx_index)
                .bind(4, tx.from.to_hex())
                .bind(5, tx.to ? std::optional{tx.to->to_hex()} : std::nullopt)
                .bind(6, to_decimal(tx.value))
                .bind(7, tx.gas_limit)
                .bind(8, to_decimal(tx.gas_price))
                .bind(9, tx.nonce)
                .bind(10, to_hex(tx.input))
                .bind(11, st.decoded_fn)
                .bind(12, st.decoded_args)
                .run();
            ++result.transactions;
        }

        auto insert_log{db.prepare(
            R"(INSERT INTO logs(block_number, tx_index, log_index, address, topics, data, decoded_event, decoded_args)
               VALUES (?, ?, ?, ?, ?, ?, ?, ?))")};
        for (const StoredLog& sl : record.logs) {
            const LogEntry& log{sl.log};
            insert_log.bind(1, log.block_number)
                .bind(2, log.tx_index)
                .bind(3, log.log_index)
                .bind(4, log.address.to_hex())
                .bind(5, topics_text(log.topics))
                .bind(6, to_hex(log.data))
                .bind(7, sl.decoded_event)
                .bind(8, sl.decoded_args)
                .run();
            ++result.logs;
        }

        auto record_break = [&](uint64_t height, const std::string& expected, const std::string& actual) {
            result.linkage_breaks += static_cast<uint64_t>(
                db.prepare("INSERT OR IGNORE INTO linkage_breaks(height, expected_parent, actual_parent) VALUES (?, ?, ?)")
                    .bind(1, height)
                    .bind(2, expected)
                    .bind(3, actual)
                    .run());
        };
        if (h.number > 0) {
            auto prev{db.prepare("SELECT hash FROM blocks WHERE number = ?")};
            prev.bind(1, h.number - 1);
            if (prev.step() && prev.text(0) != h.parent_hash.to_hex()) {
                record_break(h.number, prev.text(0), h.parent_hash.to_hex());
            }
        }
        auto next{db.prepare("SELECT parent_hash FROM blocks WHERE number = ?")};
        next.bind(1, h.number + 1);
        if (next.step() && next.text(0) != h.hash.to_hex()) {
            record_break(h.number + 1, h.hash.to_hex(), next.text(0));
        }
    }

    if (checkpoint) {
        write_checkpoint(db, *checkpoint);
    }
    txn.commit();
    return result;
}

bool ChainStore::has_block(uint64_t number) const {
    std::lock_guard lock{impl_->mutex};
    auto s{impl_->db.prepare("SELECT 1 FROM blocks WHERE number = ?")};
    s.bind(1, number);
    return s.step();
}

uint64_t ChainStore::row_count(Table table) const {
    std::lock_guard lock{impl_->mutex};
    auto s{impl_->db.prepare(std::string{"SELECT COUNT(*) FROM "} + info(table).name)};
    s.step();
    return s.uint64(0);
}

void ChainStore::create_job(const Checkpoint& job) {
    std::lock_guard lock{impl_->mutex};
    auto s{impl_->db.prepare(
        R"(INSERT INTO checkpoints(job_id, from_block, to_block, last_contiguous_block) VALUES (?, ?, ?, ?)
           ON CONFLICT(job_id) DO UPDATE SET from_block = excluded.from_block, to_block = excluded.to_block,
           last_contiguous_block = excluded.last_contiguous_block)")};
    s.bind(1, job.job_id).bind(2, job.from_block).bind(3, job.to_block);
    if (job.last_contiguous_block) {
        s.bind(4, *job.last_contiguous_block);
    } else {
        s.bind_null(4);
    }
    s.run();
}

void ChainStore::update_checkpoint(const CheckpointUpdate& update) {
    std::lock_guard lock{impl_->mutex};
    write_checkpoint(impl_->db, update);
}

std::optional<Checkpoint> ChainStore::checkpoint(const std::string& job_id) const {
    std::lock_guard lock{impl_->mutex};
    auto s{impl_->db.prepare(
        "SELECT job_id, from_block, to_block, last_contiguous_block FROM checkpoints WHERE job_id = ?")};
    s.bind(1, job_id);
    if (!s.step()) {
        return std::nullopt;
    }
    Checkpoint out{s.text(0), s.uint64(1), s.uint64(2), std::nullopt};
    if (!s.is_null(3)) {
        out.last_contiguous_block = s.uint64(3);
    }
    return out;
}

std::vector<BlockHeader> ChainStore::headers() const {
    std::lock_guard lock{impl_->mutex};
    auto s{impl_->db.prepare("SELECT number, hash, parent_hash, timestamp, miner, tx_root FROM blocks ORDER BY number")};
    std::vector<BlockHeader> out;
    while (s.step()) {
        BlockHeader h;
        h.number = s.uint64(0);
        h.hash = Hash32::from_hex(s.text(1));
        h.parent_hash = Hash32::from_hex(s.text(2));
        h.timestamp = s.uint64(3);
        h.miner = Address::from_hex(s.text(4));
        h.tx_root = Hash32::from_hex(s.text(5));
        out.push_back(h);
    }
    return out;
}

std::vector<StoredTransaction> ChainStore::transactions() const {
    std::lock_guard lock{impl_->mutex};
    auto s{impl_->db.prepare(std::string{"SELECT "} + std::string{kTransactionColumns} +
                             " ORDER BY t.block_number, t.tx_index")};
    std::vector<StoredTransaction> out;
    while (s.step()) {
        out.push_back(read_transaction(s));
    }
    return out;
}

std::optional<StoredTransaction> ChainStore::find_transaction(const Hash32& hash) const {
    std::lock_guard lock{impl_->mutex};
    auto s{impl_->db.prepare(std::string{"SELECT "} + std::string{kTransactionColumns} + " WHERE t.hash = ?")};
    s.bind(1, hash.to_hex());
    if (!s.step()) {
        return std::nullopt;
    }
    return read_transaction(s);
}

std::vector<StoredLog> ChainStore::logs() const {
    std::lock_guard lock{impl_->mutex};
    auto s{impl_->db.prepare(
        "SELECT block_number, tx_index, log_index, address, topics, data, decoded_event, decoded_args FROM logs "
        "ORDER BY block_number, tx_index, log_index")};
    std::vector<StoredLog> out;
    while (s.step()) {
        StoredLog sl;
        sl.log.block_number = s.uint64(0);
        sl.log.tx_index = s.uint64(1);
        sl.log.log_index = s.uint64(2);
        sl.log.address = Address::from_hex(s.text(3));
        sl.log.topics = topics_from_text(s.text(4));
        sl.log.data = from_hex(s.text(5));
        sl.decoded_event = s.optional_text(6);
        sl.decoded_args = s.optional_text(7);
        out.push_back(std::move(sl));
    }
    return out;
}

std::vector<LinkageBreak> ChainStore::linkage_breaks() const {
    std::lock_guard lock{impl_->mutex};
    auto s{impl_->db.prepare("SELECT height, expected_parent, actual_parent FROM linkage_breaks ORDER BY height")};
    std::vector<LinkageBreak> out;
    while (s.step()) {
        out.push_back({s.uint64(0), Hash32::from_hex(s.text(1)), Hash32::from_hex(s.text(2))});
    }
    return out;
}

Hash32 ChainStore::digest() const {
    std::lock_guard lock{impl_->mutex};
    Bytes dump;
    for (const TableInfo& t : table_infos()) {
        if (t.table == Table::kCheckpoints) {
            continue;
        }
        append_field(dump, std::string{t.name});
        auto s{impl_->db.prepare(select_all(t))};
        while (s.step()) {
            for (int c{0}; c < s.column_count(); ++c) {
                append_field(dump, s.as_text(c));
            }
        }
    }
    return keccak256(dump);
}

uint64_t ChainStore::export_table(Table table, const std::filesystem::path& path) const {
    std::lock_guard lock{impl_->mutex};
    const TableInfo& t{info(table)};
    std::ofstream out{path, std::ios::binary | std::ios::trunc};
    if (!out) {
        throw StoreError{StoreErrc::kIo, "cannot write " + path.string()};
    }
    csv::write_row(out, t.columns);
    auto s{impl_->db.prepare(select_all(t))};
    uint64_t rows{0};
    std::vector<std::optional<std::string>> fields(t.columns.size());
    while (s.step()) {
        for (int c{0}; c < s.column_count(); ++c) {
            fields[static_cast<std::size_t>(c)] = s.as_text(c);
        }
        csv::write_row(out, fields);
        ++rows;
    }
    out.flush();
    if (!out) {
        throw StoreError{StoreErrc::kIo, "write failed for " + path.string()};
    }
    return rows;
}

}  // namespace chainharvest::ingest
