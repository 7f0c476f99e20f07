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

#include "sqlite.hpp"

namespace chainharvest::ingest::sqlite {

namespace {

    [[noreturn]] void fail(sqlite3* db, const std::string& context) {
        throw StoreError{StoreErrc::kQuery, context + ": " + sqlite3_errmsg(db)};
    }

}  // namespace

Database::Database(const std::string& path) {
    if (sqlite3_open_v2(path.c_str(), &db_, SQLITE_OPEN_READWRITE | SQLITE_OPEN_CREATE | SQLITE_OPEN_FULLMUTEX,
                        nullptr) != SQLITE_OK) {
        const std::string message{db_ != nullptr ? sqlite3_errmsg(db_) : "out of memory"};
        sqlite3_close(db_);
        throw StoreError{StoreErrc::kOpen, "cannot open store " + path + ": " + message};
    }
    sqlite3_busy_timeout(db_, 5000);
}

Database::~Database() { sqlite3_close(db_); }

void Database::exec(std::string_view sql) {
    char* error{nullptr};
    if (sqlite3_exec(db_, std::string{sql}.c_str(), nullptr, nullptr, &error) != SQLITE_OK) {
        const std::string message{error != nullptr ? error : "unknown error"};
        sqlite3_free(error);
        throw StoreError{StoreErrc::kQuery, message};
    }
}

Statement Database::prepare(std::string_view sql) { return Statement{db_, sql}; }

Statement::Statement(sqlite3* db, std::string_view sql) : db_{db} {
    if (sqlite3_prepare_v2(db_, sql.data(), static_cast<int>(sql.size()), &stmt_, nullptr) != SQLITE_OK) {
        fail(db_, "prepare");
    }
}

Statement::~Statement() { sqlite3_finalize(stmt_); }

Statement::Statement(Statement&& other) noexcept : db_{other.db_}, stmt_{other.stmt_} { other.stmt_ = nullptr; }

Statement& Statement::bind(int index, int64_t value) {
    if (sqlite3_bind_int64(stmt_, index, value) != SQLITE_OK) {
        fail(db_, "bind");
    }
    return *this;
}

Statement& Statement::bind(int index, std::string_view value) {
    if (sqlite3_bind_text(stmt_, index, value.data(), static_cast<int>(value.size()), SQLITE_TRANSIENT) != SQLITE_OK) {
        fail(db_, "bind");
    }
    return *this;
}

Statement& Statement::bind(int index, const std::optional<std::string>& value) {
    return value ? bind(index, std::string_view{*value}) : bind_null(index);
}

Statement& Statement::bind_null(int index) {
    if (sqlite3_bind_null(stmt_, index) != SQLITE_OK) {
        fail(db_, "bind");
    }
    return *this;
}

bool Statement::step() {
    const int rc{sqlite3_step(stmt_)};
    if (rc == SQLITE_ROW) {
        return true;
    }
    if (rc == SQLITE_DONE) {
        return false;
    }
    fail(db_, "step");
}

int Statement::run() {
    while (step()) {
    }
    const int changed{sqlite3_changes(db_)};
    reset();
    return changed;
}

void Statement::reset() {
    sqlite3_reset(stmt_);
    sqlite3_clear_bindings(stmt_);
}

int Statement::column_count() const { return sqlite3_column_count(stmt_); }

bool Statement::is_null(int column) const { return sqlite3_column_type(stmt_, column) == SQLITE_NULL; }

int64_t Statement::int64(int column) const { return sqlite3_column_int64(stmt_, column); }

std::string Statement::text(int column) const {
    const auto* data{sqlite3_column_text(stmt_, column)};
    const int size{sqlite3_column_bytes(stmt_, column)};
    return data == nullptr ? std::string{} : std::string{reinterpret_cast<const char*>(data), static_cast<size_t>(size)};
}

std::optional<std::string> Statement::optional_text(int column) const {
    if (is_null(column)) {
        return std::nullopt;
    }
    return text(column);
}

std::optional<std::string> Statement::as_text(int column) const {
    switch (sqlite3_column_type(stmt_, column)) {
        case SQLITE_NULL:
            return std::nullopt;
        case SQLITE_INTEGER:
            return std::to_string(int64(column));
        default:
            return text(column);
    }
}

Transaction::Transaction(Database& db) : db_{db} { db_.exec("BEGIN IMMEDIATE"); }

Transaction::~Transaction() {
    if (!done_) {
        try {
            db_.exec("ROLLBACK");
        } catch (const StoreError&) {
        }
    }
}

void Transaction::commit() {
    db_.exec("COMMIT");
    done_ = true;
}

}  // namespace chainharvest::ingest::sqlite
