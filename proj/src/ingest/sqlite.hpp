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
#include <optional>
#include <string>
#include <string_view>

#include <sqlite3.h>

#include <chainharvest/ingest/store.hpp>

namespace chainharvest::ingest::sqlite {

class Statement;

//! Owning handle on one connection.
class Database {
  public:
    explicit Database(const std::string& path);
    ~Database();
    Database(const Database&) = delete;
    Database& operator=(const Database&) = delete;

    void exec(std::string_view sql);
    Statement prepare(std::string_view sql);
    [[nodiscard]] sqlite3* handle() const noexcept { return db_; }

  private:
    sqlite3* db_{nullptr};
};

class Statement {
  public:
    Statement(sqlite3* db, std::string_view sql);
    ~Statement();
    Statement(Statement&& other) noexcept;
    Statement(const Statement&) = delete;
    Statement& operator=(const Statement&) = delete;
    Statement& operator=(Statement&&) = delete;

    Statement& bind(int index, int64_t value);
    Statement& bind(int index, uint64_t value) { return bind(index, static_cast<int64_t>(value)); }
    Statement& bind(int index, std::string_view value);
    Statement& bind(int index, const std::string& value) { return bind(index, std::string_view{value}); }
    Statement& bind(int index, const char* value) { return bind(index, std::string_view{value}); }
    Statement& bind(int index, const std::optional<std::string>& value);
    Statement& bind_null(int index);

    //! True while a row is available.
    bool step();
    //! Runs to completion; returns the number of rows changed.
    int run();
    void reset();

    [[nodiscard]] int column_count() const;
    [[nodiscard]] bool is_null(int column) const;
    [[nodiscard]] int64_t int64(int column) const;
    [[nodiscard]] uint64_t uint64(int column) const { return static_cast<uint64_t>(int64(column)); }
    [[nodiscard]] std::string text(int column) const;
    [[nodiscard]] std::optional<std::string> optional_text(int column) const;
    //! Text rendering of any column type; nullopt for NULL.
    [[nodiscard]] std::optional<std::string> as_text(int column) const;

  private:
    sqlite3* db_;
    sqlite3_stmt* stmt_{nullptr};
};

//! Commits on commit(), rolls back otherwise.
class Transaction {
  public:
    explicit Transaction(Database& db);
    ~Transaction();
    Transaction(const Transaction&) = delete;
    Transaction& operator=(const Transaction&) = delete;
    void commit();

  private:
    Database& db_;
    bool done_{false};
};

}  // namespace chainharvest::ingest::sqlite
