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

#include <nlohmann/json.hpp>

#include <chainharvest/chain/types.hpp>

//! Ethereum JSON-RPC object shapes: hex quantities, 0x-prefixed data.
namespace chainharvest::node::wire {

nlohmann::json header_to_json(const BlockHeader& header);
BlockHeader header_from_json(const nlohmann::json& doc);

nlohmann::json transaction_to_json(const Transaction& tx);
Transaction transaction_from_json(const nlohmann::json& doc);

nlohmann::json log_to_json(const LogEntry& log);
LogEntry log_from_json(const nlohmann::json& doc);

}  // namespace chainharvest::node::wire
