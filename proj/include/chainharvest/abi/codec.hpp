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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <chainharvest/abi/definition.hpp>
#include <chainharvest/abi/error.hpp>
#include <chainharvest/abi/value.hpp>
#include <chainharvest/chain/types.hpp>

namespace chainharvest::abi {

struct NamedValue {
    std::string name;
    AbiType type;
    Value value;
};

struct DecodedCall {
    std::string function_name;
    std::string canonical_signature;
    Selector selector{};
    std::vector<NamedValue> args;
};

struct EventArg {
    std::string name;
    AbiType type;
    Value value;
    bool indexed{false};
    //! Dynamic or composite indexed argument: value holds the 32-byte topic hash, not the content.
    bool hashed{false};
};

struct DecodedEvent {
    std::string event_name;
    std::string canonical_signature;
    std::vector<EventArg> args;
};

//! Head/tail encoding of a value sequence (no selector).
Bytes encode_values(std::span<const AbiType> types, std::span<const Value> values);

//! Inverse of encode_values. Never reads past `data`.
std::vector<Value> decode_values(std::span<const AbiType> types, ByteView data);

//! selector(f) || encode_values(inputs).
//! Throws AbiError{kArityMismatch | kTypeMismatch | kIntegerOverflow}.
Bytes encode_args(const FunctionAbi& f, std::span<const Value> args);

//! Returns nullopt for empty input (plain value transfer).
//! Throws AbiError{kUnknownSelector | kTruncatedData | kMalformedOffset | kInvalidEncoding}.
std::optional<DecodedCall> decode_call(ByteView input, const AbiDefinition& abi);

//! Throws AbiError{kUnknownTopic | kTopicCountMismatch | kTruncatedData | kMalformedOffset | kInvalidEncoding}.
DecodedEvent decode_event(const LogEntry& log, const AbiDefinition& abi);

//! Builds topics and data for an event emission; the inverse of decode_event.
LogEntry encode_event(const EventAbi& event, std::span<const Value> args, const Address& emitter);

//! Topic word for an indexed argument: the value itself for value types, keccak256 of the
//! in-place encoding for strings, byte strings, arrays and tuples.
Hash32 encode_topic(const AbiType& type, const Value& value);

nlohmann::json to_json(const DecodedCall& call);
nlohmann::json to_json(const DecodedEvent& event);
//! Args-only documents persisted in the store's decoded_args columns.
nlohmann::json args_document(const DecodedCall& call);
nlohmann::json args_document(const DecodedEvent& event);

}  // namespace chainharvest::abi
