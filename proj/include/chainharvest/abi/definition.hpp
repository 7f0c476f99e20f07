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

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <chainharvest/abi/type.hpp>
#include <chainharvest/chain/types.hpp>

namespace chainharvest::abi {

using Selector = std::array<uint8_t, 4>;

using chainharvest::to_hex;
std::string to_hex(const Selector& selector);

enum class Mutability {
    kPure,
    kView,
    kNonpayable,
    kPayable,
};

std::string_view to_string(Mutability m) noexcept;

struct Param {
    std::string name;
    AbiType type;
};

struct FunctionAbi {
    std::string name;
    std::vector<Param> inputs;
    std::vector<AbiType> outputs;
    Mutability mutability{Mutability::kNonpayable};

    //! name(type1,type2,...) with canonical type names and no spaces.
    [[nodiscard]] std::string canonical_signature() const;
};

//! First four bytes of keccak256(canonical signature).
Selector selector(const FunctionAbi& f);

//! Builds a FunctionAbi from "name(type,...)"; parameters are named arg0, arg1, ...
FunctionAbi parse_function_signature(std::string_view signature);

struct EventParam {
    std::string name;
    AbiType type;
    bool indexed{false};
};

struct EventAbi {
    std::string name;
    std::vector<EventParam> inputs;
    bool anonymous{false};

    [[nodiscard]] std::string canonical_signature() const;
    [[nodiscard]] std::size_t indexed_count() const noexcept;
};

//! keccak256(canonical event signature): topic 0 of non-anonymous events.
Hash32 event_topic(const EventAbi& e);

class AbiDefinition {
  public:
    AbiDefinition() = default;

    //! Throws AbiError{kDuplicateSelector} when two functions (or two events) share a signature hash.
    AbiDefinition(std::vector<FunctionAbi> functions, std::vector<EventAbi> events);

    [[nodiscard]] const std::vector<FunctionAbi>& functions() const noexcept { return functions_; }
    [[nodiscard]] const std::vector<EventAbi>& events() const noexcept { return events_; }

    [[nodiscard]] const FunctionAbi* find_function(const Selector& sel) const;
    [[nodiscard]] const FunctionAbi* find_function(std::string_view name) const;
    [[nodiscard]] const EventAbi* find_event(const Hash32& topic) const;
    [[nodiscard]] const EventAbi* find_event(std::string_view name) const;
    [[nodiscard]] std::vector<const EventAbi*> anonymous_events() const;

    [[nodiscard]] const std::map<Selector, std::size_t>& selector_index() const noexcept { return selector_index_; }
    [[nodiscard]] const std::map<Hash32, std::size_t>& topic_index() const noexcept { return topic_index_; }

  private:
    std::vector<FunctionAbi> functions_;
    std::vector<EventAbi> events_;
    std::map<Selector, std::size_t> selector_index_;
    std::map<Hash32, std::size_t> topic_index_;
};

//! Parses the compiler-emitted JSON ABI document (array of descriptors).
//! Constructor, fallback, receive and error entries are skipped.
//! Throws AbiError{kMalformedAbi | kUnsupportedType | kDuplicateSelector}.
AbiDefinition parse_abi(std::string_view document);

}  // namespace chainharvest::abi
