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

#include <chainharvest/abi/definition.hpp>

#include <algorithm>
#include <cctype>

#include <nlohmann/json.hpp>

#include <chainharvest/abi/error.hpp>
#include <chainharvest/chain/keccak.hpp>
#include <chainharvest/common/hex.hpp>

namespace chainharvest::abi {

using nlohmann::json;

const char* to_string(AbiErrc code) noexcept {
    switch (code) {
        case AbiErrc::kMalformedAbi:
            return "MalformedAbi";
        case AbiErrc::kUnsupportedType:
            return "UnsupportedType";
        case AbiErrc::kDuplicateSelector:
            return "DuplicateSelector";
        case AbiErrc::kArityMismatch:
            return "ArityMismatch";
        case AbiErrc::kTypeMismatch:
            return "TypeMismatch";
        case AbiErrc::kIntegerOverflow:
            return "IntegerOverflow";
        case AbiErrc::kUnknownSelector:
            return "UnknownSelector";
        case AbiErrc::kTruncatedData:
            return "TruncatedData";
        case AbiErrc::kMalformedOffset:
            return "MalformedOffset";
        case AbiErrc::kInvalidEncoding:
            return "InvalidEncoding";
        case AbiErrc::kUnknownTopic:
            return "UnknownTopic";
        case AbiErrc::kTopicCountMismatch:
            return "TopicCountMismatch";
    }
    return "Unknown";
}

std::string to_hex(const Selector& selector) { return chainharvest::to_hex(selector); }

std::string_view to_string(Mutability m) noexcept {
    switch (m) {
        case Mutability::kPure:
            return "pure";
        case Mutability::kView:
            return "view";
        case Mutability::kNonpayable:
            return "nonpayable";
        case Mutability::kPayable:
            return "payable";
    }
    return "nonpayable";
}

namespace {

    template <class Params, class Proj>
    std::string signature_of(const std::string& name, const Params& params, Proj type_of) {
        std::string out = name + "(";
        for (std::size_t i = 0; i < params.size(); ++i) {
            if (i > 0) out += ',';
            out += type_of(params[i]).canonical();
        }
        return out + ")";
    }

    [[noreturn]] void malformed(const std::string& why) { throw AbiError{AbiErrc::kMalformedAbi, "malformed ABI: " + why}; }

    std::string string_field(const json& obj, const char* key, bool required) {
        const auto it = obj.find(key);
        if (it == obj.end()) {
            if (required) malformed(std::string{"missing '"} + key + "'");
            return {};
        }
        if (!it->is_string()) malformed(std::string{"'"} + key + "' is not a string");
        return it->get<std::string>();
    }

    AbiType param_type(const json& param) {
        if (!param.is_object()) malformed("parameter is not an object");
        const std::string type = string_field(param, "type", true);
        if (!type.starts_with("tuple")) {
            return AbiType::parse(type);
        }
        const auto comps = param.find("components");
        if (comps == param.end() || !comps->is_array()) malformed("tuple parameter without components");
        std::vector<AbiType> components;
        for (const auto& c : *comps) components.push_back(param_type(c));
        if (components.empty()) AbiType::parse("()");  // rejects empty tuples uniformly
        const std::string suffix = type.substr(5);
        return AbiType::parse(AbiType::tuple(std::move(components)).canonical() + suffix);
    }

    const json& array_field(const json& obj, const char* key) {
        static const json kEmpty = json::array();
        const auto it = obj.find(key);
        if (it == obj.end() || it->is_null()) return kEmpty;
        if (!it->is_array()) malformed(std::string{"'"} + key + "' is not an array");
        return *it;
    }

    Mutability parse_mutability(const json& entry) {
        const std::string sm = string_field(entry, "stateMutability", false);
        if (sm == "pure") return Mutability::kPure;
        if (sm == "view") return Mutability::kView;
        if (sm == "payable") return Mutability::kPayable;
        if (sm == "nonpayable") return Mutability::kNonpayable;
        if (!sm.empty()) malformed("unknown stateMutability '" + sm + "'");
        if (entry.value("payable", false)) return Mutability::kPayable;
        if (entry.value("constant", false)) return Mutability::kView;
        return Mutability::kNonpayable;
    }

    std::string strip_spaces(std::string_view s) {
        std::string out;
        for (const char c : s) {
            if (std::isspace(static_cast<unsigned char>(c)) == 0) out += c;
        }
        return out;
    }

}  // namespace

std::string FunctionAbi::canonical_signature() const {
    return signature_of(name, inputs, [](const Param& p) -> const AbiType& { return p.type; });
}

Selector selector(const FunctionAbi& f) {
    const Hash32 h = keccak256(f.canonical_signature());
    Selector sel{};
    std::copy_n(h.bytes().begin(), 4, sel.begin());
    return sel;
}

FunctionAbi parse_function_signature(std::string_view signature) {
    const std::string sig = strip_spaces(signature);
    const auto open = sig.find('(');
    if (open == std::string::npos || open == 0 || sig.back() != ')') {
        throw AbiError{AbiErrc::kMalformedAbi, "malformed function signature '" + sig + "'"};
    }
    FunctionAbi f;
    f.name = sig.substr(0, open);
    const std::string args = sig.substr(open);
    if (args != "()") {
        const AbiType as_tuple = AbiType::parse(args);
        for (std::size_t i = 0; i < as_tuple.components().size(); ++i) {
            f.inputs.push_back({"arg" + std::to_string(i), as_tuple.components()[i]});
        }
    }
    return f;
}

std::string EventAbi::canonical_signature() const {
    return signature_of(name, inputs, [](const EventParam& p) -> const AbiType& { return p.type; });
}

std::size_t EventAbi::indexed_count() const noexcept {
    return static_cast<std::size_t>(std::count_if(inputs.begin(), inputs.end(), [](const EventParam& p) { return p.indexed; }));
}

Hash32 event_topic(const EventAbi& e) { return keccak256(e.canonical_signature()); }

AbiDefinition::AbiDefinition(std::vector<FunctionAbi> functions, std::vector<EventAbi> events)
    : functions_{std::move(functions)}, events_{std::move(events)} {
    for (std::size_t i = 0; i < functions_.size(); ++i) {
        const auto [it, inserted] = selector_index_.emplace(selector(functions_[i]), i);
        if (!inserted) {
            throw AbiError{AbiErrc::kDuplicateSelector, "duplicate selector " + to_hex(it->first) + " for " +
                                                            functions_[i].canonical_signature()};
        }
    }
    for (std::size_t i = 0; i < events_.size(); ++i) {
        if (events_[i].anonymous) continue;
        const auto [it, inserted] = topic_index_.emplace(event_topic(events_[i]), i);
        if (!inserted) {
            throw AbiError{AbiErrc::kDuplicateSelector, "duplicate event topic for " + events_[i].canonical_signature()};
        }
    }
}

const FunctionAbi* AbiDefinition::find_function(const Selector& sel) const {
    const auto it = selector_index_.find(sel);
    return it == selector_index_.end() ? nullptr : &functions_[it->second];
}

const FunctionAbi* AbiDefinition::find_function(std::string_view name) const {
    const auto it = std::find_if(functions_.begin(), functions_.end(), [&](const FunctionAbi& f) { return f.name == name; });
    return it == functions_.end() ? nullptr : &*it;
}

const EventAbi* AbiDefinition::find_event(const Hash32& topic) const {
    const auto it = topic_index_.find(topic);
    return it == topic_index_.end() ? nullptr : &events_[it->second];
}

const EventAbi* AbiDefinition::find_event(std::string_view name) const {
    const auto it = std::find_if(events_.begin(), events_.end(), [&](const EventAbi& e) { return e.name == name; });
    return it == events_.end() ? nullptr : &*it;
}

std::vector<const EventAbi*> AbiDefinition::anonymous_events() const {
    std::vector<const EventAbi*> out;
    for (const auto& e : events_) {
        if (e.anonymous) out.push_back(&e);
    }
    return out;
}

AbiDefinition parse_abi(std::string_view document) {
    json doc;
    try {
        doc = json::parse(document);
    } catch (const json::parse_error& e) {
        malformed(e.what());
    }
    if (!doc.is_array()) malformed("document is not an array");

    std::vector<FunctionAbi> functions;
    std::vector<EventAbi> events;
    try {
    for (const auto& entry : doc) {
        if (!entry.is_object()) malformed("entry is not an object");
        const std::string kind = entry.contains("type") ? string_field(entry, "type", true) : "function";
        if (kind == "function") {
            FunctionAbi f;
            f.name = string_field(entry, "name", true);
            if (f.name.empty()) malformed("function without a name");
            for (const auto& p : array_field(entry, "inputs")) {
                f.inputs.push_back({p.is_object() ? p.value("name", "") : "", param_type(p)});
            }
            for (const auto& p : array_field(entry, "outputs")) f.outputs.push_back(param_type(p));
            f.mutability = parse_mutability(entry);
            functions.push_back(std::move(f));
        } else if (kind == "event") {
            EventAbi e;
            e.name = string_field(entry, "name", true);
            if (e.name.empty()) malformed("event without a name");
            e.anonymous = entry.value("anonymous", false);
            for (const auto& p : array_field(entry, "inputs")) {
                e.inputs.push_back({p.is_object() ? p.value("name", "") : "", param_type(p), p.value("indexed", false)});
            }
            const std::size_t limit = e.anonymous ? 4 : 3;
            if (e.indexed_count() > limit) malformed("event " + e.name + " has too many indexed inputs");
            events.push_back(std::move(e));
        } else if (kind == "constructor" || kind == "fallback" || kind == "receive" || kind == "error") {
            continue;
        } else {
            malformed("unknown entry type '" + kind + "'");
        }
    }
    } catch (const json::exception& e) {
        malformed(e.what());
    }
    return AbiDefinition{std::move(functions), std::move(events)};
}

}  // namespace chainharvest::abi
