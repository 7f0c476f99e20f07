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

#include <chainharvest/abi/codec.hpp>

#include <algorithm>
#include <limits>

#include <chainharvest/chain/keccak.hpp>
#include <chainharvest/common/hex.hpp>

namespace chainharvest::abi {

namespace {

    using Kind = AbiType::Kind;

    constexpr std::size_t kWord{32};

    [[noreturn]] void fail(AbiErrc code, const std::string& what) { throw AbiError{code, what}; }

    std::size_t padded(std::size_t n) { return (n + kWord - 1) / kWord * kWord; }

    const BigInt& two_pow_256() {
        static const BigInt v = BigInt{1} << 256;
        return v;
    }

    Bytes big_to_word(const BigInt& non_negative) {
        Bytes word(kWord, 0);
        BigInt v = non_negative;
        for (std::size_t i = kWord; i-- > 0 && v != 0;) {
            word[i] = static_cast<uint8_t>(static_cast<unsigned>(v & 0xff));
            v >>= 8;
        }
        return word;
    }

    BigInt word_to_big(ByteView word) {
        BigInt v{0};
        for (const uint8_t b : word) v = (v << 8) | b;
        return v;
    }

    void append(Bytes& out, ByteView more) { out.insert(out.end(), more.begin(), more.end()); }

    void append_word(Bytes& out, std::size_t n) { append(out, big_to_word(BigInt{n})); }

    template <class T>
    const T& expect(const Value& v, const AbiType& type) {
        const T* p = std::get_if<T>(&v.data);
        if (p == nullptr) fail(AbiErrc::kTypeMismatch, "value does not match type " + type.canonical());
        return *p;
    }

    // ---------------------------------------------------------------- encoding

    Bytes encode_sequence(std::span<const AbiType> types, std::span<const Value> values);

    Bytes encode_static_word(const AbiType& type, const Value& value) {
        switch (type.kind()) {
            case Kind::kUint: {
                const BigInt& v = expect<UnsignedInt>(value, type).value;
                if (v < 0 || (v >> type.bits()) != 0) {
                    fail(AbiErrc::kIntegerOverflow, to_decimal(v) + " does not fit " + type.canonical());
                }
                return big_to_word(v);
            }
            case Kind::kInt: {
                const BigInt& v = expect<SignedInt>(value, type).value;
                const BigInt limit = BigInt{1} << (type.bits() - 1);
                if (v < -limit || v >= limit) {
                    fail(AbiErrc::kIntegerOverflow, to_decimal(v) + " does not fit " + type.canonical());
                }
                return big_to_word(v < 0 ? BigInt{two_pow_256() + v} : v);
            }
            case Kind::kAddress: {
                Bytes word(kWord, 0);
                const auto& a = expect<Address>(value, type).bytes();
                std::copy(a.begin(), a.end(), word.begin() + 12);
                return word;
            }
            case Kind::kBool: {
                Bytes word(kWord, 0);
                word[31] = expect<bool>(value, type) ? 1 : 0;
                return word;
            }
            case Kind::kFixedBytes: {
                const Bytes& b = expect<Bytes>(value, type);
                if (b.size() != type.length()) {
                    fail(AbiErrc::kTypeMismatch, "expected " + std::to_string(type.length()) + " bytes for " + type.canonical());
                }
                Bytes word(kWord, 0);
                std::copy(b.begin(), b.end(), word.begin());
                return word;
            }
            default:
                fail(AbiErrc::kTypeMismatch, "not a value type: " + type.canonical());
        }
    }

    const std::vector<Value>& expect_items(const Value& value, const AbiType& type) {
        if (type.kind() == Kind::kTuple) {
            const auto& items = expect<ValueTuple>(value, type).items;
            if (items.size() != type.components().size()) {
                fail(AbiErrc::kTypeMismatch, "tuple arity mismatch for " + type.canonical());
            }
            return items;
        }
        const auto& items = expect<ValueList>(value, type).items;
        if (type.kind() == Kind::kFixedArray && items.size() != type.length()) {
            fail(AbiErrc::kTypeMismatch, "fixed array length mismatch for " + type.canonical());
        }
        return items;
    }

    Bytes encode_one(const AbiType& type, const Value& value) {
        switch (type.kind()) {
            case Kind::kBytes:
            case Kind::kString: {
                Bytes payload;
                if (type.kind() == Kind::kBytes) {
                    payload = expect<Bytes>(value, type);
                } else {
                    const std::string& s = expect<std::string>(value, type);
                    payload.assign(s.begin(), s.end());
                }
                Bytes out;
                append_word(out, payload.size());
                append(out, payload);
                out.resize(kWord + padded(payload.size()), 0);
                return out;
            }
            case Kind::kArray: {
                const auto& items = expect_items(value, type);
                const std::vector<AbiType> types(items.size(), type.element());
                Bytes out;
                append_word(out, items.size());
                append(out, encode_sequence(types, items));
                return out;
            }
            case Kind::kFixedArray: {
                const auto& items = expect_items(value, type);
                const std::vector<AbiType> types(items.size(), type.element());
                return encode_sequence(types, items);
            }
            case Kind::kTuple:
                return encode_sequence(type.components(), expect_items(value, type));
            default:
                return encode_static_word(type, value);
        }
    }

    Bytes encode_sequence(std::span<const AbiType> types, std::span<const Value> values) {
        std::size_t head_total{0};
        for (const auto& t : types) head_total += t.head_size();
        Bytes head;
        Bytes tail;
        head.reserve(head_total);
        for (std::size_t i = 0; i < types.size(); ++i) {
            if (types[i].is_dynamic()) {
                append_word(head, head_total + tail.size());
                append(tail, encode_one(types[i], values[i]));
            } else {
                append(head, encode_one(types[i], values[i]));
            }
        }
        append(head, tail);
        return head;
    }

    // ---------------------------------------------------------------- decoding

    ByteView read_word(ByteView region, std::size_t pos) {
        if (pos > region.size() || region.size() - pos < kWord) {
            fail(AbiErrc::kTruncatedData, "word at offset " + std::to_string(pos) + " past end of data");
        }
        return region.subspan(pos, kWord);
    }

    bool all_zero(ByteView bytes) {
        return std::all_of(bytes.begin(), bytes.end(), [](uint8_t b) { return b == 0; });
    }

    // Word interpreted as a size; values beyond the region are reported with `code`.
    std::size_t read_size(ByteView region, std::size_t pos, std::size_t limit, AbiErrc code, const char* what) {
        const ByteView word = read_word(region, pos);
        if (!all_zero(word.first(24))) fail(code, std::string{what} + " out of range");
        uint64_t v{0};
        for (const uint8_t b : word.subspan(24)) v = (v << 8) | b;
        if (v > limit) fail(code, std::string{what} + " " + std::to_string(v) + " out of range");
        return static_cast<std::size_t>(v);
    }

    std::vector<Value> decode_sequence(std::span<const AbiType> types, ByteView region);

    Value decode_static(const AbiType& type, ByteView region, std::size_t pos) {
        switch (type.kind()) {
            case Kind::kUint: {
                const BigInt v = word_to_big(read_word(region, pos));
                if ((v >> type.bits()) != 0) fail(AbiErrc::kInvalidEncoding, "value wider than " + type.canonical());
                return Value::uint(v);
            }
            case Kind::kInt: {
                BigInt v = word_to_big(read_word(region, pos));
                if (bit_test(v, 255)) v -= two_pow_256();
                const BigInt limit = BigInt{1} << (type.bits() - 1);
                if (v < -limit || v >= limit) fail(AbiErrc::kInvalidEncoding, "value wider than " + type.canonical());
                return Value::sint(v);
            }
            case Kind::kAddress: {
                const ByteView word = read_word(region, pos);
                if (!all_zero(word.first(12))) fail(AbiErrc::kInvalidEncoding, "dirty address padding");
                return Value::address(Address::from_bytes(word.subspan(12)));
            }
            case Kind::kBool: {
                const ByteView word = read_word(region, pos);
                if (!all_zero(word.first(31)) || word[31] > 1) fail(AbiErrc::kInvalidEncoding, "bool is not 0 or 1");
                return Value::boolean(word[31] == 1);
            }
            case Kind::kFixedBytes: {
                const ByteView word = read_word(region, pos);
                if (!all_zero(word.subspan(type.length()))) fail(AbiErrc::kInvalidEncoding, "dirty " + type.canonical() + " padding");
                return Value::bytes(Bytes(word.begin(), word.begin() + static_cast<std::ptrdiff_t>(type.length())));
            }
            case Kind::kFixedArray: {
                const std::vector<AbiType> types(type.length(), type.element());
                if (pos > region.size()) fail(AbiErrc::kTruncatedData, "array past end of data");
                return Value::list(decode_sequence(types, region.subspan(pos)));
            }
            case Kind::kTuple:
                if (pos > region.size()) fail(AbiErrc::kTruncatedData, "tuple past end of data");
                return Value::tuple(decode_sequence(type.components(), region.subspan(pos)));
            default:
                fail(AbiErrc::kTypeMismatch, "not a static type: " + type.canonical());
        }
    }

    // `region` starts at the dynamic value's own offset.
    Value decode_dynamic(const AbiType& type, ByteView region) {
        switch (type.kind()) {
            case Kind::kBytes:
            case Kind::kString: {
                const std::size_t len =
                    read_size(region, 0, region.size(), AbiErrc::kTruncatedData, "byte string length");
                if (region.size() - kWord < padded(len)) fail(AbiErrc::kTruncatedData, "byte string past end of data");
                const ByteView payload = region.subspan(kWord, len);
                if (!all_zero(region.subspan(kWord + len, padded(len) - len))) {
                    fail(AbiErrc::kInvalidEncoding, "dirty byte string padding");
                }
                if (type.kind() == Kind::kBytes) return Value::bytes(Bytes(payload.begin(), payload.end()));
                return Value::string(std::string(payload.begin(), payload.end()));
            }
            case Kind::kArray: {
                const std::size_t body = region.size() >= kWord ? region.size() - kWord : 0;
                const std::size_t count = read_size(region, 0, body / type.element().head_size(),
                                                    AbiErrc::kTruncatedData, "array length");
                const std::vector<AbiType> types(count, type.element());
                return Value::list(decode_sequence(types, region.subspan(kWord)));
            }
            case Kind::kFixedArray: {
                const std::vector<AbiType> types(type.length(), type.element());
                return Value::list(decode_sequence(types, region));
            }
            case Kind::kTuple:
                return Value::tuple(decode_sequence(type.components(), region));
            default:
                fail(AbiErrc::kTypeMismatch, "not a dynamic type: " + type.canonical());
        }
    }

    std::vector<Value> decode_sequence(std::span<const AbiType> types, ByteView region) {
        std::size_t head_total{0};
        for (const auto& t : types) head_total += t.head_size();
        if (head_total > region.size()) fail(AbiErrc::kTruncatedData, "head past end of data");

        std::vector<Value> out;
        out.reserve(types.size());
        std::size_t pos{0};
        for (const auto& type : types) {
            if (type.is_dynamic()) {
                const std::size_t offset = read_size(region, pos, region.size(), AbiErrc::kMalformedOffset, "offset");
                if (offset % kWord != 0) fail(AbiErrc::kMalformedOffset, "unaligned offset " + std::to_string(offset));
                if (offset < head_total || region.size() - offset < kWord) {
                    fail(AbiErrc::kMalformedOffset, "offset " + std::to_string(offset) + " outside the tail");
                }
                out.push_back(decode_dynamic(type, region.subspan(offset)));
            } else {
                out.push_back(decode_static(type, region, pos));
            }
            pos += type.head_size();
        }
        return out;
    }

    // In-place encoding used for hashed indexed event arguments.
    Bytes encode_in_place(const AbiType& type, const Value& value) {
        switch (type.kind()) {
            case Kind::kBytes:
                return expect<Bytes>(value, type);
            case Kind::kString: {
                const std::string& s = expect<std::string>(value, type);
                return Bytes(s.begin(), s.end());
            }
            case Kind::kArray:
            case Kind::kFixedArray:
            case Kind::kTuple: {
                const auto& items = expect_items(value, type);
                Bytes out;
                for (std::size_t i = 0; i < items.size(); ++i) {
                    const AbiType& t = type.kind() == Kind::kTuple ? type.components()[i] : type.element();
                    Bytes part = encode_in_place(t, items[i]);
                    part.resize(padded(part.size()), 0);
                    append(out, part);
                }
                return out;
            }
            default:
                return encode_static_word(type, value);
        }
    }

    Hash32 word_to_hash(ByteView word) { return Hash32::from_bytes(word); }

}  // namespace

Bytes encode_values(std::span<const AbiType> types, std::span<const Value> values) {
    if (types.size() != values.size()) {
        fail(AbiErrc::kArityMismatch, "expected " + std::to_string(types.size()) + " values, got " + std::to_string(values.size()));
    }
    return encode_sequence(types, values);
}

std::vector<Value> decode_values(std::span<const AbiType> types, ByteView data) { return decode_sequence(types, data); }

Bytes encode_args(const FunctionAbi& f, std::span<const Value> args) {
    std::vector<AbiType> types;
    types.reserve(f.inputs.size());
    for (const auto& p : f.inputs) types.push_back(p.type);
    if (types.size() != args.size()) {
        fail(AbiErrc::kArityMismatch, f.canonical_signature() + " takes " + std::to_string(types.size()) +
                                          " arguments, got " + std::to_string(args.size()));
    }
    const Selector sel = selector(f);
    Bytes out(sel.begin(), sel.end());
    append(out, encode_sequence(types, args));
    return out;
}

std::optional<DecodedCall> decode_call(ByteView input, const AbiDefinition& abi) {
    if (input.empty()) return std::nullopt;
    if (input.size() < 4) fail(AbiErrc::kTruncatedData, "calldata shorter than a selector");
    Selector sel{};
    std::copy_n(input.begin(), 4, sel.begin());
    const FunctionAbi* f = abi.find_function(sel);
    if (f == nullptr) fail(AbiErrc::kUnknownSelector, "unknown selector " + to_hex(sel));

    std::vector<AbiType> types;
    types.reserve(f->inputs.size());
    for (const auto& p : f->inputs) types.push_back(p.type);
    std::vector<Value> values = decode_sequence(types, input.subspan(4));

    DecodedCall call;
    call.function_name = f->name;
    call.canonical_signature = f->canonical_signature();
    call.selector = sel;
    for (std::size_t i = 0; i < values.size(); ++i) {
        call.args.push_back({f->inputs[i].name, f->inputs[i].type, std::move(values[i])});
    }
    return call;
}

namespace {

    DecodedEvent decode_with(const EventAbi& event, const LogEntry& log, std::size_t first_topic) {
        std::vector<AbiType> data_types;
        for (const auto& p : event.inputs) {
            if (!p.indexed) data_types.push_back(p.type);
        }
        std::vector<Value> data_values = decode_sequence(data_types, log.data);

        DecodedEvent out;
        out.event_name = event.name;
        out.canonical_signature = event.canonical_signature();
        std::size_t topic = first_topic;
        std::size_t data_idx{0};
        for (const auto& p : event.inputs) {
            EventArg arg{p.name, p.type, Value{}, p.indexed, false};
            if (p.indexed) {
                const auto& word = log.topics[topic++].bytes();
                if (p.type.is_value_type()) {
                    arg.value = decode_static(p.type, ByteView{word}, 0);
                } else {
                    arg.value = Value::bytes(Bytes(word.begin(), word.end()));
                    arg.hashed = true;
                }
            } else {
                arg.value = std::move(data_values[data_idx++]);
            }
            out.args.push_back(std::move(arg));
        }
        return out;
    }

}  // namespace

DecodedEvent decode_event(const LogEntry& log, const AbiDefinition& abi) {
    if (log.topics.size() > kMaxLogTopics) fail(AbiErrc::kTopicCountMismatch, "log has more than 4 topics");
    if (!log.topics.empty()) {
        if (const EventAbi* e = abi.find_event(log.topics.front())) {
            if (e->indexed_count() + 1 != log.topics.size()) {
                fail(AbiErrc::kTopicCountMismatch, e->canonical_signature() + " expects " +
                                                       std::to_string(e->indexed_count() + 1) + " topics, log has " +
                                                       std::to_string(log.topics.size()));
            }
            return decode_with(*e, log, 1);
        }
    }
    std::vector<const EventAbi*> candidates;
    for (const EventAbi* e : abi.anonymous_events()) {
        if (e->indexed_count() == log.topics.size()) candidates.push_back(e);
    }
    if (candidates.size() == 1) return decode_with(*candidates.front(), log, 0);
    if (log.topics.empty()) fail(AbiErrc::kTopicCountMismatch, "log without topics matches no event");
    fail(AbiErrc::kUnknownTopic, "unknown event topic " + log.topics.front().to_hex());
}

Hash32 encode_topic(const AbiType& type, const Value& value) {
    if (type.is_value_type()) return word_to_hash(encode_static_word(type, value));
    return keccak256(encode_in_place(type, value));
}

LogEntry encode_event(const EventAbi& event, std::span<const Value> args, const Address& emitter) {
    if (args.size() != event.inputs.size()) {
        fail(AbiErrc::kArityMismatch, event.canonical_signature() + " takes " + std::to_string(event.inputs.size()) +
                                          " arguments, got " + std::to_string(args.size()));
    }
    LogEntry log;
    log.address = emitter;
    if (!event.anonymous) log.topics.push_back(event_topic(event));
    std::vector<AbiType> data_types;
    std::vector<Value> data_values;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (event.inputs[i].indexed) {
            log.topics.push_back(encode_topic(event.inputs[i].type, args[i]));
        } else {
            data_types.push_back(event.inputs[i].type);
            data_values.push_back(args[i]);
        }
    }
    log.data = encode_sequence(data_types, data_values);
    return log;
}

nlohmann::json args_document(const DecodedCall& call) {
    nlohmann::json args = nlohmann::json::array();
    for (const auto& a : call.args) {
        args.push_back({{"name", a.name}, {"type", a.type.canonical()}, {"value", to_json(a.type, a.value)}});
    }
    return args;
}

nlohmann::json args_document(const DecodedEvent& event) {
    nlohmann::json args = nlohmann::json::array();
    for (const auto& a : event.args) {
        nlohmann::json arg{{"name", a.name}, {"type", a.type.canonical()}, {"indexed", a.indexed}};
        if (a.hashed) {
            arg["hashed"] = true;
            arg["value"] = chainharvest::to_hex(std::get<Bytes>(a.value.data));
        } else {
            arg["value"] = to_json(a.type, a.value);
        }
        args.push_back(std::move(arg));
    }
    return args;
}

nlohmann::json to_json(const DecodedCall& call) {
    return {{"function", call.function_name},
            {"signature", call.canonical_signature},
            {"selector", to_hex(call.selector)},
            {"args", args_document(call)}};
}

nlohmann::json to_json(const DecodedEvent& event) {
    return {{"event", event.event_name}, {"signature", event.canonical_signature}, {"args", args_document(event)}};
}

}  // namespace chainharvest::abi
