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

#include <catch_amalgamated.hpp>

#include <chainharvest/abi/codec.hpp>
#include <chainharvest/chain/keccak.hpp>

#include "fixtures.hpp"
#include "known_vectors.hpp"
#include "random_abi.hpp"
#include "reference_calldata.hpp"

namespace chainharvest::abi {

namespace {

    AbiErrc error_of(const auto& fn) {
        try {
            fn();
        } catch (const AbiError& e) {
            return e.code();
        }
        FAIL("expected AbiError");
        return AbiErrc::kMalformedAbi;
    }

    Address addr(uint8_t tail) {
        Address a;
        a.bytes()[19] = tail;
        return a;
    }

    AbiDefinition load(const std::string& name) { return parse_abi(test::read_fixture("abi/" + name)); }

}  // namespace

TEST_CASE("parse_abi bundled fixtures", "[abi][parse]") {
    const AbiDefinition erc20 = load("erc20.abi");
    CHECK(erc20.functions().size() == 9);
    CHECK(erc20.events().size() == 2);
    CHECK(erc20.selector_index().size() == 9);
    CHECK(erc20.topic_index().size() == 2);
    REQUIRE(erc20.find_function("transfer") != nullptr);
    CHECK(erc20.find_function("transfer")->mutability == Mutability::kNonpayable);
    CHECK(erc20.find_function("balanceOf")->mutability == Mutability::kView);

    const AbiDefinition ponzi = load("ponzi.abi");
    CHECK(ponzi.functions().size() == 6);
    CHECK(ponzi.events().size() == 2);
    CHECK(ponzi.find_function("invest")->mutability == Mutability::kPayable);

    const AbiDefinition audit = load("workflow_audit.abi");
    CHECK(audit.functions().size() == 2);
    CHECK(audit.events().size() == 1);
}

TEST_CASE("parse_abi edge cases", "[abi][parse]") {
    const AbiDefinition empty = parse_abi("[]");
    CHECK(empty.functions().empty());
    CHECK(empty.events().empty());

    CHECK(error_of([] { (void)parse_abi(R"([{"type":"function","name":"f","inputs":[{"name":"x","type":"uint257"}]}])"); }) ==
          AbiErrc::kUnsupportedType);
    CHECK(error_of([] { (void)parse_abi(R"([{"type":"function","name":"f","inputs":[{"name":"x","type":"fixed128x18"}]}])"); }) ==
          AbiErrc::kUnsupportedType);
    CHECK(error_of([] { (void)parse_abi("[{"); }) == AbiErrc::kMalformedAbi);
    CHECK(error_of([] { (void)parse_abi(R"({"type":"function"})"); }) == AbiErrc::kMalformedAbi);
    CHECK(error_of([] { (void)parse_abi(R"([{"type":"function","inputs":[]}])"); }) == AbiErrc::kMalformedAbi);
    CHECK(error_of([] {
              (void)parse_abi(R"([{"type":"function","name":"f","inputs":[{"type":"uint"}]},
                                  {"type":"function","name":"f","inputs":[{"type":"uint256"}]}])");
          }) == AbiErrc::kDuplicateSelector);
    CHECK(error_of([] {
              (void)parse_abi(R"([{"type":"event","name":"E","inputs":[
                  {"type":"uint8","indexed":true},{"type":"uint8","indexed":true},
                  {"type":"uint8","indexed":true},{"type":"uint8","indexed":true}]}])");
          }) == AbiErrc::kMalformedAbi);

    SECTION("overloads with distinct signatures coexist") {
        const auto def = parse_abi(R"([{"type":"function","name":"f","inputs":[{"type":"uint8"}]},
                                       {"type":"function","name":"f","inputs":[{"type":"uint16"}]}])");
        CHECK(def.functions().size() == 2);
    }

    SECTION("tuple components and array suffixes") {
        const auto def = parse_abi(R"([{"type":"function","name":"execute","inputs":[
            {"name":"calls","type":"tuple[]","components":[
                {"name":"target","type":"address"},{"name":"value","type":"uint256"},{"name":"data","type":"bytes"}]}]}])");
        REQUIRE(def.functions().size() == 1);
        CHECK(def.functions()[0].canonical_signature() == "execute((address,uint256,bytes)[])");
        CHECK(to_hex(selector(def.functions()[0])) == "0x3f707e6b");
    }

    SECTION("nesting depth limit") {
        CHECK(AbiType::parse("uint8[][][][]").depth() == 4);
        CHECK(error_of([] { (void)AbiType::parse("uint8[][][][][]"); }) == AbiErrc::kUnsupportedType);
        CHECK(error_of([] { (void)AbiType::parse("((((uint8)[])))"); }) == AbiErrc::kUnsupportedType);
    }
}

TEST_CASE("canonical type names", "[abi][type]") {
    CHECK(AbiType::parse("uint").canonical() == "uint256");
    CHECK(AbiType::parse("int").canonical() == "int256");
    CHECK(AbiType::parse("byte").canonical() == "bytes1");
    CHECK(AbiType::parse("(uint,address[2])[]").canonical() == "(uint256,address[2])[]");
    CHECK(AbiType::parse("bytes32").is_dynamic() == false);
    CHECK(AbiType::parse("string[2]").is_dynamic());
    CHECK(AbiType::parse("(uint8,bool)[3]").head_size() == 192);
    for (const char* bad : {"uint0", "uint7", "int264", "bytes0", "bytes33", "uint8[0]", "()", "uint8[", "foo", "uint08"}) {
        INFO(bad);
        CHECK(error_of([&] { (void)AbiType::parse(bad); }) == AbiErrc::kUnsupportedType);
    }
    const FunctionAbi f = parse_function_signature("transfer(address, uint)");
    CHECK(f.canonical_signature() == "transfer(address,uint256)");
    CHECK(f.canonical_signature().find(' ') == std::string::npos);
}

TEST_CASE("selectors match the independent oracle", "[abi][selector]") {
    for (const auto& v : test::kKnownSelectors) {
        INFO(v.signature);
        CHECK(to_hex(selector(parse_function_signature(v.signature))) == v.selector);
    }
    const FunctionAbi a = parse_function_signature("transfer(address,uint256)");
    const FunctionAbi b = parse_function_signature("transfer(address,uint)");
    CHECK(selector(a) == selector(b));
}

TEST_CASE("encode_args slot layout", "[abi][encode]") {
    const AbiDefinition erc20 = load("erc20.abi");
    const FunctionAbi& transfer = *erc20.find_function("transfer");
    const std::vector args{Value::address(addr(1)), Value::uint(1)};
    const Bytes calldata = encode_args(transfer, args);
    CHECK(calldata.size() == 4 + 64);
    CHECK(calldata.back() == 0x01);
    CHECK(to_hex(calldata) == test::reference::kTransferOne);

    const FunctionAbi fstr = parse_function_signature("f(string)");
    const Bytes s = encode_args(fstr, std::vector{Value::string("abc")});
    CHECK(to_hex(s) == test::reference::kStringAbc);
    CHECK(s[4 + 31] == 0x20);
    CHECK(s[4 + 63] == 0x03);

    CHECK(error_of([] { (void)encode_args(parse_function_signature("f(uint8)"), std::vector{Value::uint(256)}); }) ==
          AbiErrc::kIntegerOverflow);
    CHECK(error_of([] { (void)encode_args(parse_function_signature("f(int8)"), std::vector{Value::sint(-129)}); }) ==
          AbiErrc::kIntegerOverflow);
    CHECK(error_of([] { (void)encode_args(parse_function_signature("f(uint8)"), std::vector{Value::uint(-1)}); }) ==
          AbiErrc::kIntegerOverflow);
    CHECK(error_of([] { (void)encode_args(parse_function_signature("f(uint8,bool)"), std::vector{Value::uint(1)}); }) ==
          AbiErrc::kArityMismatch);
    CHECK(error_of([] { (void)encode_args(parse_function_signature("f(bool)"), std::vector{Value::uint(1)}); }) ==
          AbiErrc::kTypeMismatch);
    CHECK(error_of([] { (void)encode_args(parse_function_signature("f(bytes4)"), std::vector{Value::bytes({1, 2})}); }) ==
          AbiErrc::kTypeMismatch);
    CHECK(error_of([] {
              (void)encode_args(parse_function_signature("f(uint8[2])"), std::vector{Value::list({Value::uint(1)})});
          }) == AbiErrc::kTypeMismatch);
}

TEST_CASE("encoder agrees with the reference encoder", "[abi][encode][oracle]") {
    const auto execute = parse_function_signature("execute((address,uint256,bytes)[])");
    Address a1;
    a1.bytes().fill(0x11);
    Address a2;
    a2.bytes().fill(0x22);
    const BigInt ether{"1000000000000000000"};
    const Value calls = Value::list({
        Value::tuple({Value::address(a1), Value::uint(ether), Value::bytes({1, 2})}),
        Value::tuple({Value::address(a2), Value::uint(0), Value::bytes({})}),
    });
    CHECK(to_hex(encode_args(execute, std::vector{calls})) == test::reference::kExecuteTuples);

    const auto swap = parse_function_signature("swap(int256,uint8[3],bytes32)");
    const std::vector swap_args{Value::sint(-5), Value::list({Value::uint(1), Value::uint(2), Value::uint(3)}),
                                Value::bytes(Bytes(32, 0xab))};
    CHECK(to_hex(encode_args(swap, swap_args)) == test::reference::kSwapSigned);

    Bytes counting(40);
    for (std::size_t i = 0; i < counting.size(); ++i) counting[i] = static_cast<uint8_t>(i);
    const auto multicall = parse_function_signature("multicall(bytes[])");
    CHECK(to_hex(encode_args(multicall, std::vector{Value::list({Value::bytes({1}), Value::bytes(counting)})})) ==
          test::reference::kMulticall);

    const auto nested = parse_function_signature("g(uint256[][],string[2],bool)");
    const std::vector nested_args{
        Value::list({Value::list({Value::uint(1), Value::uint(2)}), Value::list({}), Value::list({Value::uint(3)})}),
        Value::list({Value::string("x"), Value::string(std::string(33, 'y'))}),
        Value::boolean(true),
    };
    CHECK(to_hex(encode_args(nested, nested_args)) == test::reference::kNested);

    const AbiDefinition audit = load("workflow_audit.abi");
    const std::vector log_args{Value::string("run-42"), Value::string("stage_in"),
                               Value::bytes(from_hex(test::reference::kInputDigest))};
    CHECK(to_hex(encode_args(*audit.find_function("logTask"), log_args)) == test::reference::kLogTask);
}

TEST_CASE("decode_call", "[abi][decode]") {
    const AbiDefinition erc20 = load("erc20.abi");

    SECTION("round trip through the encoder") {
        const Bytes calldata = encode_args(*erc20.find_function("transfer"), std::vector{Value::address(addr(7)), Value::uint(1)});
        const auto call = decode_call(calldata, erc20);
        REQUIRE(call.has_value());
        CHECK(call->function_name == "transfer");
        CHECK(call->canonical_signature == "transfer(address,uint256)");
        CHECK(to_hex(call->selector) == "0xa9059cbb");
        REQUIRE(call->args.size() == 2);
        CHECK(call->args[0].name == "to");
        CHECK(call->args[0].value == Value::address(addr(7)));
        CHECK(call->args[1].name == "value");
        CHECK(call->args[1].value == Value::uint(1));
    }

    SECTION("reference calldata decodes") {
        const auto def = AbiDefinition{{parse_function_signature("g(uint256[][],string[2],bool)")}, {}};
        const auto call = decode_call(from_hex(test::reference::kNested), def);
        REQUIRE(call.has_value());
        CHECK(call->args[1].value == Value::list({Value::string("x"), Value::string(std::string(33, 'y'))}));
        CHECK(call->args[2].value == Value::boolean(true));
    }

    SECTION("plain transfer") { CHECK_FALSE(decode_call(Bytes{}, erc20).has_value()); }

    SECTION("errors") {
        CHECK(error_of([&] { (void)decode_call(Bytes{0xde, 0xad, 0xbe, 0xef}, erc20); }) == AbiErrc::kUnknownSelector);
        CHECK(error_of([&] { (void)decode_call(Bytes{0xa9, 0x05}, erc20); }) == AbiErrc::kTruncatedData);

        Bytes transfer = from_hex(test::reference::kTransferOne);
        transfer.pop_back();
        CHECK(error_of([&] { (void)decode_call(transfer, erc20); }) == AbiErrc::kTruncatedData);

        const auto fstr = AbiDefinition{{parse_function_signature("f(string)")}, {}};
        Bytes s = from_hex(test::reference::kStringAbc);
        s[4 + 31] = 0x21;  // unaligned offset
        CHECK(error_of([&] { (void)decode_call(s, fstr); }) == AbiErrc::kMalformedOffset);
        s[4 + 31] = 0x80;  // past end
        CHECK(error_of([&] { (void)decode_call(s, fstr); }) == AbiErrc::kMalformedOffset);
        s[4 + 31] = 0x20;
        s[4 + 63] = 0x40;  // length beyond payload
        CHECK(error_of([&] { (void)decode_call(s, fstr); }) == AbiErrc::kTruncatedData);

        Bytes dirty = from_hex(test::reference::kTransferOne);
        dirty[4 + 0] = 0x01;  // address padding
        CHECK(error_of([&] { (void)decode_call(dirty, erc20); }) == AbiErrc::kInvalidEncoding);

        const auto small = AbiDefinition{{parse_function_signature("f(uint8,bool)")}, {}};
        Bytes wide = encode_args(small.functions()[0], std::vector{Value::uint(1), Value::boolean(true)});
        wide[4 + 30] = 0x01;
        CHECK(error_of([&] { (void)decode_call(wide, small); }) == AbiErrc::kInvalidEncoding);
    }
}

TEST_CASE("decode_event", "[abi][event]") {
    const AbiDefinition erc20 = load("erc20.abi");
    const EventAbi& transfer = *erc20.find_event("Transfer");
    CHECK(to_hex(event_topic(transfer).view().first(4)) == "0xddf252ad");

    const LogEntry log = encode_event(transfer, std::vector{Value::address(addr(1)), Value::address(addr(2)), Value::uint(1000)}, addr(9));
    REQUIRE(log.topics.size() == 3);
    CHECK(log.data == u256_to_word(1000));
    CHECK(log.topics[1].view().back() == 1);

    const DecodedEvent ev = decode_event(log, erc20);
    CHECK(ev.event_name == "Transfer");
    REQUIRE(ev.args.size() == 3);
    CHECK(ev.args[0].name == "from");
    CHECK(ev.args[0].indexed);
    CHECK(ev.args[0].value == Value::address(addr(1)));
    CHECK(ev.args[1].value == Value::address(addr(2)));
    CHECK_FALSE(ev.args[2].indexed);
    CHECK(ev.args[2].value == Value::uint(1000));

    SECTION("zero topics against non-anonymous events") {
        LogEntry bare = log;
        bare.topics.clear();
        CHECK(error_of([&] { (void)decode_event(bare, erc20); }) == AbiErrc::kTopicCountMismatch);
    }
    SECTION("wrong topic count") {
        LogEntry short_log = log;
        short_log.topics.pop_back();
        CHECK(error_of([&] { (void)decode_event(short_log, erc20); }) == AbiErrc::kTopicCountMismatch);
    }
    SECTION("unknown topic") {
        LogEntry other = log;
        other.topics[0] = keccak256(std::string_view{"Other()"});
        CHECK(error_of([&] { (void)decode_event(other, erc20); }) == AbiErrc::kUnknownTopic);
    }
    SECTION("truncated data") {
        LogEntry cut = log;
        cut.data.resize(31);
        CHECK(error_of([&] { (void)decode_event(cut, erc20); }) == AbiErrc::kTruncatedData);
    }
}

TEST_CASE("workflow audit event with hashed indexed string", "[abi][event]") {
    const AbiDefinition audit = load("workflow_audit.abi");
    LogEntry log;
    log.topics = {Hash32::from_hex(test::reference::kTaskLoggedTopic), Hash32::from_hex(test::reference::kRunIdTopic)};
    log.data = from_hex(test::reference::kTaskLoggedData);

    const DecodedEvent ev = decode_event(log, audit);
    CHECK(ev.event_name == "TaskLogged");
    REQUIRE(ev.args.size() == 3);
    CHECK(ev.args[0].name == "runId");
    CHECK(ev.args[0].hashed);
    CHECK(ev.args[0].value == Value::bytes(from_hex(test::reference::kRunIdTopic)));
    CHECK(ev.args[1].value == Value::string("stage_in"));
    CHECK(ev.args[2].value == Value::bytes(from_hex(test::reference::kInputDigest)));

    const auto doc = args_document(ev);
    CHECK(doc[0]["hashed"] == true);
    CHECK(doc[2]["value"] == std::string{test::reference::kInputDigest});

    const LogEntry rebuilt = encode_event(*audit.find_event("TaskLogged"),
                                          std::vector{Value::string("run-42"), Value::string("stage_in"),
                                                      Value::bytes(from_hex(test::reference::kInputDigest))},
                                          Address{});
    CHECK(rebuilt.topics == log.topics);
    CHECK(rebuilt.data == log.data);
}

TEST_CASE("ponzi scheme contract interactions", "[abi][event]") {
    const AbiDefinition ponzi = load("ponzi.abi");
    const std::vector payout{Value::list({Value::address(addr(1)), Value::address(addr(2))}),
                             Value::list({Value::uint(5), Value::uint(7)})};
    const Bytes calldata = encode_args(*ponzi.find_function("payoutRound"), payout);
    const auto call = decode_call(calldata, ponzi);
    REQUIRE(call.has_value());
    CHECK(call->function_name == "payoutRound");
    CHECK(call->args[0].value == payout[0]);
    CHECK(call->args[1].value == payout[1]);

    const LogEntry log = encode_event(*ponzi.find_event("Invested"),
                                      std::vector{Value::address(addr(3)), Value::uint(10), Value::address(addr(4))}, addr(8));
    const DecodedEvent ev = decode_event(log, ponzi);
    CHECK(ev.args[0].value == Value::address(addr(3)));
    CHECK(ev.args[1].value == Value::uint(10));
    CHECK(ev.args[2].value == Value::address(addr(4)));
}

TEST_CASE("random round trips", "[abi][property]") {
    Rng rng{7};
    for (int i = 0; i < 2000; ++i) {
        const FunctionAbi f = test::random_function(rng, 4, kMaxNestingDepth);
        std::vector<Value> values;
        for (const auto& p : f.inputs) values.push_back(test::random_value(rng, p.type));
        const Bytes calldata = encode_args(f, values);
        const AbiDefinition def{{f}, {}};
        const auto call = decode_call(calldata, def);
        REQUIRE(call.has_value());
        REQUIRE(call->args.size() == values.size());
        for (std::size_t k = 0; k < values.size(); ++k) {
            INFO(f.canonical_signature());
            CHECK(call->args[k].value == values[k]);
            CHECK(from_json(f.inputs[k].type, to_json(f.inputs[k].type, values[k])) == values[k]);
        }
        std::vector<Value> decoded;
        for (auto& a : call->args) decoded.push_back(a.value);
        CHECK(encode_args(f, decoded) == calldata);
    }
}

TEST_CASE("truncated calldata never decodes", "[abi][property]") {
    Rng rng{11};
    int checked = 0;
    for (int i = 0; i < 200; ++i) {
        const FunctionAbi f = test::random_function(rng, 3, 3);
        if (f.inputs.empty()) continue;
        std::vector<Value> values;
        for (const auto& p : f.inputs) values.push_back(test::random_value(rng, p.type));
        const Bytes calldata = encode_args(f, values);
        const AbiDefinition def{{f}, {}};
        for (std::size_t len = 4; len < calldata.size(); ++len) {
            const ByteView cut{calldata.data(), len};
            try {
                (void)decode_call(cut, def);
                FAIL("truncated calldata decoded: " << f.canonical_signature() << " at length " << len);
            } catch (const AbiError& e) {
                const bool expected = e.code() == AbiErrc::kTruncatedData || e.code() == AbiErrc::kMalformedOffset;
                CHECK(expected);
            }
            ++checked;
        }
    }
    CHECK(checked > 1000);
}

}  // namespace chainharvest::abi
