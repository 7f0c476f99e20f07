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

#include <chainharvest/scenario/scenarios.hpp>

#include <algorithm>
#include <cmath>
#include <set>

#include <chainharvest/abi/codec.hpp>
#include <chainharvest/chain/keccak.hpp>
#include <chainharvest/common/random.hpp>

namespace chainharvest::scenario {

using abi::Value;

namespace {

    const U256 kGwei{1'000'000'000};
    const U256 kEther{kGwei * kGwei};

    Address eoa(std::size_t i) { return derive_address("eoa:" + std::to_string(i)); }

    //! Wei amount from a positive ether value, keeping nine decimals.
    U256 ether_to_wei(double ether) { return U256{static_cast<uint64_t>(std::llround(ether * 1e9))} * kGwei; }

    Transaction transfer(const Address& from, const Address& to, const U256& value, const U256& gas_price) {
        Transaction tx;
        tx.from = from;
        tx.to = to;
        tx.value = value;
        tx.gas_limit = 21'000;
        tx.gas_price = gas_price;
        return tx;
    }

    Transaction call(const Address& from, const Address& to, Bytes input, const U256& value = 0) {
        Transaction tx{transfer(from, to, value, 30 * kGwei)};
        tx.gas_limit = 120'000;
        tx.input = std::move(input);
        return tx;
    }

    const abi::FunctionAbi& function(const abi::AbiDefinition& def, std::string_view name) {
        const abi::FunctionAbi* f{def.find_function(name)};
        if (f == nullptr) {
            throw std::invalid_argument{"ABI lacks function " + std::string{name}};
        }
        return *f;
    }

    Bytes encode_call(const abi::AbiDefinition& def, std::string_view name, std::vector<Value> args) {
        return abi::encode_args(function(def, name), args);
    }

    LogEntry emit(const abi::AbiDefinition& def, std::string_view event, std::vector<Value> args,
                  const Address& emitter) {
        const abi::EventAbi* e{def.find_event(event)};
        if (e == nullptr) {
            throw std::invalid_argument{"ABI lacks event " + std::string{event}};
        }
        return abi::encode_event(*e, args, emitter);
    }

    Bytes random_bytes(Rng& rng, std::size_t n) {
        Bytes out(n);
        for (uint8_t& b : out) {
            b = static_cast<uint8_t>(rng.index(256));
        }
        return out;
    }

}  // namespace

Address derive_address(std::string_view label) {
    const Hash32 digest{keccak256(label)};
    return Address::from_bytes(digest.view().subspan(12));
}

DemoContracts demo_contracts() {
    return DemoContracts{
        .token = derive_address("contract:token"),
        .ponzi = derive_address("contract:ponzi"),
        .workflow = derive_address("contract:workflow"),
        .opaque = derive_address("contract:opaque"),
    };
}

node::FixtureChain make_demo_chain(const abi::AbiDefinition& erc20, const abi::AbiDefinition& ponzi,
                                   const abi::AbiDefinition& workflow) {
    const DemoContracts c{demo_contracts()};
    Rng rng{2026};
    node::FixtureBuilder builder{derive_address("miner")};
    constexpr std::size_t kAccounts{12};

    auto token_call = [&](std::size_t from, std::string_view fn, std::vector<Value> args) {
        return call(eoa(from), c.token, abi::encode_args(function(erc20, fn), args));
    };
    auto amount = [](uint64_t v) { return Value::uint(BigInt{v}); };
    auto who = [](std::size_t i) { return Value::address(eoa(i)); };

    for (uint64_t n{0}; n < 100; ++n) {
        builder.begin_block(100 + 10 * n);
        switch (n) {
            case 0:
                break;
            case 3:
                builder.add_transaction(token_call(0, "transfer", {who(1), amount(1)}),
                                        {emit(erc20, "Transfer", {who(0), who(1), amount(1)}, c.token)});
                builder.add_transaction(transfer(eoa(2), eoa(3), kEther, 20 * kGwei));
                break;
            case 12:
                builder.add_transaction(
                    call(eoa(4), c.ponzi, encode_call(ponzi, "invest", {}), 2 * kEther),
                    {emit(ponzi, "Invested", {who(4), Value::uint(BigInt{2} * BigInt{kEther}), Value::address({})},
                          c.ponzi)});
                break;
            case 20:
                builder.add_transaction(token_call(1, "transfer", {who(5), amount(250)}),
                                        {emit(erc20, "Transfer", {who(1), who(5), amount(250)}, c.token)});
                break;
            case 30:
                builder.add_transaction(token_call(0, "approve", {who(6), amount(1000)}),
                                        {emit(erc20, "Approval", {who(0), who(6), amount(1000)}, c.token)});
                break;
            case 40:
            case 80: {
                Bytes input{random_bytes(rng, 4 + 64)};
                builder.add_transaction(call(eoa(n == 40 ? 7 : 11), c.opaque, std::move(input)));
                break;
            }
            case 47:
                builder.add_transaction(token_call(5, "transfer", {who(0), amount(100)}),
                                        {emit(erc20, "Transfer", {who(5), who(0), amount(100)}, c.token)});
                break;
            case 50: {
                Transaction create{call(eoa(8), {}, from_hex("0x6080604052348015600f57600080fd5b50603f80601d6000396000f3fe"))};
                create.to.reset();
                create.gas_limit = 200'000;
                builder.add_transaction(std::move(create));
                break;
            }
            case 55:
                builder.add_transaction(
                    call(eoa(9), c.ponzi, encode_call(ponzi, "investWithReferrer", {who(4)}), 5 * kEther),
                    {emit(ponzi, "Invested", {who(9), Value::uint(BigInt{5} * BigInt{kEther}), who(4)}, c.ponzi)});
                break;
            case 61:
                builder.add_transaction(token_call(6, "transferFrom", {who(0), who(6), amount(400)}),
                                        {emit(erc20, "Transfer", {who(0), who(6), amount(400)}, c.token)});
                break;
            case 70:
            case 88: {
                const std::string run{n == 70 ? "run-42" : "run-43"};
                const std::string task{n == 70 ? "fetch" : "train"};
                const Hash32 digest{keccak256(task + ".out")};
                const Value digest_value{Value::bytes(Bytes{digest.bytes().begin(), digest.bytes().end()})};
                builder.add_transaction(
                    call(eoa(10), c.workflow,
                         encode_call(workflow, "logTask", {Value::string(run), Value::string(task), digest_value})),
                    {emit(workflow, "TaskLogged", {Value::string(run), Value::string(task), digest_value},
                          c.workflow)});
                break;
            }
            case 90: {
                Bytes input{from_hex("0xdeadbeef")};
                const Bytes word{u256_to_word(U256{7})};
                input.insert(input.end(), word.begin(), word.end());
                builder.add_transaction(call(eoa(3), c.token, std::move(input)));
                break;
            }
            case 95: {
                Bytes input{encode_call(erc20, "transfer", {who(2), amount(5)})};
                input.resize(4 + 10);
                builder.add_transaction(call(eoa(2), c.token, std::move(input)));
                break;
            }
            default: {
                const std::size_t count{rng.index(3)};
                for (std::size_t i{0}; i < count; ++i) {
                    const std::size_t from{rng.index(kAccounts)};
                    const std::size_t to{(from + 1 + rng.index(kAccounts - 1)) % kAccounts};
                    const U256 value{ether_to_wei(rng.uniform(0.01, 3.0))};
                    const U256 price{U256{10 + rng.index(40)} * kGwei};
                    builder.add_transaction(transfer(eoa(from), eoa(to), value, price));
                }
            }
        }
    }
    return builder.finish();
}

PlantedScenario make_planted_chain(uint64_t seed) {
    constexpr std::size_t kOrdinary{990};
    constexpr std::size_t kContracts{7};
    constexpr uint64_t kBlocks{400};
    constexpr uint64_t kGenesisTime{1'600'000'000};
    constexpr uint64_t kBlockInterval{3600};

    Rng rng{seed};
    std::vector<Address> contracts;
    for (std::size_t i{0}; i < kContracts; ++i) {
        contracts.push_back(derive_address("planted:contract:" + std::to_string(i)));
    }
    const Address burner{derive_address("planted:gas-burner")};
    const Address sprayer{derive_address("planted:sprayer")};
    const Address collector{derive_address("planted:collector")};

    std::vector<std::pair<uint64_t, Transaction>> pending;
    auto schedule = [&](Transaction tx) { pending.emplace_back(1 + rng.index(kBlocks - 1), std::move(tx)); };
    auto ordinary_price = [&] { return ether_to_wei(20e-9 * std::exp(0.3 * rng.normal())); };
    auto ordinary_value = [&] { return ether_to_wei(0.5 * std::exp(rng.normal())); };
    auto peer_of = [&](std::size_t i) { return eoa((i + 1 + rng.index(kOrdinary - 1)) % kOrdinary); };

    for (std::size_t i{0}; i < kOrdinary; ++i) {
        const std::size_t sends{1 + rng.index(5)};
        for (std::size_t s{0}; s < sends; ++s) {
            if (rng.uniform() < 0.2) {
                Bytes input{random_bytes(rng, 4 + 32)};
                Transaction tx{call(eoa(i), contracts[rng.index(kContracts)], std::move(input))};
                tx.gas_price = ordinary_price();
                schedule(std::move(tx));
            } else {
                schedule(transfer(eoa(i), peer_of(i), ordinary_value(), ordinary_price()));
            }
        }
    }
    for (std::size_t s{0}; s < 40; ++s) {
        schedule(transfer(burner, eoa(rng.index(kOrdinary)), 50 * kEther, U256{10'000} * kGwei));
    }
    std::vector<std::size_t> order(kOrdinary);
    for (std::size_t i{0}; i < kOrdinary; ++i) {
        order[i] = i;
    }
    rng.shuffle(order);
    for (std::size_t s{0}; s < 300; ++s) {
        schedule(transfer(sprayer, eoa(order[s]), ether_to_wei(0.01), ordinary_price()));
    }
    rng.shuffle(order);
    for (std::size_t s{0}; s < 250; ++s) {
        schedule(transfer(eoa(order[s]), collector, ordinary_value(), ordinary_price()));
    }
    std::stable_sort(pending.begin(), pending.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });

    node::FixtureBuilder builder{derive_address("miner")};
    std::size_t next{0};
    for (uint64_t n{0}; n < kBlocks; ++n) {
        builder.begin_block(kGenesisTime + kBlockInterval * n);
        for (; next < pending.size() && pending[next].first == n; ++next) {
            builder.add_transaction(pending[next].second);
        }
    }
    PlantedScenario out;
    out.chain = builder.finish();
    out.planted = {burner, sprayer, collector};
    out.account_count = kOrdinary + kContracts + out.planted.size();
    return out;
}

node::FixtureChain make_three_tx_chain() {
    const Address a{Address::from_hex("0x000000000000000000000000000000000000000a")};
    const Address b{Address::from_hex("0x000000000000000000000000000000000000000b")};
    const Address c{Address::from_hex("0x000000000000000000000000000000000000000c")};
    node::FixtureBuilder builder;
    builder.begin_block(500);
    builder.begin_block(1'000);
    builder.add_transaction(transfer(a, b, kEther, 20 * kGwei));
    builder.begin_block(1'000 + 2 * 86'400);
    Transaction call_tx{transfer(b, c, kEther / 2, 30 * kGwei)};
    call_tx.input = from_hex("0x12345678");
    call_tx.gas_limit = 50'000;
    builder.add_transaction(call_tx);
    builder.begin_block(1'000 + 4 * 86'400);
    builder.add_transaction(transfer(a, c, 2 * kEther, 10 * kGwei));
    return builder.finish();
}

node::FixtureChain make_bulk_chain(std::size_t blocks, std::size_t txs_per_block, uint64_t seed) {
    Rng rng{seed};
    node::FixtureBuilder builder{derive_address("miner")};
    constexpr std::size_t kAccounts{64};
    for (std::size_t n{0}; n < blocks; ++n) {
        builder.begin_block(1'000 + 12 * n);
        if (n == 0) {
            continue;
        }
        for (std::size_t i{0}; i < txs_per_block; ++i) {
            const std::size_t from{rng.index(kAccounts)};
            const std::size_t to{(from + 1 + rng.index(kAccounts - 1)) % kAccounts};
            builder.add_transaction(transfer(eoa(from), eoa(to), ether_to_wei(rng.uniform(0.001, 10.0)),
                                             U256{1 + rng.index(100)} * kGwei));
        }
    }
    return builder.finish();
}

}  // namespace chainharvest::scenario
