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
#include <map>
#include <string>
#include <vector>

#include <chainharvest/abi/definition.hpp>
#include <chainharvest/node/fixture.hpp>

//! Deterministic synthetic chains used as bundled fixtures and in tests.
namespace chainharvest::scenario {

//! Last 20 bytes of keccak256(label).
Address derive_address(std::string_view label);

struct DemoContracts {
    Address token;     // ERC-20
    Address ponzi;     // investment scheme
    Address workflow;  // workflow audit log
    Address opaque;    // no ABI registered
};

DemoContracts demo_contracts();

//! 100 blocks, timestamps 100 + 10n. Block 3 carries an ERC-20 transfer and a plain value
//! transfer; nine logs in total across the token, ponzi and workflow contracts; plus calls to an
//! unregistered contract, an unknown selector, a truncated call and a contract creation.
node::FixtureChain make_demo_chain(const abi::AbiDefinition& erc20, const abi::AbiDefinition& ponzi,
                                   const abi::AbiDefinition& workflow);

struct PlantedScenario {
    node::FixtureChain chain;
    std::vector<Address> planted;  // gas burner, sprayer, collector
    std::size_t account_count{0};
};

//! 1000 accounts (990 ordinary senders, 7 contracts, 3 planted extremes) over 400 hourly blocks.
PlantedScenario make_planted_chain(uint64_t seed = 7);

//! Three transfers among 0x..0a, 0x..0b and 0x..0c; the hand-computed feature table lives
//! next to the fixture file.
node::FixtureChain make_three_tx_chain();

//! Chain of `blocks` blocks with `txs_per_block` plain transfers each, for load and digest tests.
node::FixtureChain make_bulk_chain(std::size_t blocks, std::size_t txs_per_block, uint64_t seed);

}  // namespace chainharvest::scenario
