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

// Regenerates the bundled fixture chains and the ABI registry from the ABI sources.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include <chainharvest/abi/definition.hpp>
#include <chainharvest/scenario/scenarios.hpp>

namespace fs = std::filesystem;
using namespace chainharvest;

namespace {

std::string slurp(const fs::path& path) {
    std::ifstream in{path, std::ios::binary};
    if (!in) {
        throw std::runtime_error{"cannot read " + path.string()};
    }
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Regenerate bundled fixture chains"};
    std::string dir{"fixtures"};
    app.add_option("--fixtures-dir", dir, "Fixture directory containing abi/")->check(CLI::ExistingDirectory);
    CLI11_PARSE(app, argc, argv);

    try {
        const fs::path root{dir};
        const std::string erc20_text{slurp(root / "abi" / "erc20.abi")};
        const std::string ponzi_text{slurp(root / "abi" / "ponzi.abi")};
        const std::string workflow_text{slurp(root / "abi" / "workflow_audit.abi")};

        const auto chain{scenario::make_demo_chain(abi::parse_abi(erc20_text), abi::parse_abi(ponzi_text),
                                                   abi::parse_abi(workflow_text))};
        node::save_fixture(chain, root / "chain100.json");

        const fs::path registry{root / "abi_registry"};
        fs::create_directories(registry);
        const auto contracts{scenario::demo_contracts()};
        for (const auto& [address, text] : {std::pair{contracts.token, erc20_text},
                                            std::pair{contracts.ponzi, ponzi_text},
                                            std::pair{contracts.workflow, workflow_text}}) {
            std::ofstream{registry / (address.to_hex() + ".abi"), std::ios::binary} << text;
        }

        const auto planted{scenario::make_planted_chain()};
        node::save_fixture(planted.chain, root / "planted.json");
        std::ofstream planted_list{root / "planted_accounts.txt"};
        for (const Address& a : planted.planted) {
            planted_list << a.to_hex() << '\n';
        }

        fs::create_directories(root / "features");
        node::save_fixture(scenario::make_three_tx_chain(), root / "features" / "three_tx.json");

        std::cout << "chain100: " << chain.blocks.size() << " blocks, " << chain.transaction_count() << " txs, "
                  << chain.log_count() << " logs\n"
                  << "planted: " << planted.chain.blocks.size() << " blocks, " << planted.chain.transaction_count()
                  << " txs\n";
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return 1;
    }
    return 0;
}
