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

#include <fstream>

#include <catch_amalgamated.hpp>

#include <chainharvest/common/csv.hpp>
#include <chainharvest/common/format.hpp>
#include <chainharvest/common/random.hpp>
#include <chainharvest/features/features.hpp>
#include <chainharvest/ingest/crawler.hpp>
#include <chainharvest/node/fixture.hpp>
#include <chainharvest/scenario/scenarios.hpp>

#include "fixtures.hpp"

namespace chainharvest::features {

namespace {

    using Catch::Matchers::WithinAbs;

    void ingest_chain(const node::FixtureChain& chain, ingest::ChainStore& store) {
        auto transport{std::make_shared<node::FixtureTransport>(chain)};
        node::NodeClient client{transport, node::NodeEndpoint{}};
        ingest::CrawlJob job;
        job.to_block = chain.blocks.size() - 1;
        job.workers = 2;
        ingest::crawl(client, job, store);
    }

    ingest::StoredTransaction stored(const Address& from, std::optional<Address> to, uint64_t wei, uint64_t ts) {
        ingest::StoredTransaction st;
        st.tx.from = from;
        st.tx.to = to;
        st.tx.value = wei;
        st.tx.gas_price = 7;
        st.timestamp = ts;
        return st;
    }

    Address addr(unsigned i) {
        std::array<uint8_t, 20> raw{};
        raw[19] = static_cast<uint8_t>(i);
        raw[18] = static_cast<uint8_t>(i >> 8);
        return Address{raw};
    }

}  // namespace

TEST_CASE("single incoming transfer", "[features]") {
    const std::vector<ingest::StoredTransaction> txs{
        stored(addr(1), addr(2), 1'000'000'000'000'000'000ULL, 5000)};
    const auto accounts{aggregate_accounts(txs)};
    REQUIRE(accounts.size() == 2);
    const AccountFeatures& recipient{accounts[1]};
    CHECK(recipient.address == addr(2));
    CHECK(recipient.in_tx_count == 1);
    CHECK(recipient.out_tx_count == 0);
    CHECK(recipient.vector()[3] == 1.0);
    CHECK(recipient.age == 0);
    CHECK(recipient.activity_rate == 1.0);
    CHECK(recipient.mean_value_out == 0.0);
    CHECK(recipient.mean_gas_price == 0.0);
    CHECK(recipient.contract_call_fraction == 0.0);
}

TEST_CASE("hand-computed three-transaction table", "[features]") {
    const node::FixtureChain chain{node::load_fixture(test::fixture_path("features/three_tx.json"))};
    CHECK(node::fixture_to_json(chain) == node::fixture_to_json(scenario::make_three_tx_chain()));
    ingest::ChainStore store{":memory:"};
    ingest_chain(chain, store);
    const FeatureMatrix m{build_features(store)};

    std::ifstream in{test::fixture_path("features/three_tx_expected.csv"), std::ios::binary};
    std::vector<std::string> row;
    REQUIRE(csv::read_row(in, row));
    REQUIRE(row.size() == kFeatureCount + 1);
    for (std::size_t c{0}; c < kFeatureCount; ++c) {
        CHECK(row[c + 1] == kFeatureNames[c]);
    }
    std::size_t r{0};
    while (csv::read_row(in, row)) {
        REQUIRE(r < m.addresses.size());
        CHECK(m.addresses[r].to_hex() == row[0]);
        for (std::size_t c{0}; c < kFeatureCount; ++c) {
            INFO(kFeatureNames[c] << " of " << row[0]);
            const double expected{parse_double(row[c + 1])};
            CHECK_THAT(m.values(r, c), WithinAbs(expected, 1e-12 * std::max(1.0, expected)));
        }
        ++r;
    }
    CHECK(r == 3);
}

TEST_CASE("empty store", "[features]") {
    ingest::ChainStore store{":memory:"};
    CHECK_THROWS_AS(build_features(store), FeatureError);
}

TEST_CASE("value is conserved exactly and rows are order independent", "[features]") {
    const auto planted{scenario::make_planted_chain()};
    ingest::ChainStore store{":memory:"};
    ingest_chain(planted.chain, store);
    const auto txs{store.transactions()};
    const auto accounts{aggregate_accounts(txs)};
    CHECK(accounts.size() == 1000);

    U256 sent{0};
    U256 received{0};
    U256 transferred{0};
    for (const AccountFeatures& a : accounts) {
        sent += a.total_value_out;
        received += a.total_value_in;
        CHECK(a.contract_call_fraction >= 0.0);
        CHECK(a.contract_call_fraction <= 1.0);
    }
    for (const auto& st : txs) {
        transferred += st.tx.value;
    }
    CHECK(sent == transferred);
    CHECK(received == transferred);
    CHECK(std::is_sorted(accounts.begin(), accounts.end(),
                         [](const auto& a, const auto& b) { return a.address < b.address; }));

    auto shuffled{txs};
    Rng rng{3};
    for (int round{0}; round < 3; ++round) {
        rng.shuffle(shuffled);
        CHECK(to_matrix(aggregate_accounts(shuffled)).values == to_matrix(accounts).values);
    }
}

TEST_CASE("contract creations count as outgoing without value", "[features]") {
    std::vector<ingest::StoredTransaction> txs{stored(addr(1), std::nullopt, 500, 10),
                                               stored(addr(1), addr(2), 700, 20)};
    txs[0].tx.input = {0x60, 0x80};
    const auto accounts{aggregate_accounts(txs)};
    REQUIRE(accounts.size() == 2);
    CHECK(accounts[0].out_tx_count == 2);
    CHECK(accounts[0].total_value_out == 700);
    CHECK(accounts[0].contract_call_fraction == 0.5);
    CHECK(accounts[0].unique_out_peers == 1);
}

TEST_CASE("z-score standardization", "[features]") {
    FeatureMatrix m;
    m.addresses = {addr(1), addr(2), addr(3)};
    m.values = Matrix::from_rows({{1, 5}, {2, 5}, {3, 5}});
    const FeatureMatrix z{zscore(m)};
    CHECK_THAT(z.values(0, 0), WithinAbs(-1.2247, 1e-4));
    CHECK_THAT(z.values(1, 0), WithinAbs(0.0, 1e-12));
    CHECK_THAT(z.values(2, 0), WithinAbs(1.2247, 1e-4));
    for (std::size_t r{0}; r < 3; ++r) {
        CHECK(z.values(r, 1) == 0.0);
    }
    REQUIRE(z.scaling);
    CHECK(z.scaling->mean == std::vector<double>{2.0, 5.0});
    CHECK(z.scaling->stddev[1] == 0.0);
    CHECK(z.scaling->apply(Matrix::from_rows({{4, 9}}))(0, 1) == 0.0);
    CHECK_THROWS_AS(z.scaling->apply(Matrix{1, 3}), FeatureError);

    FeatureMatrix single;
    single.addresses = {addr(1)};
    single.values = Matrix::from_rows({{1, 2}});
    CHECK_THROWS_AS(zscore(single), FeatureError);
}

TEST_CASE("z-scored columns are centred, unit and idempotent", "[features]") {
    const auto planted{scenario::make_planted_chain()};
    ingest::ChainStore store{":memory:"};
    ingest_chain(planted.chain, store);
    const FeatureMatrix z{zscore(build_features(store))};
    const FeatureMatrix zz{zscore(z)};
    const double n{static_cast<double>(z.values.rows())};
    for (std::size_t c{0}; c < kFeatureCount; ++c) {
        double sum{0};
        double sq{0};
        for (std::size_t r{0}; r < z.values.rows(); ++r) {
            sum += z.values(r, c);
            sq += z.values(r, c) * z.values(r, c);
            CHECK_THAT(zz.values(r, c), WithinAbs(z.values(r, c), 1e-9));
        }
        if (z.scaling->stddev[c] > 0) {
            CHECK_THAT(sum / n, WithinAbs(0.0, 1e-9));
            CHECK_THAT(std::sqrt(sq / n), WithinAbs(1.0, 1e-9));
        }
    }
}

TEST_CASE("feature CSV round-trips exactly", "[features]") {
    FeatureMatrix m;
    m.addresses = {addr(1), addr(300)};
    m.values = Matrix{2, kFeatureCount};
    Rng rng{8};
    for (std::size_t r{0}; r < 2; ++r) {
        for (std::size_t c{0}; c < kFeatureCount; ++c) {
            m.values(r, c) = rng.normal() * std::pow(10.0, static_cast<double>(rng.index(30)) - 10);
        }
    }
    test::TempDir dir;
    write_features_csv(m, dir / "f.csv");
    const FeatureMatrix back{read_features_csv(dir / "f.csv")};
    CHECK(back.addresses == m.addresses);
    CHECK(back.values == m.values);

    std::ofstream{dir / "bad.csv"} << "address,a\n0x01,zz\n";
    CHECK_THROWS_AS(read_features_csv(dir / "bad.csv"), FeatureError);
    CHECK_THROWS_AS(read_features_csv(dir / "absent.csv"), FeatureError);
    CHECK(format_double(-0.0) == "0");
    CHECK(format_double(0.1) == "0.1");
}

}  // namespace chainharvest::features
