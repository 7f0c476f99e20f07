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

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <bit>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include <chainharvest/abi/codec.hpp>
#include <chainharvest/anomaly/detect.hpp>
#include <chainharvest/anomaly/evaluation.hpp>
#include <chainharvest/anomaly/kmeans.hpp>
#include <chainharvest/anomaly/ocsvm.hpp>
#include <chainharvest/anomaly/serialize.hpp>
#include <chainharvest/chain/integrity.hpp>
#include <chainharvest/chain/keccak.hpp>
#include <chainharvest/cli/cli.hpp>
#include <chainharvest/common/format.hpp>
#include <chainharvest/features/features.hpp>
#include <chainharvest/ingest/crawler.hpp>
#include <chainharvest/node/fixture.hpp>
#include <chainharvest/scenario/scenarios.hpp>

#include "fixtures.hpp"
#include "known_vectors.hpp"
#include "random_abi.hpp"
#include "reference_keccak.hpp"
#include "synthetic.hpp"

namespace chainharvest::acceptance {

namespace {

    using namespace std::chrono_literals;
    using nlohmann::json;

    struct Verdict {
        bool ok{true};
        std::string detail;

        void require(bool condition, const std::string& what) {
            if (!condition && ok) {
                ok = false;
                detail = what;
            }
        }
    };

    const node::FixtureChain& chain100() {
        static const node::FixtureChain chain{node::load_fixture(test::fixture_path("chain100.json"))};
        return chain;
    }

    const ingest::AbiRegistry& registry() {
        static const ingest::AbiRegistry r{ingest::load_abi_registry(test::fixture_path("abi_registry"))};
        return r;
    }

    node::NodeEndpoint endpoint() {
        node::NodeEndpoint e;
        e.url = "fixture:";
        e.max_retries = 3;
        e.retry_backoff = 1ms;
        return e;
    }

    ingest::CrawlJob job(unsigned workers, uint64_t chunk) {
        ingest::CrawlJob j;
        j.to_block = chain100().blocks.size() - 1;
        j.workers = workers;
        j.chunk_size = chunk;
        j.abi_registry = registry();
        return j;
    }

    Verdict abi_round_trip() {
        Verdict v;
        Rng rng{20240501};
        std::size_t cases{0};
        for (; cases < 10000; ++cases) {
            const abi::FunctionAbi f{test::random_function(rng, 4, abi::kMaxNestingDepth)};
            std::vector<abi::Value> values;
            for (const auto& p : f.inputs) values.push_back(test::random_value(rng, p.type));
            const Bytes calldata{abi::encode_args(f, values)};
            const auto call{abi::decode_call(calldata, abi::AbiDefinition{{f}, {}})};
            v.require(call.has_value(), "no decode for " + f.canonical_signature());
            if (!v.ok) return v;
            std::vector<abi::Value> decoded;
            for (const auto& a : call->args) decoded.push_back(a.value);
            v.require(decoded == values, "value mismatch for " + f.canonical_signature());
            v.require(abi::encode_args(f, decoded) == calldata, "re-encoding differs for " + f.canonical_signature());
            if (!v.ok) return v;
        }
        std::size_t selectors{0};
        bool saw_transfer{false};
        for (const auto& known : test::kKnownSelectors) {
            const auto ours{to_hex(abi::selector(abi::parse_function_signature(known.signature)))};
            const auto digest{test::reference_keccak256(known.signature)};
            const auto oracle{to_hex(ByteView{digest.data(), 4})};
            v.require(ours == oracle && oracle == known.selector, std::string{"selector of "} +
                                                                      std::string{known.signature} + " is " + ours);
            saw_transfer |= known.signature == "transfer(address,uint256)" && ours == "0xa9059cbb";
            ++selectors;
        }
        v.require(selectors >= 20 && saw_transfer, "selector set incomplete");
        if (v.ok) v.detail = std::to_string(cases) + " round trips, " + std::to_string(selectors) + " selectors";
        return v;
    }

    Verdict merkle_tamper() {
        Verdict v;
        const auto& chain{chain100()};
        std::vector<Hash32> tx_leaves;
        std::vector<Hash32> header_leaves;
        std::vector<BlockHeader> headers;
        for (const auto& block : chain.blocks) {
            headers.push_back(block.header);
            header_leaves.push_back(block.header.hash);
            for (const auto& tx : block.transactions) tx_leaves.push_back(tx.hash);
        }
        std::size_t mutations{0};
        for (auto* leaves : {&tx_leaves, &header_leaves}) {
            const Hash32 root{merkle_root(*leaves)};
            for (std::size_t i{0}; i < leaves->size(); ++i) {
                for (std::size_t b{0}; b < 32; ++b) {
                    for (const uint8_t flip : {uint8_t{0x01}, uint8_t{0x80}, uint8_t{0xff}}) {
                        auto mutated{*leaves};
                        mutated[i].bytes()[b] ^= flip;
                        v.require(merkle_root(mutated) != root, "root unchanged at leaf " + std::to_string(i));
                        ++mutations;
                    }
                }
            }
        }
        v.require(mutations >= 1000, "too few mutations");
        v.require(verify_linkage(headers).ok, "pristine chain reported broken");

        Rng rng{77};
        for (int trial{0}; trial < 50 && v.ok; ++trial) {
            auto corrupted{headers};
            std::set<uint64_t> expected;
            const std::size_t count{1 + rng.index(5)};
            while (expected.size() < count) expected.insert(1 + rng.index(headers.size() - 1));
            for (const uint64_t h : expected) corrupted[h].parent_hash.bytes()[rng.index(32)] ^= 0x5a;
            const auto report{verify_linkage(corrupted)};
            v.require(!report.ok && report.offending_heights == std::vector<uint64_t>(expected.begin(), expected.end()),
                      "linkage heights differ in trial " + std::to_string(trial));
        }
        if (v.ok) v.detail = std::to_string(mutations) + " mutations, 50 linkage trials";
        return v;
    }

    Verdict timestamp_search() {
        Verdict v;
        Rng rng{3};
        std::vector<uint64_t> increasing;
        for (uint64_t i{0}; i < 300; ++i) increasing.push_back(1000 + 12 * i);
        std::vector<uint64_t> plateau;
        for (uint64_t i{0}; i < 257; ++i) plateau.push_back(500 + 10 * (i / 5));
        std::vector<uint64_t> irregular{2000};
        for (int i{0}; i < 199; ++i) {
            irregular.push_back(irregular.back() + rng.index(rng.uniform() < 0.1 ? 400 : 20));
        }
        std::size_t queries{0};
        for (const auto* timestamps : {&increasing, &plateau, &irregular}) {
            const node::FixtureChain chain{node::make_timestamp_chain(*timestamps)};
            auto transport{std::make_shared<node::FixtureTransport>(chain)};
            node::NodeClient client{transport, endpoint()};
            const uint64_t n{chain.blocks.size()};
            const uint64_t budget{(n <= 1 ? 0 : static_cast<uint64_t>(std::bit_width(n - 1))) + 2};
            for (uint64_t t{timestamps->front() - 5}; t <= timestamps->back() + 5 && v.ok; ++t) {
                std::optional<uint64_t> oracle;
                for (const auto& block : chain.blocks) {
                    if (block.header.timestamp <= t) oracle = block.header.number;
                }
                transport->reset_counters();
                std::optional<uint64_t> found;
                try {
                    found = node::find_block_by_timestamp(client, t);
                } catch (const node::NodeError& e) {
                    v.require(e.code() == node::NodeErrc::kBeforeGenesis, e.what());
                }
                v.require(found == oracle, "t=" + std::to_string(t) + " disagrees with the scan");
                v.require(transport->total_calls() <= budget, "t=" + std::to_string(t) + " used " +
                                                                  std::to_string(transport->total_calls()) + " calls");
                ++queries;
            }
        }
        if (v.ok) v.detail = std::to_string(queries) + " queries over 3 chains";
        return v;
    }

    double crawl_seconds(unsigned workers) {
        node::FixtureChain slow{chain100()};
        slow.simulated_latency = 5ms;
        auto transport{std::make_shared<node::FixtureTransport>(std::move(slow))};
        node::NodeClient client{transport, endpoint()};
        ingest::ChainStore store{":memory:"};
        const auto start{std::chrono::steady_clock::now()};
        ingest::crawl(client, job(workers, 4), store);
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }

    Verdict ingestion_scaling() {
        Verdict v;
        std::optional<Hash32> reference;
        for (const unsigned workers : {1U, 2U, 4U, 8U}) {
            auto transport{std::make_shared<node::FixtureTransport>(chain100())};
            node::NodeClient client{transport, endpoint()};
            ingest::ChainStore store{":memory:"};
            ingest::crawl(client, job(workers, 7), store);
            const Hash32 digest{store.digest()};
            if (!reference) reference = digest;
            v.require(digest == *reference, "digest differs at workers=" + std::to_string(workers));
        }
        const double one{crawl_seconds(1)};
        const double four{crawl_seconds(4)};
        const double speedup{one / four};
        v.require(speedup >= 2.0, "speedup " + format_double(speedup));
        std::ostringstream detail;
        detail << "digests equal; 5 ms latency: " << std::fixed;
        detail.precision(2);
        detail << one << " s at 1 worker, " << four << " s at 4, speedup " << speedup << "x";
        if (v.ok) v.detail = detail.str();
        return v;
    }

    Verdict crash_resume() {
        Verdict v;
        Hash32 expected;
        {
            auto transport{std::make_shared<node::FixtureTransport>(chain100())};
            node::NodeClient client{transport, endpoint()};
            ingest::ChainStore store{":memory:"};
            ingest::crawl(client, job(1, 64), store);
            expected = store.digest();
        }
        Rng rng{2718};
        for (int trial{0}; trial < 10 && v.ok; ++trial) {
            const unsigned workers{1U << rng.index(4)};
            auto transport{std::make_shared<node::FixtureTransport>(chain100())};
            node::NodeClient client{transport, endpoint()};
            ingest::ChainStore store{":memory:"};
            auto j{job(workers, 1 + rng.index(16))};
            j.job_id = "cut-" + std::to_string(trial);
            transport->fail_after(1 + rng.index(180));
            bool aborted{false};
            try {
                ingest::crawl(client, j, store);
            } catch (const ingest::IngestError& e) {
                aborted = e.code() == ingest::IngestErrc::kAborted;
            }
            v.require(aborted, "trial " + std::to_string(trial) + " did not abort");
            transport->fail_after(std::nullopt);
            ingest::resume(j.job_id, client, j, store);
            v.require(store.digest() == expected, "digest differs after resume in trial " + std::to_string(trial));
        }
        if (v.ok) v.detail = "10 interruptions resumed to the reference digest";
        return v;
    }

    Verdict ocsvm_nu_property() {
        Verdict v;
        const auto points{test::gaussian_points(1000, 2, 11)};
        const double n{static_cast<double>(points.rows())};
        std::ostringstream detail;
        for (const double nu : {0.01, 0.05, 0.1}) {
            anomaly::OcsvmParams params;
            params.nu = nu;
            const auto model{anomaly::ocsvm_fit(points, params)};
            double sum{0.0};
            double bound_violation{0.0};
            const double upper{1.0 / (nu * n)};
            for (const double a : model.dual_coefficients) {
                sum += a;
                bound_violation = std::max({bound_violation, -a, a - upper});
            }
            const double residual{std::max(std::abs(sum - 1.0), bound_violation)};
            const auto flagged{anomaly::ocsvm_predict(model, points).outlier_count()};
            const double flagged_fraction{static_cast<double>(flagged) / n};
            const double sv_fraction{static_cast<double>(model.dual_coefficients.size()) / n};
            const std::string tag{"nu=" + format_double(nu)};
            v.require(model.converged, tag + " not converged");
            v.require(flagged_fraction <= nu + 0.02, tag + " flagged " + format_double(flagged_fraction));
            v.require(sv_fraction >= nu - 0.02, tag + " SV fraction " + format_double(sv_fraction));
            v.require(residual < 1e-6, tag + " feasibility residual " + format_double(residual));
            detail << tag << " flagged " << flagged << " SV " << model.dual_coefficients.size() << "; ";
        }
        if (v.ok) v.detail = detail.str().substr(0, detail.str().size() - 2);
        return v;
    }

    Verdict kmeans_blobs() {
        Verdict v;
        const auto blobs{test::make_blobs({250, 250, 250, 250}, 2, 12.0, 3)};
        anomaly::KMeansParams params;
        params.k = 4;
        const auto model{anomaly::kmeans_fit(blobs.points, params)};
        const double ari{anomaly::adjusted_rand_index(model.assignments, blobs.labels)};
        v.require(ari >= 0.99, "ARI " + format_double(ari));
        v.require(!model.inertia_history.empty(), "no inertia history");
        for (std::size_t i{1}; i < model.inertia_history.size(); ++i) {
            v.require(model.inertia_history[i] <= model.inertia_history[i - 1], "inertia rose at step " +
                                                                                    std::to_string(i));
        }
        const auto again{anomaly::kmeans_fit(blobs.points, params)};
        v.require(again.centers == model.centers && again.assignments == model.assignments &&
                      anomaly::to_json(again).dump() == anomaly::to_json(model).dump(),
                  "refit with the same seed differs");
        if (v.ok) v.detail = "ARI " + format_double(ari) + ", " + std::to_string(model.iterations) + " iterations";
        return v;
    }

    Verdict planted_pipeline() {
        Verdict v;
        const auto chain{node::load_fixture(test::fixture_path("planted.json"))};
        ingest::ChainStore store{":memory:"};
        {
            auto transport{std::make_shared<node::FixtureTransport>(chain)};
            node::NodeClient client{transport, endpoint()};
            ingest::CrawlJob j;
            j.to_block = chain.blocks.size() - 1;
            ingest::crawl(client, j, store);
        }
        const auto raw{features::build_features(store)};
        v.require(raw.addresses.size() == 1000, "expected 1000 accounts, got " + std::to_string(raw.addresses.size()));
        const auto result{anomaly::detect(features::zscore(raw), {})};

        std::istringstream planted{test::read_fixture("planted_accounts.txt")};
        std::size_t planted_count{0};
        for (std::string line; std::getline(planted, line);) {
            if (line.empty()) continue;
            ++planted_count;
            const auto a{Address::from_hex(line)};
            std::size_t votes{0};
            for (const auto& [method, set] : result.flagged) votes += set.contains(a) ? 1 : 0;
            v.require(votes >= 2, line + " flagged by " + std::to_string(votes) + " methods");
        }
        v.require(planted_count == 3, "planted list has " + std::to_string(planted_count) + " entries");
        v.require(result.svm_vs_kmeans.has_value(), "no SVM-vs-KMeans comparison");
        if (!v.ok) return v;
        const auto& agreement{*result.svm_vs_kmeans};
        v.require(anomaly::is_diagonal_dominant(agreement.matrix), "confusion matrix not diagonal-dominant");
        v.require(agreement.overall >= 0.98, "overall agreement " + format_double(agreement.overall));
        if (v.ok) {
            v.detail = "3/3 planted flagged by >= 2 methods; held-out agreement " + format_double(agreement.overall) +
                       " over " + std::to_string(agreement.matrix.total()) + " rows";
        }
        return v;
    }

    Verdict grouping_table() {
        Verdict v;
        const json doc = json::parse(test::read_fixture("anomaly/grouping_results.json"));
        const auto matrix{anomaly::confusion_from_json(doc.at("counts"))};
        const auto a{anomaly::agreement(matrix)};
        v.require(a.overall == 5588265.0 / 5588290.0, "overall " + format_double(a.overall));
        v.require(std::abs(a.macro - 0.930) <= 1e-3, "macro " + format_double(a.macro));
        v.require(a.column_recall.size() == 4 && a.column_recall[1] && a.column_recall[3], "recalls missing");
        if (!v.ok) return v;
        v.require(std::abs(*a.column_recall[1] - 0.842) <= 1e-3, "G2 recall " + format_double(*a.column_recall[1]));
        v.require(std::abs(*a.column_recall[3] - 0.878) <= 1e-3, "G4 recall " + format_double(*a.column_recall[3]));
        if (v.ok) {
            std::ostringstream detail;
            detail.precision(4);
            detail << std::fixed << "overall " << matrix.trace() << "/" << matrix.total() << ", macro " << a.macro
                   << ", G2 " << *a.column_recall[1] << ", G4 " << *a.column_recall[3];
            v.detail = detail.str();
        }
        return v;
    }

    std::string slurp(const std::filesystem::path& path) {
        std::ifstream in{path, std::ios::binary};
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    Verdict end_to_end() {
        Verdict v;
        const std::string url{"fixture:" + test::fixture_path("planted.json").string()};
        std::vector<std::vector<std::string>> runs;
        for (int round{0}; round < 2 && v.ok; ++round) {
            test::TempDir dir;
            const auto db{(dir / "chain.db").string()};
            const auto features{(dir / "features.csv").string()};
            const auto detection{(dir / "detect.json").string()};
            const auto report{(dir / "report.txt").string()};
            std::vector<std::string> outputs;
            auto step = [&](const std::vector<std::string>& args) {
                std::ostringstream out;
                std::ostringstream err;
                const int code{cli::run(args, out, err)};
                v.require(code == cli::kExitOk, args[2] + " exited " + std::to_string(code) + ": " + err.str());
                outputs.push_back(out.str());
            };
            step({"--rpc-url", url, "--db", db, "crawl", "--workers", round == 0 ? "1" : "4"});
            step({"--rpc-url", url, "--db", db, "features", "--out", features});
            step({"--rpc-url", url, "--db", db, "detect", "--method", "all", "--features", features, "--out", detection});
            step({"--rpc-url", url, "--db", db, "report", "--detect", detection, "--features", features, "--out", report});
            outputs.push_back(slurp(features));
            outputs.push_back(slurp(detection));
            outputs.push_back(slurp(report));
            runs.push_back(std::move(outputs));
        }
        if (!v.ok) return v;
        const char* names[]{"crawl stdout", "features stdout", "detect stdout", "report stdout",
                            "features.csv", "detect.json", "report.txt"};
        std::size_t bytes{0};
        for (std::size_t i{0}; i < runs[0].size(); ++i) {
            v.require(runs[0][i] == runs[1][i], std::string{names[i]} + " differs between runs");
            bytes += runs[0][i].size();
        }
        v.require(!runs[0][6].empty(), "empty report");
        if (v.ok) v.detail = "7 outputs identical (" + std::to_string(bytes) + " bytes)";
        return v;
    }

    struct Criterion {
        int id;
        std::string name;
        double budget_s;
        std::function<Verdict()> check;
    };

}  // namespace

int run_all() {
    const std::vector<Criterion> criteria{
        {1, "abi codec round trip and selectors", 30, abi_round_trip},
        {2, "merkle tamper and linkage", 10, merkle_tamper},
        {3, "timestamp search", 5, timestamp_search},
        {4, "ingestion determinism and scaling", 120, ingestion_scaling},
        {5, "crash-resume equivalence", 120, crash_resume},
        {6, "one-class SVM nu property", 60, ocsvm_nu_property},
        {7, "k-means blobs", 30, kmeans_blobs},
        {8, "planted-outlier pipeline", 60, planted_pipeline},
        {9, "grouping table arithmetic", 1, grouping_table},
        {10, "end-to-end determinism", 600, end_to_end},
    };
    int failures{0};
    for (const auto& c : criteria) {
        const auto start{std::chrono::steady_clock::now()};
        Verdict verdict;
        try {
            verdict = c.check();
        } catch (const std::exception& e) {
            verdict = {false, std::string{"exception: "} + e.what()};
        }
        const double elapsed{std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()};
        if (verdict.ok && elapsed > c.budget_s) {
            verdict = {false, "took " + format_double(elapsed) + " s, budget " + format_double(c.budget_s) + " s"};
        }
        std::ostringstream line;
        line.precision(2);
        line << std::fixed << (verdict.ok ? "PASS" : "FAIL") << " criterion " << c.id << " " << c.name << " ("
             << elapsed << " s): " << verdict.detail;
        std::cout << line.str() << std::endl;
        failures += verdict.ok ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}

}  // namespace chainharvest::acceptance

int main() { return chainharvest::acceptance::run_all(); }
