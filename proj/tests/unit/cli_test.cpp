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

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <catch_amalgamated.hpp>
#include <nlohmann/json.hpp>

#include <chainharvest/cli/cli.hpp>
#include <chainharvest/node/fixture.hpp>

#include "fixtures.hpp"

namespace chainharvest::cli {

namespace {

    using nlohmann::json;

    struct Outcome {
        int code{0};
        std::string out;
        std::string err;
    };

    Outcome invoke(const std::vector<std::string>& args) {
        std::ostringstream out;
        std::ostringstream err;
        const int code{run(args, out, err)};
        return {code, out.str(), err.str()};
    }

    std::string slurp(const std::filesystem::path& path) {
        std::ifstream in{path, std::ios::binary};
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    std::string fixture_url(const std::string& name) { return "fixture:" + test::fixture_path(name).string(); }

    const std::string kTransfer{
        "0xa9059cbb0000000000000000000000004144fa802c57354b83f2d93fb8bc075c99ec4b90"
        "0000000000000000000000000000000000000000000000000000000000000001"};

}  // namespace

TEST_CASE("crawl reports counters and checkpoint", "[cli]") {
    test::TempDir dir;
    const auto db{(dir / "c.db").string()};
    const auto r{invoke({"--rpc-url", fixture_url("chain100.json"), "--db", db, "crawl", "--workers", "2",
                         "--chunk-size", "7", "--abi-dir", test::fixture_path("abi_registry").string()})};
    REQUIRE(r.code == kExitOk);
    const json doc = json::parse(r.out);
    CHECK(doc["blocks_ingested"] == 100);
    CHECK(doc["txs_ingested"] == 97);
    CHECK(doc["logs_ingested"] == 9);
    CHECK(doc["decode_hits"] == 9);
    CHECK(doc["last_contiguous_block"] == 99);
    CHECK(r.err.find("config {") != std::string::npos);
    const auto config_line{r.err.substr(r.err.find("config ") + 7, r.err.find('\n') - 7)};
    CHECK(json::parse(config_line)["rpc_url"] == "fixture:<path>");

    const auto again{invoke({"--rpc-url", fixture_url("chain100.json"), "--db", db, "crawl", "--resume"})};
    CHECK(again.code == kExitOk);
    CHECK(json::parse(again.out)["blocks_ingested"] == 0);
}

TEST_CASE("crawl argument and node failures map to exit codes", "[cli]") {
    test::TempDir dir;
    const auto db{(dir / "c.db").string()};
    CHECK(invoke({"--db", db, "crawl"}).code == kExitUsage);
    CHECK(invoke({"--rpc-url", fixture_url("chain100.json"), "--db", db, "crawl", "--from-block", "9",
                  "--to-block", "3"})
              .code == kExitUsage);
    CHECK(invoke({"--rpc-url", fixture_url("chain100.json"), "--db", db, "crawl", "--workers", "0"}).code ==
          kExitUsage);
    CHECK(invoke({"--rpc-url", fixture_url("nope.json"), "--db", db, "crawl"}).code == kExitNoInput);
    CHECK(invoke({"--rpc-url", "ftp://example.org", "--db", db, "crawl"}).code == kExitUsage);
    CHECK(invoke({"--rpc-url", "http://127.0.0.1:1", "--rpc-retries", "0", "--rpc-timeout", "1", "--db", db,
                  "crawl"})
              .code == kExitUnavailable);
    CHECK(invoke({"--rpc-url", fixture_url("chain100.json"), "--db", db, "crawl", "--resume", "--job-id", "ghost"})
              .code == kExitNoInput);
    CHECK(invoke({"--rpc-url", fixture_url("chain100.json"), "--db", db, "crawl", "--workers", "lots"}).code ==
          kExitUsage);
}

TEST_CASE("crawl aborted mid-range exits 2 and resumes", "[cli]") {
    test::TempDir dir;
    const auto db{(dir / "c.db").string()};
    auto backend{std::make_shared<node::FixtureTransport>(node::load_fixture(test::fixture_path("chain100.json")))};
    node::FixtureRpcServer server{backend};
    server.start();
    backend->fail_after(40);
    const auto aborted{invoke({"--rpc-url", server.url(), "--rpc-retries", "0", "--db", db, "crawl", "--chunk-size",
                               "5"})};
    REQUIRE(aborted.code == kExitAborted);
    const json partial = json::parse(aborted.out);
    CHECK(partial["blocks_ingested"].get<uint64_t>() < 100);

    backend->fail_after(std::nullopt);
    const auto resumed{invoke({"--rpc-url", server.url(), "--db", db, "crawl", "--resume"})};
    REQUIRE(resumed.code == kExitOk);
    const json doc = json::parse(resumed.out);
    CHECK(doc["last_contiguous_block"] == 99);
    CHECK(partial["blocks_ingested"].get<uint64_t>() + doc["blocks_ingested"].get<uint64_t>() == 100);
    server.stop();
}

TEST_CASE("decode prints the call and a readable line", "[cli]") {
    const auto abi{test::fixture_path("abi/erc20.abi").string()};
    const auto r{invoke({"decode", "--abi", abi, "--calldata", kTransfer})};
    REQUIRE(r.code == kExitOk);
    const json doc = json::parse(r.out);
    CHECK(doc["function"] == "transfer");
    CHECK(doc["signature"] == "transfer(address,uint256)");
    CHECK(doc["args"][1]["value"] == "1");
    CHECK(r.err.find("transfer(to=0x4144fa802c57354b83f2d93fb8bc075c99ec4b90, value=1)") != std::string::npos);

    const auto empty{invoke({"decode", "--abi", abi, "--calldata", "0x"})};
    CHECK(empty.code == kExitOk);
    CHECK(json::parse(empty.out)["function"].is_null());
}

TEST_CASE("decode failures map to exit codes", "[cli]") {
    test::TempDir dir;
    const auto abi{test::fixture_path("abi/erc20.abi").string()};
    const auto unknown{invoke({"decode", "--abi", abi, "--calldata", "0xdeadbeef00"})};
    CHECK(unknown.code == kExitUnknownSelector);
    const json doc = json::parse(unknown.out);
    CHECK(doc["error"] == "unknown selector");
    CHECK(doc["selector"] == "0xdeadbeef");
    CHECK(doc["calldata"] == "0xdeadbeef00");

    CHECK(invoke({"decode", "--abi", abi, "--calldata", kTransfer.substr(0, 60)}).code == kExitDataError);
    CHECK(invoke({"decode", "--abi", abi, "--calldata", "0xzz"}).code == kExitUsage);
    CHECK(invoke({"decode", "--abi", abi}).code == kExitUsage);
    CHECK(invoke({"decode", "--abi", abi, "--calldata", "0x", "--tx", "0x00"}).code == kExitUsage);
    CHECK(invoke({"decode", "--abi", (dir / "missing.abi").string(), "--calldata", "0x"}).code == kExitNoInput);
    {
        std::ofstream bad{dir / "bad.abi"};
        bad << "{not json";
    }
    CHECK(invoke({"decode", "--abi", (dir / "bad.abi").string(), "--calldata", "0x"}).code == kExitDataError);
    const std::string hash(66, 'a');
    CHECK(invoke({"--db", (dir / "none.db").string(), "decode", "--abi", abi, "--tx", "0x" + hash.substr(2)}).code ==
          kExitNoInput);
}

TEST_CASE("decode looks up stored transactions", "[cli]") {
    test::TempDir dir;
    const auto db{(dir / "c.db").string()};
    REQUIRE(invoke({"--rpc-url", fixture_url("chain100.json"), "--db", db, "crawl"}).code == kExitOk);
    const auto abi{test::fixture_path("abi/erc20.abi").string()};
    const std::string tx{"0x7e07862419de65fe27a811b828362b8fa43373ed45629e999a1d826718e49d68"};
    const auto r{invoke({"--db", db, "decode", "--abi", abi, "--tx", tx})};
    REQUIRE(r.code == kExitOk);
    const json doc = json::parse(r.out);
    CHECK(doc["function"] == "transfer");
    CHECK(doc["source"]["tx"] == tx);
    CHECK(doc["source"]["block_number"] == 3);

    std::string other{tx};
    other.back() = '0';
    CHECK(invoke({"--db", db, "decode", "--abi", abi, "--tx", other}).code == kExitNoInput);
}

TEST_CASE("export and features commands", "[cli]") {
    test::TempDir dir;
    const auto db{(dir / "c.db").string()};
    CHECK(invoke({"--db", db, "features", "--out", (dir / "f.csv").string()}).code == kExitNoInput);
    CHECK(invoke({"--db", db, "export", "--table", "blocks", "--out", (dir / "b.csv").string()}).code ==
          kExitNoInput);
    REQUIRE(invoke({"--rpc-url", fixture_url("chain100.json"), "--db", db, "crawl"}).code == kExitOk);

    const auto exported{invoke({"--db", db, "export", "--table", "transactions", "--out", (dir / "t.csv").string()})};
    REQUIRE(exported.code == kExitOk);
    CHECK(json::parse(exported.out)["rows"] == 97);
    CHECK(std::filesystem::exists(dir / "t.csv"));
    CHECK(invoke({"--db", db, "export", "--table", "accounts", "--out", (dir / "x.csv").string()}).code ==
          kExitUsage);

    const auto feats{invoke({"--db", db, "features", "--out", (dir / "f.csv").string()})};
    REQUIRE(feats.code == kExitOk);
    const auto csv{slurp(dir / "f.csv")};
    CHECK(csv.starts_with("address,"));
    const auto to_stdout{invoke({"--db", db, "features", "--out", "-"})};
    REQUIRE(to_stdout.code == kExitOk);
    CHECK(to_stdout.out == csv);
}

TEST_CASE("pipeline output is byte-identical across runs", "[cli]") {
    std::vector<std::string> reports;
    std::vector<std::string> detections;
    for (int run_index{0}; run_index < 2; ++run_index) {
        test::TempDir dir;
        const auto db{(dir / "p.db").string()};
        const auto features{(dir / "f.csv").string()};
        const auto detection{(dir / "d.json").string()};
        REQUIRE(invoke({"--rpc-url", fixture_url("planted.json"), "--db", db, "crawl", "--workers",
                        run_index == 0 ? "1" : "4"})
                    .code == kExitOk);
        REQUIRE(invoke({"--db", db, "features", "--out", features}).code == kExitOk);
        REQUIRE(invoke({"detect", "--features", features, "--out", detection}).code == kExitOk);
        const auto report{invoke({"report", "--detect", detection, "--features", features})};
        REQUIRE(report.code == kExitOk);
        reports.push_back(report.out);
        detections.push_back(slurp(detection));
    }
    CHECK(reports[0] == reports[1]);
    CHECK(detections[0] == detections[1]);

    std::istringstream planted{test::read_fixture("planted_accounts.txt")};
    for (std::string address; std::getline(planted, address);) {
        if (!address.empty()) CHECK(reports[0].find(address) != std::string::npos);
    }
}

TEST_CASE("detect and report options", "[cli]") {
    test::TempDir dir;
    const auto db{(dir / "p.db").string()};
    const auto features{(dir / "f.csv").string()};
    REQUIRE(invoke({"--rpc-url", fixture_url("planted.json"), "--db", db, "crawl"}).code == kExitOk);
    REQUIRE(invoke({"--db", db, "features", "--out", features}).code == kExitOk);

    const auto only{invoke({"detect", "--features", features, "--method", "kmeans", "--k", "3", "--seed", "7"})};
    REQUIRE(only.code == kExitOk);
    const json doc = json::parse(only.out);
    CHECK(doc["params"]["methods"] == json::array({"kmeans"}));
    CHECK(doc["params"]["kmeans"]["k"] == 3);
    CHECK(doc["params"]["kmeans"]["seed"] == 7);
    CHECK(doc["flagged"].contains("kmeans"));
    CHECK_FALSE(doc["flagged"].contains("ocsvm"));

    const auto single{invoke({"detect", "--features", features, "--method", "kmeans", "--k", "1"})};
    REQUIRE(single.code == kExitOk);
    const json single_doc = json::parse(single.out);
    CHECK(single_doc["flagged"]["kmeans"].empty());
    CHECK(single_doc["warnings"].size() == 1);
    CHECK(single.err.find("[warning] k-means left a single non-empty cluster") != std::string::npos);

    CHECK(invoke({"detect", "--features", features, "--method", "forest"}).code == kExitUsage);
    CHECK(invoke({"detect", "--features", features, "--kernel", "poly"}).code == kExitUsage);
    CHECK(invoke({"detect", "--features", features, "--nu", "1.5"}).code == kExitUsage);
    CHECK(invoke({"detect", "--features", features, "--k", "0"}).code == kExitUsage);
    CHECK(invoke({"detect", "--features", (dir / "missing.csv").string()}).code == kExitNoInput);

    const auto detection{(dir / "d.json").string()};
    REQUIRE(invoke({"detect", "--features", features, "--method", "ocsvm", "--nu", "0.05", "--out", detection})
                .code == kExitOk);
    {
        std::ofstream notes{dir / "notes.csv"};
        notes << "address,label,source\n";
        std::istringstream planted{test::read_fixture("planted_accounts.txt")};
        for (std::string address; std::getline(planted, address);) {
            if (!address.empty()) notes << address << ",planted,fixture\n";
        }
    }
    const auto json_report{invoke({"report", "--detect", detection, "--features", features, "--annotations",
                                   (dir / "notes.csv").string(), "--format", "json"})};
    REQUIRE(json_report.code == kExitOk);
    const json rep = json::parse(json_report.out);
    CHECK(rep["format"] == "chainharvest-report/1");
    CHECK(rep["rows"].size() == json::parse(slurp(detection))["flagged"]["ocsvm"].size());

    CHECK(invoke({"report", "--detect", detection, "--features", features, "--format", "xml"}).code == kExitUsage);
    CHECK(invoke({"report", "--detect", features, "--features", features}).code == kExitDataError);
    CHECK(invoke({"report", "--detect", (dir / "none.json").string(), "--features", features}).code ==
          kExitNoInput);
}

TEST_CASE("find-block resolves timestamps", "[cli]") {
    const auto r{invoke({"--rpc-url", fixture_url("chain100.json"), "find-block", "--timestamp", "1000000000000"})};
    REQUIRE(r.code == kExitOk);
    CHECK(json::parse(r.out)["block_number"] == 99);
    CHECK(invoke({"--rpc-url", fixture_url("chain100.json"), "find-block", "--timestamp", "0"}).code ==
          kExitDataError);
    CHECK(invoke({"--rpc-url", fixture_url("chain100.json"), "find-block"}).code == kExitUsage);
}

TEST_CASE("usage, help, config file and environment", "[cli]") {
    CHECK(invoke({}).code == kExitUsage);
    CHECK(invoke({"frobnicate"}).code == kExitUsage);
    const auto help{invoke({"--help"})};
    CHECK(help.code == kExitOk);
    CHECK(help.out.find("crawl") != std::string::npos);
    CHECK(invoke({"--log-level", "chatty", "decode", "--abi", "x", "--calldata", "0x"}).code == kExitUsage);

    test::TempDir dir;
    const auto db{(dir / "cfg.db").string()};
    {
        std::ofstream cfg{dir / "run.toml"};
        cfg << "rpc-url = \"" << fixture_url("chain100.json") << "\"\n"
            << "db = \"" << db << "\"\n"
            << "[crawl]\n"
            << "to-block = 9\n";
    }
    const auto configured{invoke({"--config", (dir / "run.toml").string(), "crawl"})};
    REQUIRE(configured.code == kExitOk);
    CHECK(json::parse(configured.out)["blocks_ingested"] == 10);

    ::setenv("CHAINHARVEST_RPC_URL", fixture_url("chain100.json").c_str(), 1);
    ::setenv("CHAINHARVEST_DB", db.c_str(), 1);
    ::setenv("CHAINHARVEST_CRAWL_TO_BLOCK", "19", 1);
    const auto from_env{invoke({"crawl", "--job-id", "env", "--from-block", "10"})};
    ::unsetenv("CHAINHARVEST_RPC_URL");
    ::unsetenv("CHAINHARVEST_DB");
    ::unsetenv("CHAINHARVEST_CRAWL_TO_BLOCK");
    REQUIRE(from_env.code == kExitOk);
    CHECK(json::parse(from_env.out)["blocks_ingested"] == 10);
}

}  // namespace chainharvest::cli
