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

#include <chainharvest/cli/cli.hpp>

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <unistd.h>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include <chainharvest/abi/codec.hpp>
#include <chainharvest/abi/error.hpp>
#include <chainharvest/anomaly/detect.hpp>
#include <chainharvest/anomaly/report.hpp>
#include <chainharvest/common/format.hpp>
#include <chainharvest/common/hex.hpp>
#include <chainharvest/features/features.hpp>
#include <chainharvest/ingest/crawler.hpp>
#include <chainharvest/node/client.hpp>
#include <chainharvest/node/error.hpp>
#include <chainharvest/node/transport.hpp>

namespace chainharvest::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

    class Failure : public std::runtime_error {
      public:
        Failure(int code, const std::string& what) : std::runtime_error{what}, code_{code} {}
        [[nodiscard]] int code() const noexcept { return code_; }

      private:
        int code_;
    };

    [[noreturn]] void fail(int code, const std::string& what) { throw Failure{code, what}; }

    struct Globals {
        std::string rpc_url;
        std::string db{"chainharvest.db"};
        std::string log_level{"info"};
        double rpc_timeout{30.0};
        unsigned rpc_retries{3};
    };

    struct CrawlOptions {
        uint64_t from_block{0};
        std::optional<uint64_t> to_block;
        unsigned workers{1};
        uint64_t chunk_size{64};
        std::string abi_dir;
        std::string job_id{"default"};
        bool resume{false};
    };

    struct DecodeOptions {
        std::string abi;
        std::string calldata;
        std::string tx;
    };

    struct ExportOptions {
        std::string table;
        std::string out;
    };

    struct FeaturesOptions {
        std::string out{"features.csv"};
    };

    struct DetectOptions {
        std::string features{"features.csv"};
        std::string method{"all"};
        std::string out;
        double nu{0.01};
        std::optional<double> gamma;
        std::size_t k{4};
        std::size_t n_init{10};
        double c{1.0};
        std::string kernel{"linear"};
        uint64_t seed{42};
        double split{0.8};
    };

    struct ReportOptions {
        std::string detect{"detect.json"};
        std::string features{"features.csv"};
        std::string annotations;
        std::string out;
        std::string format{"text"};
    };

    struct FindBlockOptions {
        uint64_t timestamp{0};
    };

    // Routes the default logger to the caller's error stream for the length of a run.
    class LogScope {
      public:
        LogScope(std::ostream& err, spdlog::level::level_enum level) : previous_{spdlog::default_logger()} {
            auto sink{std::make_shared<spdlog::sinks::ostream_sink_mt>(err, true)};
            auto logger{std::make_shared<spdlog::logger>("chainharvest", sink)};
            logger->set_pattern("[%l] %v");
            logger->set_level(level);
            spdlog::set_default_logger(logger);
        }
        ~LogScope() { spdlog::set_default_logger(previous_); }
        LogScope(const LogScope&) = delete;
        LogScope& operator=(const LogScope&) = delete;

      private:
        std::shared_ptr<spdlog::logger> previous_;
    };

    spdlog::level::level_enum parse_level(const std::string& name) {
        for (const auto level : {spdlog::level::trace, spdlog::level::debug, spdlog::level::info, spdlog::level::warn,
                                 spdlog::level::err, spdlog::level::critical, spdlog::level::off}) {
            if (spdlog::level::to_string_view(level) == name) return level;
        }
        if (name == "warning") return spdlog::level::warn;
        if (name == "error") return spdlog::level::err;
        fail(kExitUsage, "unknown log level '" + name + "'");
    }

    void print_config(std::ostream& err, const std::string& command, json cfg, const Globals& g) {
        json doc = json::object();
        doc["command"] = command;
        doc["db"] = g.db;
        doc["log_level"] = g.log_level;
        if (!g.rpc_url.empty()) {
            doc["rpc_url"] = node::redact_url(g.rpc_url);
            doc["rpc_timeout_s"] = format_double(g.rpc_timeout);
            doc["rpc_retries"] = g.rpc_retries;
        }
        doc["options"] = std::move(cfg);
        err << "config " << doc.dump() << '\n';
    }

    void require_file(const std::string& path, const std::string& what) {
        if (path.empty()) fail(kExitUsage, what + " path is required");
        std::error_code ec;
        if (!fs::is_regular_file(path, ec)) fail(kExitNoInput, what + " not found: " + path);
    }

    std::string read_file(const std::string& path, const std::string& what) {
        require_file(path, what);
        std::ifstream in{path, std::ios::binary};
        if (!in) fail(kExitNoInput, "cannot read " + what + ": " + path);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    // Writes through a temporary so a failed run never leaves a truncated artifact.
    void write_output(const std::string& path, const std::string& content, std::ostream& out) {
        if (path.empty() || path == "-") {
            out << content;
            return;
        }
        const fs::path target{path};
        const fs::path tmp{target.string() + ".tmp"};
        {
            std::ofstream file{tmp, std::ios::binary | std::ios::trunc};
            if (!file) fail(kExitSoftware, "cannot write " + path);
            file << content;
            if (!file) fail(kExitSoftware, "cannot write " + path);
        }
        fs::rename(tmp, target);
    }

    node::NodeEndpoint endpoint_of(const Globals& g) {
        if (g.rpc_url.empty()) fail(kExitUsage, "--rpc-url is required");
        node::NodeEndpoint endpoint;
        endpoint.url = g.rpc_url;
        endpoint.request_timeout = std::chrono::duration<double>{g.rpc_timeout};
        endpoint.max_retries = g.rpc_retries;
        return endpoint;
    }

    // Opens the node and checks it answers; unreachable nodes map to their own exit code.
    std::pair<node::NodeClient, uint64_t> connect(const Globals& g) {
        const auto endpoint{endpoint_of(g)};
        std::shared_ptr<node::Transport> transport;
        try {
            transport = node::make_transport(endpoint);
        } catch (const node::NodeError& e) {
            if (e.code() == node::NodeErrc::kBadFixture) {
                const bool missing{!fs::exists(g.rpc_url.substr(std::string_view{"fixture:"}.size()))};
                fail(missing ? kExitNoInput : kExitDataError, e.what());
            }
            fail(kExitUsage, e.what());
        }
        node::NodeClient client{transport, endpoint};
        try {
            const auto head{client.block_number()};
            return {std::move(client), head};
        } catch (const node::NodeError& e) {
            fail(kExitUnavailable, "node " + node::redact_url(g.rpc_url) + " unreachable: " + e.what());
        }
    }

    void require_store(const Globals& g) {
        if (g.db == ":memory:") return;
        std::error_code ec;
        if (!fs::is_regular_file(g.db, ec)) fail(kExitNoInput, "database not found: " + g.db);
    }

    json stats_document(const ingest::CrawlStats& stats, const std::optional<ingest::Checkpoint>& checkpoint) {
        json doc = json::object();
        doc["blocks_ingested"] = stats.blocks_ingested;
        doc["txs_ingested"] = stats.txs_ingested;
        doc["logs_ingested"] = stats.logs_ingested;
        doc["decode_hits"] = stats.decode_hits;
        doc["decode_misses"] = stats.decode_misses;
        doc["event_hits"] = stats.event_hits;
        doc["event_misses"] = stats.event_misses;
        doc["linkage_breaks"] = stats.linkage_breaks;
        if (checkpoint) {
            doc["job_id"] = checkpoint->job_id;
            doc["range"] = json::array({checkpoint->from_block, checkpoint->to_block});
            doc["last_contiguous_block"] = checkpoint->last_contiguous_block ? json(*checkpoint->last_contiguous_block) : json(nullptr);
        }
        return doc;
    }

    int cmd_crawl(const Globals& g, const CrawlOptions& o, std::ostream& out, std::ostream& err) {
        if (o.workers == 0) fail(kExitUsage, "--workers must be at least 1");
        if (o.chunk_size == 0) fail(kExitUsage, "--chunk-size must be at least 1");
        if (o.to_block && *o.to_block < o.from_block) {
            fail(kExitUsage, "--to-block " + std::to_string(*o.to_block) + " is below --from-block " +
                                 std::to_string(o.from_block));
        }
        auto [client, head] = connect(g);

        ingest::CrawlJob job;
        job.job_id = o.job_id;
        job.from_block = o.from_block;
        job.to_block = o.to_block.value_or(head);
        job.workers = o.workers;
        job.chunk_size = o.chunk_size;
        if (!o.abi_dir.empty()) {
            std::error_code ec;
            if (!fs::is_directory(o.abi_dir, ec)) fail(kExitNoInput, "ABI directory not found: " + o.abi_dir);
            try {
                job.abi_registry = ingest::load_abi_registry(o.abi_dir);
            } catch (const abi::AbiError& e) {
                fail(kExitDataError, e.what());
            }
        }

        json cfg = json::object();
        cfg["from_block"] = job.from_block;
        cfg["to_block"] = job.to_block;
        cfg["chain_head"] = head;
        cfg["workers"] = job.workers;
        cfg["chunk_size"] = job.chunk_size;
        cfg["abi_dir"] = o.abi_dir;
        cfg["abi_contracts"] = job.abi_registry.size();
        cfg["job_id"] = job.job_id;
        cfg["resume"] = o.resume;
        print_config(err, "crawl", cfg, g);

        ingest::ChainStore store{g.db};
        auto report = [&](const ingest::CrawlStats& stats) {
            out << stats_document(stats, store.checkpoint(job.job_id)).dump(2) << '\n';
            err << "elapsed_s " << format_double(stats.elapsed.count()) << " blocks_per_second "
                << format_double(stats.blocks_per_second) << '\n';
        };
        try {
            const auto stats{o.resume ? ingest::resume(job.job_id, client, job, store)
                                      : ingest::crawl(client, job, store)};
            report(stats);
            return kExitOk;
        } catch (const ingest::IngestError& e) {
            if (e.code() == ingest::IngestErrc::kAborted) {
                spdlog::error("crawl aborted: {}", e.what());
                report(e.stats());
                return kExitAborted;
            }
            if (e.code() == ingest::IngestErrc::kUnknownJob) fail(kExitNoInput, e.what());
            fail(kExitUsage, e.what());
        }
    }

    std::string call_display(const json& call) {
        std::string text{call.at("function").get<std::string>() + "("};
        std::size_t index{0};
        for (const auto& arg : call.at("args")) {
            if (index > 0) text += ", ";
            const auto name{arg.value("name", std::string{})};
            const auto& value{arg.at("value")};
            text += (name.empty() ? "arg" + std::to_string(index) : name) + "=" +
                    (value.is_string() ? value.get<std::string>() : value.dump());
            ++index;
        }
        return text + ")";
    }

    int cmd_decode(const Globals& g, const DecodeOptions& o, std::ostream& out, std::ostream& err) {
        if (o.calldata.empty() == o.tx.empty()) fail(kExitUsage, "exactly one of --calldata or --tx is required");
        const auto document{read_file(o.abi, "ABI file")};

        json cfg = json::object();
        cfg["abi"] = o.abi;
        if (!o.calldata.empty()) cfg["calldata"] = o.calldata;
        if (!o.tx.empty()) cfg["tx"] = o.tx;
        print_config(err, "decode", cfg, g);

        abi::AbiDefinition definition;
        try {
            definition = abi::parse_abi(document);
        } catch (const abi::AbiError& e) {
            fail(kExitDataError, std::string{"ABI file: "} + e.what());
        }

        Bytes input;
        json source = json::object();
        if (!o.calldata.empty()) {
            try {
                input = from_hex(o.calldata);
            } catch (const HexError& e) {
                fail(kExitUsage, std::string{"--calldata: "} + e.what());
            }
        } else {
            Hash32 hash;
            try {
                hash = Hash32::from_hex(o.tx);
            } catch (const HexError& e) {
                fail(kExitUsage, std::string{"--tx: "} + e.what());
            }
            require_store(g);
            const ingest::ChainStore store{g.db};
            const auto stored{store.find_transaction(hash)};
            if (!stored) fail(kExitNoInput, "transaction " + hash.to_hex() + " not in " + g.db);
            input = stored->tx.input;
            source["tx"] = hash.to_hex();
            source["block_number"] = stored->tx.block_number;
        }

        try {
            const auto call{abi::decode_call(input, definition)};
            json doc = json::object();
            if (!call) {
                doc["function"] = nullptr;
                doc["calldata"] = "0x";
                err << "empty calldata: plain value transfer\n";
            } else {
                doc = to_json(*call);
                err << call_display(doc) << '\n';
            }
            if (!source.empty()) doc["source"] = source;
            out << doc.dump(2) << '\n';
            return kExitOk;
        } catch (const abi::AbiError& e) {
            json doc = json::object();
            doc["error"] = e.code() == abi::AbiErrc::kUnknownSelector ? "unknown selector" : "undecodable calldata";
            doc["detail"] = e.what();
            doc["selector"] = input.size() >= 4 ? json(to_hex(ByteView{input}.first(4))) : json(nullptr);
            doc["calldata"] = to_hex(input);
            if (!source.empty()) doc["source"] = source;
            out << doc.dump(2) << '\n';
            if (e.code() == abi::AbiErrc::kUnknownSelector) return kExitUnknownSelector;
            spdlog::error("decode failed: {}", e.what());
            return kExitDataError;
        }
    }

    int cmd_export(const Globals& g, const ExportOptions& o, std::ostream& out, std::ostream& err) {
        const auto table{ingest::table_from_string(o.table)};
        if (!table) fail(kExitUsage, "unknown table '" + o.table + "'");
        if (o.out.empty()) fail(kExitUsage, "--out is required");
        require_store(g);
        json cfg = json::object();
        cfg["table"] = o.table;
        cfg["out"] = o.out;
        print_config(err, "export", cfg, g);
        const ingest::ChainStore store{g.db};
        const auto rows{store.export_table(*table, o.out)};
        json doc = json::object();
        doc["table"] = o.table;
        doc["rows"] = rows;
        doc["path"] = o.out;
        out << doc.dump(2) << '\n';
        return kExitOk;
    }

    int cmd_features(const Globals& g, const FeaturesOptions& o, std::ostream& out, std::ostream& err) {
        require_store(g);
        json cfg = json::object();
        cfg["out"] = o.out;
        print_config(err, "features", cfg, g);
        const ingest::ChainStore store{g.db};
        features::FeatureMatrix m;
        try {
            m = features::build_features(store);
        } catch (const features::FeatureError& e) {
            if (e.code() == features::FeatureErrc::kEmptyStore) fail(kExitNoInput, e.what());
            throw;
        }
        if (o.out.empty() || o.out == "-") {
            const fs::path tmp{fs::temp_directory_path() / ("chainharvest-features-" + std::to_string(::getpid()))};
            features::write_features_csv(m, tmp);
            std::ifstream in{tmp, std::ios::binary};
            out << in.rdbuf();
            fs::remove(tmp);
        } else {
            features::write_features_csv(m, o.out);
        }
        err << "accounts " << m.addresses.size() << " features " << m.values.cols() << '\n';
        return kExitOk;
    }

    features::FeatureMatrix load_features(const std::string& path) {
        require_file(path, "feature file");
        try {
            return features::read_features_csv(path);
        } catch (const features::FeatureError& e) {
            fail(kExitDataError, e.what());
        }
    }

    int cmd_detect(const Globals& g, const DetectOptions& o, std::ostream& out, std::ostream& err) {
        anomaly::DetectParams params;
        if (o.method == "all") {
            params.methods = {anomaly::Method::kOcsvm, anomaly::Method::kKmeans, anomaly::Method::kSvm};
        } else {
            try {
                params.methods = {anomaly::method_from_string(o.method)};
            } catch (const anomaly::AnomalyError& e) {
                fail(kExitUsage, e.what());
            }
        }
        params.ocsvm.nu = o.nu;
        params.ocsvm.gamma = o.gamma;
        params.ocsvm.seed = o.seed;
        params.kmeans.k = o.k;
        params.kmeans.n_init = o.n_init;
        params.kmeans.seed = o.seed;
        params.svm.c = o.c;
        params.svm.seed = o.seed;
        params.svm.split = o.split;
        params.svm.gamma = o.gamma;
        try {
            params.svm.kernel = anomaly::svm_kernel_from_string(o.kernel);
        } catch (const anomaly::AnomalyError& e) {
            fail(kExitUsage, e.what());
        }

        const auto raw{load_features(o.features)};
        if (raw.addresses.size() < 2) fail(kExitDataError, "feature file needs at least two accounts");
        const auto resolved{anomaly::resolve_params(params, raw.values.rows(), raw.values.cols())};
        json cfg = anomaly::to_json(resolved);
        cfg["features"] = o.features;
        cfg["out"] = o.out;
        print_config(err, "detect", cfg, g);

        anomaly::DetectionResult result;
        try {
            result = anomaly::detect(features::zscore(raw), resolved);
        } catch (const anomaly::AnomalyError& e) {
            fail(kExitUsage, e.what());
        }
        for (const auto& w : result.warnings) spdlog::warn("{}", w);
        for (const auto& [method, set] : result.flagged) {
            err << "flagged " << anomaly::to_string(method) << ' ' << set.size() << '\n';
        }
        for (const auto& [name, rate] : result.overlaps) err << "overlap " << name << ' ' << format_double(rate) << '\n';
        if (result.svm_vs_kmeans) {
            err << "svm_vs_kmeans overall " << format_double(result.svm_vs_kmeans->overall) << " macro "
                << format_double(result.svm_vs_kmeans->macro) << '\n';
        }
        write_output(o.out, anomaly::to_json(result).dump(2) + "\n", out);
        return kExitOk;
    }

    int cmd_report(const Globals& g, const ReportOptions& o, std::ostream& out, std::ostream& err) {
        if (o.format != "text" && o.format != "json") fail(kExitUsage, "--format must be text or json");
        const auto detect_text{read_file(o.detect, "detection document")};
        const auto raw{load_features(o.features)};
        std::optional<anomaly::Annotations> notes;
        if (!o.annotations.empty()) {
            require_file(o.annotations, "annotations file");
            try {
                notes = anomaly::load_annotations(o.annotations);
            } catch (const anomaly::AnomalyError& e) {
                fail(kExitDataError, e.what());
            }
        }
        json cfg = json::object();
        cfg["detect"] = o.detect;
        cfg["features"] = o.features;
        cfg["annotations"] = o.annotations;
        cfg["out"] = o.out;
        cfg["format"] = o.format;
        print_config(err, "report", cfg, g);

        std::map<anomaly::Method, std::set<Address>> flagged;
        try {
            flagged = anomaly::flagged_from_json(json::parse(detect_text));
        } catch (const json::exception& e) {
            fail(kExitDataError, std::string{"detection document: "} + e.what());
        } catch (const anomaly::AnomalyError& e) {
            fail(kExitDataError, e.what());
        }
        const auto report{anomaly::build_report(raw, flagged, notes ? &*notes : nullptr)};
        const auto text{o.format == "text" ? anomaly::render_report(report) : anomaly::to_json(report).dump(2) + "\n"};
        write_output(o.out, text, out);
        err << "report rows " << report.rows.size() << '\n';
        return kExitOk;
    }

    int cmd_find_block(const Globals& g, const FindBlockOptions& o, std::ostream& out, std::ostream& err) {
        auto [client, head] = connect(g);
        json cfg = json::object();
        cfg["timestamp"] = o.timestamp;
        cfg["chain_head"] = head;
        print_config(err, "find-block", cfg, g);
        try {
            const auto number{node::find_block_by_timestamp(client, o.timestamp)};
            json doc = json::object();
            doc["timestamp"] = o.timestamp;
            doc["block_number"] = number;
            doc["block_timestamp"] = client.get_block_by_number(number, false).header.timestamp;
            out << doc.dump(2) << '\n';
            return kExitOk;
        } catch (const node::NodeError& e) {
            if (e.code() == node::NodeErrc::kBeforeGenesis) fail(kExitDataError, e.what());
            if (e.code() == node::NodeErrc::kTransport) fail(kExitUnavailable, e.what());
            throw;
        }
    }

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Harvests an Ethereum-compatible chain into SQLite and screens accounts for anomalies",
                 "chainharvest"};
    app.set_config("--config", "", "Read options from a TOML/INI file")->envname("CHAINHARVEST_CONFIG");
    app.require_subcommand(1);
    app.option_defaults()->always_capture_default();

    Globals g;
    app.add_option("--rpc-url", g.rpc_url, "Node endpoint (http[s]://... or fixture:<path>)");
    app.add_option("--db", g.db, "SQLite database path");
    app.add_option("--log-level", g.log_level, "trace, debug, info, warn, error or off");
    app.add_option("--rpc-timeout", g.rpc_timeout, "Per-request timeout in seconds")
        ->check(CLI::PositiveNumber);
    app.add_option("--rpc-retries", g.rpc_retries, "Retries after a transport failure");

    CrawlOptions crawl;
    auto* crawl_cmd{app.add_subcommand("crawl", "Ingest a block range into the database")};
    crawl_cmd->add_option("--from-block", crawl.from_block, "First block");
    crawl_cmd->add_option("--to-block", crawl.to_block, "Last block (default: chain head)");
    crawl_cmd->add_option("--workers", crawl.workers, "Concurrent fetchers");
    crawl_cmd->add_option("--chunk-size", crawl.chunk_size, "Blocks handed to a worker at a time");
    crawl_cmd->add_option("--abi-dir", crawl.abi_dir, "Directory of <address>.abi files");
    crawl_cmd->add_option("--job-id", crawl.job_id, "Checkpoint name");
    crawl_cmd->add_flag("--resume", crawl.resume, "Continue the job from its checkpoint");

    DecodeOptions decode;
    auto* decode_cmd{app.add_subcommand("decode", "Decode calldata against an ABI")};
    decode_cmd->add_option("--abi", decode.abi, "ABI JSON file")->required();
    decode_cmd->add_option("--calldata", decode.calldata, "Hex calldata");
    decode_cmd->add_option("--tx", decode.tx, "Transaction hash stored in the database");

    ExportOptions exporter;
    auto* export_cmd{app.add_subcommand("export", "Write one table as CSV")};
    export_cmd->add_option("--table", exporter.table, "blocks, transactions, logs, checkpoints or linkage_breaks")
        ->required();
    export_cmd->add_option("--out", exporter.out, "CSV path")->required();

    FeaturesOptions feats;
    auto* features_cmd{app.add_subcommand("features", "Aggregate per-account features")};
    features_cmd->add_option("--out", feats.out, "CSV path, - for stdout");

    DetectOptions det;
    auto* detect_cmd{app.add_subcommand("detect", "Run the outlier detectors on a feature file")};
    detect_cmd->add_option("--features", det.features, "Feature CSV");
    detect_cmd->add_option("--method", det.method, "ocsvm, kmeans, svm or all");
    detect_cmd->add_option("--out", det.out, "Detection document path (default: stdout)");
    detect_cmd->add_option("--nu", det.nu, "One-class SVM rejection fraction in (0, 1]");
    detect_cmd->add_option("--gamma", det.gamma, "RBF width (default: 1 / feature count)");
    detect_cmd->add_option("--k", det.k, "K-Means clusters");
    detect_cmd->add_option("--n-init", det.n_init, "K-Means restarts");
    detect_cmd->add_option("--c", det.c, "SVM regularization");
    detect_cmd->add_option("--kernel", det.kernel, "SVM kernel: linear or rbf");
    detect_cmd->add_option("--seed", det.seed, "Seed for K-Means and the SVM split");
    detect_cmd->add_option("--split", det.split, "SVM training fraction in (0, 1)");

    ReportOptions rep;
    auto* report_cmd{app.add_subcommand("report", "Rank flagged accounts")};
    report_cmd->add_option("--detect", rep.detect, "Detection document");
    report_cmd->add_option("--features", rep.features, "Feature CSV");
    report_cmd->add_option("--annotations", rep.annotations, "CSV address,label,source");
    report_cmd->add_option("--out", rep.out, "Report path (default: stdout)");
    report_cmd->add_option("--format", rep.format, "text or json");

    FindBlockOptions find;
    auto* find_cmd{app.add_subcommand("find-block", "Latest block at or before a unix timestamp")};
    find_cmd->add_option("--timestamp", find.timestamp, "Unix seconds")->required();

    // CHAINHARVEST_<FLAG> for global flags, CHAINHARVEST_<COMMAND>_<FLAG> for command flags.
    auto bind_environment = [](CLI::App& scope, const std::string& prefix) {
        for (auto* opt : scope.get_options()) {
            const auto& names{opt->get_lnames()};
            if (names.empty() || names.front() == "help" || names.front() == "config") continue;
            std::string env{prefix + names.front()};
            std::replace(env.begin(), env.end(), '-', '_');
            std::transform(env.begin(), env.end(), env.begin(), [](unsigned char ch) { return std::toupper(ch); });
            opt->envname(env);
        }
    };
    bind_environment(app, "CHAINHARVEST_");
    for (auto* sub : app.get_subcommands({})) bind_environment(*sub, "CHAINHARVEST_" + sub->get_name() + "_");

    std::vector<std::string> reversed{args.rbegin(), args.rend()};
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code{app.exit(e, out, err)};
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        LogScope logs{err, parse_level(g.log_level)};
        try {
            if (*crawl_cmd) return cmd_crawl(g, crawl, out, err);
            if (*decode_cmd) return cmd_decode(g, decode, out, err);
            if (*export_cmd) return cmd_export(g, exporter, out, err);
            if (*features_cmd) return cmd_features(g, feats, out, err);
            if (*detect_cmd) return cmd_detect(g, det, out, err);
            if (*report_cmd) return cmd_report(g, rep, out, err);
            if (*find_cmd) return cmd_find_block(g, find, out, err);
        } catch (const Failure&) {
            throw;
        } catch (const std::exception& e) {
            spdlog::critical("{}", e.what());
            return kExitSoftware;
        }
    } catch (const Failure& e) {
        err << "error: " << e.what() << '\n';
        return e.code();
    }
    return kExitUsage;
}

}  // namespace chainharvest::cli
