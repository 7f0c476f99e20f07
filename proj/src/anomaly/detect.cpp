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

#include <chainharvest/anomaly/detect.hpp>

#include <algorithm>
#include <string>

#include <chainharvest/anomaly/serialize.hpp>
#include <chainharvest/common/format.hpp>

namespace chainharvest::anomaly {

using nlohmann::json;

namespace {

    constexpr const char* kDetectFormat{"chainharvest-detect/1"};

    std::set<Address> to_addresses(const std::vector<Address>& addresses, const std::vector<std::size_t>& rows) {
        std::set<Address> out;
        for (const auto r : rows) out.insert(addresses[r]);
        return out;
    }

    std::size_t non_empty_clusters(const KMeansModel& model) {
        const auto sizes{model.cluster_sizes()};
        return static_cast<std::size_t>(std::count_if(sizes.begin(), sizes.end(), [](std::size_t s) { return s > 0; }));
    }

}  // namespace

std::string_view to_string(Method method) {
    switch (method) {
        case Method::kOcsvm:
            return "ocsvm";
        case Method::kKmeans:
            return "kmeans";
        case Method::kSvm:
            return "svm";
    }
    return "unknown";
}

Method method_from_string(std::string_view name) {
    if (name == "ocsvm") return Method::kOcsvm;
    if (name == "kmeans") return Method::kKmeans;
    if (name == "svm") return Method::kSvm;
    throw AnomalyError{AnomalyErrc::kBadParam, "unknown method '" + std::string{name} + "'"};
}

DetectParams resolve_params(DetectParams params, std::size_t rows, std::size_t columns) {
    const double inverse{columns > 0 ? 1.0 / static_cast<double>(columns) : 1.0};
    if (!params.ocsvm.gamma) params.ocsvm.gamma = inverse;
    if (!params.ocsvm.max_passes) params.ocsvm.max_passes = std::max<uint64_t>(10'000'000, 100 * rows);
    if (!params.svm.gamma && params.svm.kernel == SvmKernel::kRbf) params.svm.gamma = inverse;
    return params;
}

DetectionResult detect(const features::FeatureMatrix& scaled, const DetectParams& requested) {
    const Matrix& m{scaled.values};
    DetectionResult result;
    result.addresses = scaled.addresses;
    result.params = resolve_params(requested, m.rows(), m.cols());
    const auto& params{result.params};
    const auto wants = [&](Method method) { return params.methods.contains(method); };

    if (wants(Method::kOcsvm)) {
        result.ocsvm = ocsvm_fit(m, params.ocsvm);
        if (!result.ocsvm->converged) {
            result.warnings.push_back("one-class SVM stopped at the iteration cap before reaching tolerance");
        }
        const auto prediction{ocsvm_predict(*result.ocsvm, m)};
        std::vector<std::size_t> rows;
        for (std::size_t r{0}; r < prediction.outlier.size(); ++r) {
            if (prediction.outlier[r]) rows.push_back(r);
        }
        result.flagged[Method::kOcsvm] = to_addresses(result.addresses, rows);
    }

    if (wants(Method::kKmeans) || wants(Method::kSvm)) {
        result.kmeans = kmeans_fit(m, params.kmeans);
        if (wants(Method::kKmeans)) {
            result.flagged[Method::kKmeans] = to_addresses(result.addresses, kmeans_outliers(*result.kmeans));
        }
        if (non_empty_clusters(*result.kmeans) < 2) {
            result.warnings.push_back("k-means left a single non-empty cluster; every account counts as normal");
        }
    }

    if (wants(Method::kSvm)) {
        if (non_empty_clusters(*result.kmeans) < 2) {
            result.warnings.push_back("supervised SVM skipped: k-means labels contain one class");
        } else {
            result.svm = svm_fit(m, result.kmeans->assignments, params.svm);
            for (const auto& machine : result.svm->model.machines) {
                if (!machine.converged) {
                    result.warnings.push_back("SVM machine for label " + std::to_string(machine.label) +
                                              " stopped at the pass cap before reaching tolerance");
                }
            }
            result.svm_vs_kmeans = agreement(result.svm->confusion);
            result.flagged[Method::kSvm] = to_addresses(
                result.addresses, svm_outliers(result.svm->model, m, result.kmeans->dominant_cluster()));
        }
    }

    for (const auto& [a, set_a] : result.flagged) {
        for (const auto& [b, set_b] : result.flagged) {
            if (a == b || set_a.empty()) continue;
            result.overlaps[std::string{to_string(a)} + "_in_" + std::string{to_string(b)}] = overlap_rate(set_a, set_b);
        }
    }
    return result;
}

json to_json(const DetectParams& params) {
    json doc = json::object();
    json methods = json::array();
    for (const auto m : params.methods) methods.push_back(std::string{to_string(m)});
    doc["methods"] = std::move(methods);

    json ocsvm = json::object();
    ocsvm["nu"] = format_double(params.ocsvm.nu);
    ocsvm["gamma"] = params.ocsvm.gamma ? json(format_double(*params.ocsvm.gamma)) : json("auto");
    ocsvm["tolerance"] = format_double(params.ocsvm.tolerance);
    ocsvm["max_passes"] = params.ocsvm.max_passes ? json(*params.ocsvm.max_passes) : json("auto");
    ocsvm["seed"] = params.ocsvm.seed;
    doc["ocsvm"] = std::move(ocsvm);

    json kmeans = json::object();
    kmeans["k"] = params.kmeans.k;
    kmeans["n_init"] = params.kmeans.n_init;
    kmeans["seed"] = params.kmeans.seed;
    kmeans["max_iter"] = params.kmeans.max_iter;
    kmeans["tol"] = format_double(params.kmeans.tol);
    doc["kmeans"] = std::move(kmeans);

    json svm = json::object();
    svm["c"] = format_double(params.svm.c);
    svm["kernel"] = std::string{to_string(params.svm.kernel)};
    if (params.svm.kernel == SvmKernel::kRbf) {
        svm["gamma"] = params.svm.gamma ? json(format_double(*params.svm.gamma)) : json("auto");
    }
    svm["seed"] = params.svm.seed;
    svm["split"] = format_double(params.svm.split);
    svm["tolerance"] = format_double(params.svm.tolerance);
    svm["max_passes"] = params.svm.max_passes;
    doc["svm"] = std::move(svm);
    return doc;
}

json to_json(const DetectionResult& result) {
    json doc = json::object();
    doc["format"] = kDetectFormat;
    doc["rows"] = result.addresses.size();
    doc["params"] = to_json(result.params);

    json flagged = json::object();
    json counts = json::object();
    for (const auto& [method, set] : result.flagged) {
        json list = json::array();
        for (const auto& a : set) list.push_back(a.to_hex());
        flagged[std::string{to_string(method)}] = std::move(list);
        counts[std::string{to_string(method)}] = set.size();
    }
    doc["flagged"] = std::move(flagged);
    doc["flagged_counts"] = std::move(counts);

    json metrics = json::object();
    if (result.kmeans) {
        metrics["kmeans_cluster_sizes"] = result.kmeans->cluster_sizes();
        metrics["kmeans_dominant_cluster"] = result.kmeans->dominant_cluster();
        metrics["kmeans_inertia"] = format_double(result.kmeans->inertia);
    }
    if (result.ocsvm) {
        metrics["ocsvm_support_vectors"] = result.ocsvm->dual_coefficients.size();
        metrics["ocsvm_rho"] = format_double(result.ocsvm->rho);
    }
    if (result.svm_vs_kmeans) {
        json svm = to_json(*result.svm_vs_kmeans);
        svm["orientation"] = "rows: svm prediction, columns: kmeans label";
        svm["train_rows"] = result.svm->split.train.size();
        svm["test_rows"] = result.svm->split.test.size();
        metrics["svm_vs_kmeans"] = std::move(svm);
    }
    json overlaps = json::object();
    for (const auto& [name, rate] : result.overlaps) overlaps[name] = format_double(rate);
    metrics["overlaps"] = std::move(overlaps);
    doc["metrics"] = std::move(metrics);
    doc["warnings"] = result.warnings;

    json models = json::object();
    if (result.ocsvm) models["ocsvm"] = to_json(*result.ocsvm);
    if (result.kmeans) models["kmeans"] = to_json(*result.kmeans);
    if (result.svm) models["svm"] = to_json(result.svm->model);
    doc["models"] = std::move(models);
    return doc;
}

std::map<Method, std::set<Address>> flagged_from_json(const json& doc) {
    if (!doc.is_object() || doc.value("format", "") != kDetectFormat || !doc.contains("flagged") ||
        !doc.at("flagged").is_object()) {
        throw AnomalyError{AnomalyErrc::kMalformedModel, "not a detection document"};
    }
    std::map<Method, std::set<Address>> out;
    for (const auto& [name, list] : doc.at("flagged").items()) {
        Method method{};
        try {
            method = method_from_string(name);
        } catch (const AnomalyError&) {
            throw AnomalyError{AnomalyErrc::kMalformedModel, "unknown method '" + name + "' in detection document"};
        }
        auto& set{out[method]};
        if (!list.is_array()) throw AnomalyError{AnomalyErrc::kMalformedModel, "flagged list must be an array"};
        for (const auto& a : list) {
            try {
                set.insert(Address::from_hex(a.get<std::string>()));
            } catch (const std::exception& e) {
                throw AnomalyError{AnomalyErrc::kMalformedModel, std::string{"bad flagged address: "} + e.what()};
            }
        }
    }
    return out;
}

}  // namespace chainharvest::anomaly
