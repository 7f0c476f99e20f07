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

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include <chainharvest/anomaly/evaluation.hpp>
#include <chainharvest/anomaly/kmeans.hpp>
#include <chainharvest/anomaly/ocsvm.hpp>
#include <chainharvest/anomaly/svm.hpp>
#include <chainharvest/chain/types.hpp>
#include <chainharvest/features/features.hpp>

namespace chainharvest::anomaly {

enum class Method {
    kOcsvm,
    kKmeans,
    kSvm,
};

std::string_view to_string(Method method);
//! Accepts ocsvm, kmeans, svm. Throws AnomalyError{kBadParam}.
Method method_from_string(std::string_view name);

struct DetectParams {
    std::set<Method> methods{Method::kOcsvm, Method::kKmeans, Method::kSvm};
    OcsvmParams ocsvm;
    KMeansParams kmeans;
    SvmParams svm;
};

struct DetectionResult {
    std::vector<Address> addresses;
    DetectParams params;  // with defaults resolved
    std::optional<OcsvmModel> ocsvm;
    std::optional<KMeansModel> kmeans;
    std::optional<SvmFit> svm;
    std::map<Method, std::set<Address>> flagged;
    std::optional<Agreement> svm_vs_kmeans;
    //! "a_in_b" -> |flagged(a) and flagged(b)| / |flagged(a)|; absent when flagged(a) is empty.
    std::map<std::string, double> overlaps;
    std::vector<std::string> warnings;
};

//! Fills defaulted hyperparameters from the matrix shape.
DetectParams resolve_params(DetectParams params, std::size_t rows, std::size_t columns);

//! Runs the selected methods on an already standardized matrix. The SVM trains on K-Means
//! labels, so selecting it also fits K-Means. A K-Means run that leaves one non-empty
//! cluster skips the SVM with a warning.
DetectionResult detect(const features::FeatureMatrix& scaled, const DetectParams& params);

//! Parameters, flagged address lists, agreement metrics and models.
nlohmann::json to_json(const DetectionResult& result);
nlohmann::json to_json(const DetectParams& params);

//! Flagged address sets from a detection document.
std::map<Method, std::set<Address>> flagged_from_json(const nlohmann::json& doc);

}  // namespace chainharvest::anomaly
