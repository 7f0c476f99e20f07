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

#include <nlohmann/json.hpp>

#include <chainharvest/anomaly/evaluation.hpp>
#include <chainharvest/anomaly/kmeans.hpp>
#include <chainharvest/anomaly/ocsvm.hpp>
#include <chainharvest/anomaly/svm.hpp>

namespace chainharvest::anomaly {

//! Self-describing model documents. Every real number is written as shortest round-trip
//! decimal text, so reloading reproduces predictions bit for bit. Readers throw
//! AnomalyError{kMalformedModel}.
nlohmann::json to_json(const OcsvmModel& model);
nlohmann::json to_json(const KMeansModel& model);
nlohmann::json to_json(const SvmModel& model);
nlohmann::json to_json(const ConfusionMatrix& matrix);
nlohmann::json to_json(const Agreement& agreement);

OcsvmModel ocsvm_from_json(const nlohmann::json& doc);
KMeansModel kmeans_from_json(const nlohmann::json& doc);
SvmModel svm_from_json(const nlohmann::json& doc);
ConfusionMatrix confusion_from_json(const nlohmann::json& doc);

}  // namespace chainharvest::anomaly
