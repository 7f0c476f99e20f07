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

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include <chainharvest/anomaly/detect.hpp>
#include <chainharvest/chain/types.hpp>
#include <chainharvest/features/features.hpp>

namespace chainharvest::anomaly {

struct Annotation {
    std::string label;
    std::string source;
};

using Annotations = std::map<Address, Annotation>;

//! CSV with header `address,label,source`. Throws AnomalyError{kBadParam} on malformed rows
//! and std::runtime_error when the file cannot be read.
Annotations load_annotations(const std::filesystem::path& path);

struct ReportRow {
    Address address;
    std::vector<Method> flagged_by;  // ascending
    std::vector<double> features;    // empty when the address is missing from the matrix
    std::optional<Annotation> annotation;
};

struct OutlierReport {
    std::vector<std::string> feature_names;
    std::vector<ReportRow> rows;  // flagged-by size descending, then address ascending
};

OutlierReport build_report(const features::FeatureMatrix& m, const std::map<Method, std::set<Address>>& flagged,
                           const Annotations* annotations = nullptr);

//! Fixed-width ranked table.
std::string render_report(const OutlierReport& report);
nlohmann::json to_json(const OutlierReport& report);

}  // namespace chainharvest::anomaly
