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

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <chainharvest/chain/types.hpp>
#include <chainharvest/common/error.hpp>
#include <chainharvest/common/matrix.hpp>
#include <chainharvest/ingest/store.hpp>

namespace chainharvest::features {

enum class FeatureErrc {
    kEmptyStore,
    kTooFewRows,
    kDimensionMismatch,
    kMalformedCsv,
    kIo,
};

using FeatureError = Error<FeatureErrc>;

inline constexpr std::size_t kFeatureCount{12};

//! Matrix column order.
inline constexpr std::array<std::string_view, kFeatureCount> kFeatureNames{
    "out_tx_count",    "in_tx_count",     "total_value_out", "total_value_in",
    "mean_value_out",  "mean_value_in",   "unique_out_peers", "unique_in_peers",
    "age",             "activity_rate",   "contract_call_fraction", "mean_gas_price",
};

inline constexpr uint64_t kSecondsPerDay{86'400};

//! Per-account aggregates. Value totals are exact wei; means are ether; age is seconds
//! between first and last activity; activity_rate is transactions per day with a one-day floor.
struct AccountFeatures {
    Address address;
    uint64_t out_tx_count{0};
    uint64_t in_tx_count{0};
    U256 total_value_out{0};
    U256 total_value_in{0};
    double mean_value_out{0};
    double mean_value_in{0};
    uint64_t unique_out_peers{0};
    uint64_t unique_in_peers{0};
    uint64_t age{0};
    double activity_rate{0};
    double contract_call_fraction{0};
    double mean_gas_price{0};

    //! Values in kFeatureNames order, totals converted to ether.
    [[nodiscard]] std::array<double, kFeatureCount> vector() const;
};

double wei_to_ether(const U256& wei);

//! One entry per address seen as sender or recipient, ascending by address. Contract creations
//! count as outgoing transactions but carry no value into the value aggregates, since they have
//! no recipient to balance them.
std::vector<AccountFeatures> aggregate_accounts(std::span<const ingest::StoredTransaction> transactions);

//! Throws FeatureError{kEmptyStore}.
std::vector<AccountFeatures> build_account_features(const ingest::ChainStore& store);

struct Scaling {
    std::vector<double> mean;
    std::vector<double> stddev;  // population; 0 marks a constant column

    //! Throws FeatureError{kDimensionMismatch}.
    [[nodiscard]] Matrix apply(const Matrix& m) const;
};

struct FeatureMatrix {
    std::vector<Address> addresses;
    Matrix values;  // rows follow addresses, columns follow kFeatureNames
    std::optional<Scaling> scaling;
};

FeatureMatrix to_matrix(std::span<const AccountFeatures> accounts);
FeatureMatrix build_features(const ingest::ChainStore& store);

//! Per-column standardization with population stddev; constant columns become zero.
//! Throws FeatureError{kTooFewRows} below two rows.
FeatureMatrix zscore(const FeatureMatrix& m);
Scaling fit_scaling(const Matrix& m);

//! Header `address,<feature names>`; doubles in shortest round-trip form.
void write_features_csv(const FeatureMatrix& m, const std::filesystem::path& path);
FeatureMatrix read_features_csv(const std::filesystem::path& path);

}  // namespace chainharvest::features
