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

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <chainharvest/anomaly/error.hpp>
#include <chainharvest/common/matrix.hpp>

namespace chainharvest::anomaly {

struct KMeansParams {
    std::size_t k{4};
    uint64_t seed{42};
    std::size_t max_iter{300};
    double tol{1e-6};  // largest center move, Euclidean
    std::size_t n_init{10};  // restarts from one seeded stream; lowest inertia wins
};

struct KMeansModel {
    std::size_t k{0};
    uint64_t seed{0};
    Matrix centers;
    std::vector<std::size_t> assignments;
    double inertia{0.0};
    //! Inertia after each assignment step, in order.
    std::vector<double> inertia_history;
    std::size_t iterations{0};
    bool converged{false};

    //! Nearest center, ties to the lower index. Throws AnomalyError{kDimensionMismatch}.
    [[nodiscard]] std::size_t predict(std::span<const double> x) const;
    [[nodiscard]] std::vector<std::size_t> predict(const Matrix& rows) const;
    [[nodiscard]] std::vector<std::size_t> cluster_sizes() const;
    //! Largest cluster, ties to the lower index.
    [[nodiscard]] std::size_t dominant_cluster() const;
};

//! Greedy k-means++ seeding then Lloyd iterations, repeated n_init times. Throws AnomalyError{kBadK} unless 1 <= k <= rows.
KMeansModel kmeans_fit(const Matrix& m, const KMeansParams& params = {});

//! Row indices outside the dominant cluster, ascending.
std::vector<std::size_t> kmeans_outliers(const KMeansModel& model);

}  // namespace chainharvest::anomaly
