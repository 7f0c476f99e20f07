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

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include <chainharvest/anomaly/error.hpp>

namespace chainharvest::anomaly {

//! Square count table. Rows follow labeling A, columns labeling B.
class ConfusionMatrix {
  public:
    ConfusionMatrix() = default;
    explicit ConfusionMatrix(std::size_t k) : k_{k}, counts_(k * k, 0) {}

    //! Row-major counts. Throws AnomalyError{kBadParam} unless the table is square.
    static ConfusionMatrix from_rows(const std::vector<std::vector<uint64_t>>& rows);

    [[nodiscard]] std::size_t size() const noexcept { return k_; }
    uint64_t& at(std::size_t a, std::size_t b) { return counts_[a * k_ + b]; }
    [[nodiscard]] uint64_t at(std::size_t a, std::size_t b) const { return counts_[a * k_ + b]; }

    [[nodiscard]] uint64_t total() const;
    [[nodiscard]] uint64_t trace() const;
    [[nodiscard]] uint64_t row_sum(std::size_t a) const;
    [[nodiscard]] uint64_t column_sum(std::size_t b) const;

    friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

  private:
    std::size_t k_{0};
    std::vector<uint64_t> counts_;
};

struct Agreement {
    ConfusionMatrix matrix;
    double overall{0.0};  // trace / total
    double macro{0.0};    // mean of column recalls over non-empty columns
    std::vector<std::optional<double>> column_recall;  // nullopt for empty columns
};

//! Throws AnomalyError{kLengthMismatch} or kBadParam for a label outside [0,k).
Agreement confusion_and_agreement(std::span<const std::size_t> a, std::span<const std::size_t> b, std::size_t k);
Agreement agreement(const ConfusionMatrix& matrix);

//! Every label that occurs has its diagonal count strictly above the rest of its row and
//! strictly above the rest of its column.
bool is_diagonal_dominant(const ConfusionMatrix& matrix);

//! |A and B| / |A|. Throws AnomalyError{kEmptyReference} when A is empty.
template <class T>
double overlap_rate(const std::set<T>& a, const std::set<T>& b) {
    if (a.empty()) {
        throw AnomalyError{AnomalyErrc::kEmptyReference, "overlap reference set is empty"};
    }
    const auto shared = std::count_if(a.begin(), a.end(), [&](const T& x) { return b.contains(x); });
    return static_cast<double>(shared) / static_cast<double>(a.size());
}

//! Hubert-Arabie adjusted Rand index. Throws AnomalyError{kLengthMismatch}.
double adjusted_rand_index(std::span<const std::size_t> a, std::span<const std::size_t> b);

}  // namespace chainharvest::anomaly
