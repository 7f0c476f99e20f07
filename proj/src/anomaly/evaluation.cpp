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

#include <chainharvest/anomaly/evaluation.hpp>

#include <map>
#include <string>
#include <utility>

namespace chainharvest::anomaly {

namespace {

    double pairs(double n) { return n * (n - 1.0) / 2.0; }

    void check_lengths(std::size_t a, std::size_t b) {
        if (a != b) {
            throw AnomalyError{AnomalyErrc::kLengthMismatch,
                               "label vectors differ in length: " + std::to_string(a) + " vs " + std::to_string(b)};
        }
    }

}  // namespace

ConfusionMatrix ConfusionMatrix::from_rows(const std::vector<std::vector<uint64_t>>& rows) {
    ConfusionMatrix out{rows.size()};
    for (std::size_t a{0}; a < rows.size(); ++a) {
        if (rows[a].size() != rows.size()) {
            throw AnomalyError{AnomalyErrc::kBadParam, "confusion matrix must be square"};
        }
        for (std::size_t b{0}; b < rows.size(); ++b) out.at(a, b) = rows[a][b];
    }
    return out;
}

uint64_t ConfusionMatrix::total() const {
    uint64_t sum{0};
    for (const auto c : counts_) sum += c;
    return sum;
}

uint64_t ConfusionMatrix::trace() const {
    uint64_t sum{0};
    for (std::size_t i{0}; i < k_; ++i) sum += at(i, i);
    return sum;
}

uint64_t ConfusionMatrix::row_sum(std::size_t a) const {
    uint64_t sum{0};
    for (std::size_t b{0}; b < k_; ++b) sum += at(a, b);
    return sum;
}

uint64_t ConfusionMatrix::column_sum(std::size_t b) const {
    uint64_t sum{0};
    for (std::size_t a{0}; a < k_; ++a) sum += at(a, b);
    return sum;
}

Agreement agreement(const ConfusionMatrix& matrix) {
    Agreement out;
    out.matrix = matrix;
    const auto total{matrix.total()};
    out.overall = total == 0 ? 0.0 : static_cast<double>(matrix.trace()) / static_cast<double>(total);
    double recall_sum{0.0};
    std::size_t columns{0};
    for (std::size_t b{0}; b < matrix.size(); ++b) {
        const auto col{matrix.column_sum(b)};
        if (col == 0) {
            out.column_recall.emplace_back();
            continue;
        }
        const double recall{static_cast<double>(matrix.at(b, b)) / static_cast<double>(col)};
        out.column_recall.emplace_back(recall);
        recall_sum += recall;
        ++columns;
    }
    out.macro = columns == 0 ? 0.0 : recall_sum / static_cast<double>(columns);
    return out;
}

Agreement confusion_and_agreement(std::span<const std::size_t> a, std::span<const std::size_t> b, std::size_t k) {
    check_lengths(a.size(), b.size());
    ConfusionMatrix matrix{k};
    for (std::size_t i{0}; i < a.size(); ++i) {
        if (a[i] >= k || b[i] >= k) {
            throw AnomalyError{AnomalyErrc::kBadParam, "label outside [0, " + std::to_string(k) + ") at row " +
                                                           std::to_string(i)};
        }
        ++matrix.at(a[i], b[i]);
    }
    return agreement(matrix);
}

bool is_diagonal_dominant(const ConfusionMatrix& matrix) {
    for (std::size_t c{0}; c < matrix.size(); ++c) {
        const auto diag{matrix.at(c, c)};
        const auto row{matrix.row_sum(c)};
        const auto col{matrix.column_sum(c)};
        if (row > 0 && diag <= row - diag) return false;
        if (col > 0 && diag <= col - diag) return false;
    }
    return true;
}

double adjusted_rand_index(std::span<const std::size_t> a, std::span<const std::size_t> b) {
    check_lengths(a.size(), b.size());
    const auto n{static_cast<double>(a.size())};
    std::map<std::pair<std::size_t, std::size_t>, uint64_t> joint;
    std::map<std::size_t, uint64_t> left;
    std::map<std::size_t, uint64_t> right;
    for (std::size_t i{0}; i < a.size(); ++i) {
        ++joint[{a[i], b[i]}];
        ++left[a[i]];
        ++right[b[i]];
    }
    double index{0.0};
    for (const auto& [_, count] : joint) index += pairs(static_cast<double>(count));
    double sum_a{0.0};
    for (const auto& [_, count] : left) sum_a += pairs(static_cast<double>(count));
    double sum_b{0.0};
    for (const auto& [_, count] : right) sum_b += pairs(static_cast<double>(count));
    const double all{pairs(n)};
    if (all == 0.0) return 1.0;
    const double expected{sum_a * sum_b / all};
    const double maximum{(sum_a + sum_b) / 2.0};
    if (maximum == expected) return 1.0;
    return (index - expected) / (maximum - expected);
}

}  // namespace chainharvest::anomaly
