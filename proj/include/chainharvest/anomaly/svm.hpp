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
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <chainharvest/anomaly/error.hpp>
#include <chainharvest/anomaly/evaluation.hpp>
#include <chainharvest/common/matrix.hpp>

namespace chainharvest::anomaly {

enum class SvmKernel {
    kLinear,
    kRbf,
};

std::string_view to_string(SvmKernel kernel);
//! Throws AnomalyError{kBadParam}.
SvmKernel svm_kernel_from_string(std::string_view name);

struct SvmParams {
    double c{1.0};
    SvmKernel kernel{SvmKernel::kLinear};
    std::optional<double> gamma;  // RBF only; unset selects 1 / column count
    uint64_t seed{42};
    double split{0.8};
    double tolerance{1e-4};
    std::size_t max_passes{20000};
};

//! One binary machine of a one-vs-rest ensemble. The linear form keeps an explicit weight
//! vector with the bias as its last entry; the RBF form keeps its support set.
struct BinarySvm {
    std::size_t label{0};
    std::vector<double> weights;      // linear: dimension + 1
    Matrix support_vectors;           // rbf
    std::vector<double> coefficients; // rbf: alpha_i * y_i
    //! Dual variables over the training rows, kept for diagnostics.
    std::vector<double> alpha;
    std::size_t passes{0};
    bool converged{true};
};

struct SvmModel {
    SvmKernel kernel{SvmKernel::kLinear};
    double c{1.0};
    double gamma{0.0};
    std::size_t dimension{0};
    std::size_t label_count{0};  // labels live in [0, label_count)
    std::vector<BinarySvm> machines;  // one per label present in training, ascending

    //! Per-machine scores in machine order. Throws AnomalyError{kDimensionMismatch}.
    [[nodiscard]] std::vector<double> scores(std::span<const double> x) const;
    //! Argmax of the scores, ties to the lowest label.
    [[nodiscard]] std::size_t predict(std::span<const double> x) const;
    [[nodiscard]] std::vector<std::size_t> predict(const Matrix& rows) const;
};

struct Split {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

//! Per-label shuffle, then round(split * n) of each label into training, clamped so every
//! label with two or more rows lands on both sides. Singletons train.
//! Throws AnomalyError{kBadSplit} for split outside (0,1) or an empty test side.
Split stratified_split(std::span<const std::size_t> labels, double split, uint64_t seed);

//! Trains on all given rows. Throws AnomalyError{kSingleClass}, kLengthMismatch, kBadParam.
SvmModel svm_train(const Matrix& m, std::span<const std::size_t> labels, const SvmParams& params = {});

struct SvmFit {
    SvmModel model;
    Split split;
    //! Held-out rows: SVM prediction on the row axis, given label on the column axis.
    ConfusionMatrix confusion;
};

SvmFit svm_fit(const Matrix& m, std::span<const std::size_t> labels, const SvmParams& params = {});

//! Row indices whose prediction differs from the dominant label, ascending.
std::vector<std::size_t> svm_outliers(const SvmModel& model, const Matrix& m, std::size_t dominant);

}  // namespace chainharvest::anomaly
