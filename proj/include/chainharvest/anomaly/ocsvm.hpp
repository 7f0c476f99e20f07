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
#include <vector>

#include <chainharvest/anomaly/error.hpp>
#include <chainharvest/common/matrix.hpp>

namespace chainharvest::anomaly {

struct OcsvmParams {
    double nu{0.01};
    std::optional<double> gamma;  // unset selects 1 / column count
    double tolerance{1e-4};
    std::optional<uint64_t> max_passes;  // unset selects max(1e7, 100 n)
    uint64_t seed{42};       // recorded only; the solver is deterministic
};

//! RBF one-class SVM. Coefficients are normalized so they sum to one and each
//! lies in [0, 1/(nu n)]; f(x) = sum_i a_i K(sv_i, x) - rho.
struct OcsvmModel {
    double nu{0.0};
    double gamma{0.0};
    double tolerance{0.0};
    uint64_t max_passes{0};
    uint64_t seed{0};
    std::size_t training_rows{0};
    Matrix support_vectors;
    std::vector<double> dual_coefficients;
    double rho{0.0};
    uint64_t iterations{0};
    bool converged{true};

    [[nodiscard]] std::size_t dimension() const noexcept { return support_vectors.cols(); }
    [[nodiscard]] double kernel(std::span<const double> a, std::span<const double> b) const;
    //! Throws AnomalyError{kDimensionMismatch}.
    [[nodiscard]] double decision(std::span<const double> x) const;
};

struct OcsvmPrediction {
    std::vector<bool> outlier;
    std::vector<double> decision;

    [[nodiscard]] std::size_t outlier_count() const;
};

//! Throws AnomalyError{kBadParam} for nu outside (0,1], gamma <= 0 or fewer than two rows.
//! Hitting max_passes returns the current iterate with converged = false.
OcsvmModel ocsvm_fit(const Matrix& m, const OcsvmParams& params = {});

//! Outlier iff decision < 0. Throws AnomalyError{kDimensionMismatch}.
OcsvmPrediction ocsvm_predict(const OcsvmModel& model, const Matrix& rows);

}  // namespace chainharvest::anomaly
