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

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include <chainharvest/common/matrix.hpp>

namespace chainharvest::anomaly::detail {

inline double rbf(std::span<const double> a, std::span<const double> b, double gamma) {
    return std::exp(-gamma * squared_distance(a, b));
}

//! RBF Gram rows over a training matrix, plus a constant offset. Small problems keep the
//! whole matrix; larger ones recompute a row on request.
class GramRows {
  public:
    static constexpr std::size_t kCacheLimit{4096};

    GramRows(const Matrix& m, double gamma, double offset = 0.0) : m_{m}, gamma_{gamma}, offset_{offset} {
        const std::size_t n{m.rows()};
        cached_ = n <= kCacheLimit;
        if (cached_) {
            full_.resize(n * n);
            for (std::size_t i{0}; i < n; ++i) {
                full_[i * n + i] = 1.0 + offset_;
                for (std::size_t j{i + 1}; j < n; ++j) {
                    const double v{rbf(m.row(i), m.row(j), gamma_) + offset_};
                    full_[i * n + j] = v;
                    full_[j * n + i] = v;
                }
            }
        } else {
            scratch_[0].resize(n);
            scratch_[1].resize(n);
        }
    }

    [[nodiscard]] double diagonal() const { return 1.0 + offset_; }

    //! Row i; slot picks which scratch buffer to use when rows are recomputed.
    std::span<const double> row(std::size_t i, int slot = 0) {
        const std::size_t n{m_.rows()};
        if (cached_) {
            return {full_.data() + i * n, n};
        }
        auto& buf{scratch_[slot]};
        for (std::size_t j{0}; j < n; ++j) {
            buf[j] = j == i ? 1.0 + offset_ : rbf(m_.row(i), m_.row(j), gamma_) + offset_;
        }
        return buf;
    }

  private:
    const Matrix& m_;
    double gamma_;
    double offset_;
    bool cached_{false};
    std::vector<double> full_;
    std::vector<double> scratch_[2];
};

}  // namespace chainharvest::anomaly::detail
