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
#include <span>
#include <stdexcept>
#include <vector>

namespace chainharvest {

//! Dense row-major matrix of doubles.
class Matrix {
  public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0) : rows_{rows}, cols_{cols}, data_(rows * cols, fill) {}

    static Matrix from_rows(const std::vector<std::vector<double>>& rows) {
        Matrix m{rows.size(), rows.empty() ? 0 : rows.front().size()};
        for (std::size_t r{0}; r < rows.size(); ++r) {
            if (rows[r].size() != m.cols_) {
                throw std::invalid_argument{"ragged matrix rows"};
            }
            std::copy(rows[r].begin(), rows[r].end(), m.data_.begin() + static_cast<std::ptrdiff_t>(r * m.cols_));
        }
        return m;
    }

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    [[nodiscard]] std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    [[nodiscard]] std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    //! Rows at the given indices, in that order.
    [[nodiscard]] Matrix select_rows(std::span<const std::size_t> indices) const {
        Matrix out{indices.size(), cols_};
        for (std::size_t i{0}; i < indices.size(); ++i) {
            const auto src{row(indices[i])};
            std::copy(src.begin(), src.end(), out.row(i).begin());
        }
        return out;
    }

    friend bool operator==(const Matrix&, const Matrix&) = default;

  private:
    std::size_t rows_{0};
    std::size_t cols_{0};
    std::vector<double> data_;
};

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
    double sum{0.0};
    for (std::size_t i{0}; i < a.size(); ++i) {
        const double d{a[i] - b[i]};
        sum += d * d;
    }
    return sum;
}

}  // namespace chainharvest
