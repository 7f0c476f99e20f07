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

#include <chainharvest/anomaly/ocsvm.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "kernel.hpp"

namespace chainharvest::anomaly {

namespace {

    constexpr double kTau{1e-12};
    constexpr double kInf{std::numeric_limits<double>::infinity()};

    void validate(const Matrix& m, double nu, double gamma) {
        if (!(nu > 0.0 && nu <= 1.0)) {
            throw AnomalyError{AnomalyErrc::kBadParam, "nu must lie in (0, 1], got " + std::to_string(nu)};
        }
        if (!(gamma > 0.0) || !std::isfinite(gamma)) {
            throw AnomalyError{AnomalyErrc::kBadParam, "gamma must be positive, got " + std::to_string(gamma)};
        }
        if (m.rows() < 2) {
            throw AnomalyError{AnomalyErrc::kBadParam, "one-class SVM needs at least two rows"};
        }
        if (m.cols() == 0) {
            throw AnomalyError{AnomalyErrc::kBadParam, "one-class SVM needs at least one column"};
        }
    }

}  // namespace

double OcsvmModel::kernel(std::span<const double> a, std::span<const double> b) const {
    return detail::rbf(a, b, gamma);
}

double OcsvmModel::decision(std::span<const double> x) const {
    if (x.size() != dimension()) {
        throw AnomalyError{AnomalyErrc::kDimensionMismatch, "expected " + std::to_string(dimension()) +
                                                                " columns, got " + std::to_string(x.size())};
    }
    double sum{0.0};
    for (std::size_t s{0}; s < dual_coefficients.size(); ++s) {
        sum += dual_coefficients[s] * kernel(support_vectors.row(s), x);
    }
    return sum - rho;
}

std::size_t OcsvmPrediction::outlier_count() const {
    return static_cast<std::size_t>(std::count(outlier.begin(), outlier.end(), true));
}

OcsvmModel ocsvm_fit(const Matrix& m, const OcsvmParams& params) {
    const double gamma{params.gamma.value_or(m.cols() > 0 ? 1.0 / static_cast<double>(m.cols()) : 0.0)};
    validate(m, params.nu, gamma);
    const std::size_t n{m.rows()};
    const uint64_t max_passes{params.max_passes.value_or(std::max<uint64_t>(10'000'000, 100 * n))};

    // Dual in the scaled form: 0 <= a_i <= 1, sum a_i = nu n. Normalized at the end.
    const double total{params.nu * static_cast<double>(n)};
    std::vector<double> alpha(n, 0.0);
    const auto whole{static_cast<std::size_t>(std::floor(total))};
    std::fill_n(alpha.begin(), std::min(whole, n), 1.0);
    if (whole < n) {
        alpha[whole] = total - static_cast<double>(whole);
    }

    detail::GramRows gram{m, gamma};
    std::vector<double> grad(n, 0.0);
    for (std::size_t i{0}; i < n; ++i) {
        if (alpha[i] == 0.0) continue;
        const auto q{gram.row(i)};
        for (std::size_t t{0}; t < n; ++t) grad[t] += alpha[i] * q[t];
    }

    const double qd{gram.diagonal()};
    OcsvmModel model;
    model.converged = false;
    uint64_t iter{0};
    while (iter < max_passes) {
        // Maximal violating pair with second-order choice of the partner.
        std::size_t i{n};
        double gmax{-kInf};
        for (std::size_t t{0}; t < n; ++t) {
            if (alpha[t] < 1.0 && -grad[t] > gmax) {
                gmax = -grad[t];
                i = t;
            }
        }
        if (i == n) {
            model.converged = true;
            break;
        }
        const auto qi{gram.row(i, 0)};
        std::size_t j{n};
        double gmax2{-kInf};
        double best{kInf};
        for (std::size_t t{0}; t < n; ++t) {
            if (alpha[t] <= 0.0) continue;
            gmax2 = std::max(gmax2, grad[t]);
            const double diff{gmax + grad[t]};
            if (diff > 0.0) {
                double quad{qd + qd - 2.0 * qi[t]};
                if (quad <= 0.0) quad = kTau;
                const double gain{-(diff * diff) / quad};
                if (gain < best) {
                    best = gain;
                    j = t;
                }
            }
        }
        if (gmax + gmax2 < params.tolerance || j == n) {
            model.converged = true;
            break;
        }
        ++iter;

        const auto qj{gram.row(j, 1)};
        double quad{qd + qd - 2.0 * qi[j]};
        if (quad <= 0.0) quad = kTau;
        const double delta{(grad[i] - grad[j]) / quad};
        const double old_i{alpha[i]};
        const double old_j{alpha[j]};
        const double sum{old_i + old_j};
        double ai{old_i - delta};
        double aj{old_j + delta};
        if (sum > 1.0) {
            if (ai > 1.0) {
                ai = 1.0;
                aj = sum - 1.0;
            }
        } else if (aj < 0.0) {
            aj = 0.0;
            ai = sum;
        }
        if (sum > 1.0) {
            if (aj > 1.0) {
                aj = 1.0;
                ai = sum - 1.0;
            }
        } else if (ai < 0.0) {
            ai = 0.0;
            aj = sum;
        }
        alpha[i] = ai;
        alpha[j] = aj;
        const double di{ai - old_i};
        const double dj{aj - old_j};
        for (std::size_t t{0}; t < n; ++t) grad[t] += qi[t] * di + qj[t] * dj;
    }

    model.nu = params.nu;
    model.gamma = gamma;
    model.tolerance = params.tolerance;
    model.max_passes = max_passes;
    model.seed = params.seed;
    model.training_rows = n;
    model.iterations = iter;

    std::vector<std::size_t> support;
    for (std::size_t t{0}; t < n; ++t) {
        if (alpha[t] > 0.0) support.push_back(t);
    }
    model.support_vectors = m.select_rows(support);
    model.dual_coefficients.reserve(support.size());
    for (const auto t : support) model.dual_coefficients.push_back(alpha[t] / total);

    // The offset comes from the kernel sums under the normalized coefficients, evaluated the
    // same way prediction evaluates them, so points on the boundary get exactly zero.
    double lb{-kInf};
    double ub{kInf};
    double free_sum{0.0};
    double free_lo{kInf};
    double free_hi{-kInf};
    std::size_t free_count{0};
    for (std::size_t t{0}; t < n; ++t) {
        const double g{model.decision(m.row(t))};
        if (alpha[t] >= 1.0) {
            lb = std::max(lb, g);
        } else if (alpha[t] <= 0.0) {
            ub = std::min(ub, g);
        } else {
            free_sum += g;
            free_lo = std::min(free_lo, g);
            free_hi = std::max(free_hi, g);
            ++free_count;
        }
    }
    if (free_count > 0) {
        model.rho = std::clamp(free_sum / static_cast<double>(free_count), free_lo, free_hi);
    } else if (!std::isfinite(ub)) {
        model.rho = lb;
    } else if (!std::isfinite(lb)) {
        model.rho = ub;
    } else {
        model.rho = (ub + lb) / 2.0;
    }
    return model;
}

OcsvmPrediction ocsvm_predict(const OcsvmModel& model, const Matrix& rows) {
    if (rows.rows() > 0 && rows.cols() != model.dimension()) {
        throw AnomalyError{AnomalyErrc::kDimensionMismatch, "expected " + std::to_string(model.dimension()) +
                                                                " columns, got " + std::to_string(rows.cols())};
    }
    OcsvmPrediction out;
    out.outlier.reserve(rows.rows());
    out.decision.reserve(rows.rows());
    for (std::size_t r{0}; r < rows.rows(); ++r) {
        const double f{model.decision(rows.row(r))};
        out.decision.push_back(f);
        out.outlier.push_back(f < 0.0);
    }
    return out;
}

}  // namespace chainharvest::anomaly
