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

#include <chainharvest/anomaly/svm.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>

#include <chainharvest/common/random.hpp>

#include "kernel.hpp"

namespace chainharvest::anomaly {

namespace {

    constexpr double kRbfOffset{1.0};  // absorbs the bias into the kernel

    double dot_augmented(std::span<const double> w, std::span<const double> x) {
        double sum{w[x.size()]};
        for (std::size_t d{0}; d < x.size(); ++d) sum += w[d] * x[d];
        return sum;
    }

    double projected(double g, double a, double c) {
        if (a <= 0.0) return std::min(g, 0.0);
        if (a >= c) return std::max(g, 0.0);
        return g;
    }

    // Dual coordinate descent for the hinge-loss linear SVM with an augmented bias feature.
    BinarySvm train_linear(const Matrix& m, std::span<const double> y, const SvmParams& params, Rng& rng) {
        const std::size_t n{m.rows()};
        const std::size_t dims{m.cols()};
        BinarySvm out;
        out.weights.assign(dims + 1, 0.0);
        out.alpha.assign(n, 0.0);
        out.converged = false;

        std::vector<double> qd(n);
        for (std::size_t i{0}; i < n; ++i) {
            const auto x{m.row(i)};
            qd[i] = std::inner_product(x.begin(), x.end(), x.begin(), 1.0);
        }
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), std::size_t{0});

        auto& w{out.weights};
        for (std::size_t pass{0}; pass < params.max_passes; ++pass) {
            rng.shuffle(order);
            double worst{0.0};
            for (const auto i : order) {
                const auto x{m.row(i)};
                const double g{y[i] * dot_augmented(w, x) - 1.0};
                const double pg{projected(g, out.alpha[i], params.c)};
                worst = std::max(worst, std::abs(pg));
                if (pg == 0.0) continue;
                const double old{out.alpha[i]};
                const double next{std::clamp(old - g / qd[i], 0.0, params.c)};
                const double step{(next - old) * y[i]};
                out.alpha[i] = next;
                for (std::size_t d{0}; d < dims; ++d) w[d] += step * x[d];
                w[dims] += step;
            }
            out.passes = pass + 1;
            if (worst < params.tolerance) {
                out.converged = true;
                break;
            }
        }
        return out;
    }

    // Same solver over the kernel K + 1; scores are maintained instead of a weight vector.
    BinarySvm train_rbf(const Matrix& m, std::span<const double> y, const SvmParams& params, detail::GramRows& gram,
                        Rng& rng) {
        const std::size_t n{m.rows()};
        BinarySvm out;
        out.alpha.assign(n, 0.0);
        out.converged = false;
        std::vector<double> f(n, 0.0);
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), std::size_t{0});
        const double qd{gram.diagonal()};

        for (std::size_t pass{0}; pass < params.max_passes; ++pass) {
            rng.shuffle(order);
            double worst{0.0};
            for (const auto i : order) {
                const double g{y[i] * f[i] - 1.0};
                const double pg{projected(g, out.alpha[i], params.c)};
                worst = std::max(worst, std::abs(pg));
                if (pg == 0.0) continue;
                const double old{out.alpha[i]};
                const double next{std::clamp(old - g / qd, 0.0, params.c)};
                const double step{(next - old) * y[i]};
                out.alpha[i] = next;
                const auto q{gram.row(i)};
                for (std::size_t t{0}; t < n; ++t) f[t] += step * q[t];
            }
            out.passes = pass + 1;
            if (worst < params.tolerance) {
                out.converged = true;
                break;
            }
        }
        std::vector<std::size_t> support;
        for (std::size_t i{0}; i < n; ++i) {
            if (out.alpha[i] > 0.0) {
                support.push_back(i);
                out.coefficients.push_back(out.alpha[i] * y[i]);
            }
        }
        out.support_vectors = m.select_rows(support);
        return out;
    }

    void check_dimension(std::size_t expected, std::size_t got) {
        if (expected != got) {
            throw AnomalyError{AnomalyErrc::kDimensionMismatch,
                               "expected " + std::to_string(expected) + " columns, got " + std::to_string(got)};
        }
    }

}  // namespace

std::string_view to_string(SvmKernel kernel) {
    return kernel == SvmKernel::kLinear ? "linear" : "rbf";
}

SvmKernel svm_kernel_from_string(std::string_view name) {
    if (name == "linear") return SvmKernel::kLinear;
    if (name == "rbf") return SvmKernel::kRbf;
    throw AnomalyError{AnomalyErrc::kBadParam, "unknown kernel '" + std::string{name} + "'"};
}

std::vector<double> SvmModel::scores(std::span<const double> x) const {
    check_dimension(dimension, x.size());
    std::vector<double> out;
    out.reserve(machines.size());
    for (const auto& machine : machines) {
        if (kernel == SvmKernel::kLinear) {
            out.push_back(dot_augmented(machine.weights, x));
            continue;
        }
        double sum{0.0};
        for (std::size_t s{0}; s < machine.coefficients.size(); ++s) {
            sum += machine.coefficients[s] * (detail::rbf(machine.support_vectors.row(s), x, gamma) + kRbfOffset);
        }
        out.push_back(sum);
    }
    return out;
}

std::size_t SvmModel::predict(std::span<const double> x) const {
    const auto s{scores(x)};
    std::size_t best{0};
    for (std::size_t i{1}; i < s.size(); ++i) {
        if (s[i] > s[best]) best = i;
    }
    return machines.at(best).label;
}

std::vector<std::size_t> SvmModel::predict(const Matrix& rows) const {
    if (rows.rows() > 0) check_dimension(dimension, rows.cols());
    std::vector<std::size_t> out;
    out.reserve(rows.rows());
    for (std::size_t r{0}; r < rows.rows(); ++r) out.push_back(predict(rows.row(r)));
    return out;
}

Split stratified_split(std::span<const std::size_t> labels, double split, uint64_t seed) {
    if (!(split > 0.0 && split < 1.0)) {
        throw AnomalyError{AnomalyErrc::kBadSplit, "train fraction must lie in (0, 1), got " + std::to_string(split)};
    }
    std::size_t label_count{0};
    for (const auto l : labels) label_count = std::max(label_count, l + 1);
    std::vector<std::vector<std::size_t>> members(label_count);
    for (std::size_t r{0}; r < labels.size(); ++r) members[labels[r]].push_back(r);

    Rng rng{seed};
    Split out;
    for (auto& group : members) {
        if (group.empty()) continue;
        rng.shuffle(group);
        std::size_t train{group.size()};
        if (group.size() >= 2) {
            const auto wanted{static_cast<std::size_t>(std::llround(split * static_cast<double>(group.size())))};
            train = std::clamp<std::size_t>(wanted, 1, group.size() - 1);
        }
        out.train.insert(out.train.end(), group.begin(), group.begin() + static_cast<std::ptrdiff_t>(train));
        out.test.insert(out.test.end(), group.begin() + static_cast<std::ptrdiff_t>(train), group.end());
    }
    if (out.test.empty()) {
        throw AnomalyError{AnomalyErrc::kBadSplit, "held-out partition is empty"};
    }
    std::sort(out.train.begin(), out.train.end());
    std::sort(out.test.begin(), out.test.end());
    return out;
}

SvmModel svm_train(const Matrix& m, std::span<const std::size_t> labels, const SvmParams& params) {
    if (labels.size() != m.rows()) {
        throw AnomalyError{AnomalyErrc::kLengthMismatch, std::to_string(labels.size()) + " labels for " +
                                                             std::to_string(m.rows()) + " rows"};
    }
    if (!(params.c > 0.0) || !std::isfinite(params.c)) {
        throw AnomalyError{AnomalyErrc::kBadParam, "C must be positive"};
    }
    if (!(params.tolerance > 0.0)) {
        throw AnomalyError{AnomalyErrc::kBadParam, "tolerance must be positive"};
    }
    const double gamma{params.gamma.value_or(m.cols() > 0 ? 1.0 / static_cast<double>(m.cols()) : 1.0)};
    if (params.kernel == SvmKernel::kRbf && !(gamma > 0.0 && std::isfinite(gamma))) {
        throw AnomalyError{AnomalyErrc::kBadParam, "gamma must be positive"};
    }

    SvmModel model;
    model.kernel = params.kernel;
    model.c = params.c;
    model.gamma = params.kernel == SvmKernel::kRbf ? gamma : 0.0;
    model.dimension = m.cols();
    for (const auto l : labels) model.label_count = std::max(model.label_count, l + 1);
    std::vector<bool> present(model.label_count, false);
    for (const auto l : labels) present[l] = true;
    if (std::count(present.begin(), present.end(), true) < 2) {
        throw AnomalyError{AnomalyErrc::kSingleClass, "training labels contain fewer than two classes"};
    }

    Rng rng{params.seed};
    std::optional<detail::GramRows> gram;
    if (params.kernel == SvmKernel::kRbf) gram.emplace(m, gamma, kRbfOffset);
    std::vector<double> y(m.rows());
    for (std::size_t label{0}; label < model.label_count; ++label) {
        if (!present[label]) continue;
        for (std::size_t r{0}; r < m.rows(); ++r) y[r] = labels[r] == label ? 1.0 : -1.0;
        auto machine{params.kernel == SvmKernel::kLinear ? train_linear(m, y, params, rng)
                                                        : train_rbf(m, y, params, *gram, rng)};
        machine.label = label;
        model.machines.push_back(std::move(machine));
    }
    return model;
}

SvmFit svm_fit(const Matrix& m, std::span<const std::size_t> labels, const SvmParams& params) {
    if (labels.size() != m.rows()) {
        throw AnomalyError{AnomalyErrc::kLengthMismatch, std::to_string(labels.size()) + " labels for " +
                                                             std::to_string(m.rows()) + " rows"};
    }
    std::vector<std::size_t> distinct{labels.begin(), labels.end()};
    std::sort(distinct.begin(), distinct.end());
    if (std::unique(distinct.begin(), distinct.end()) - distinct.begin() < 2) {
        throw AnomalyError{AnomalyErrc::kSingleClass, "labels contain fewer than two classes"};
    }
    SvmFit fit;
    fit.split = stratified_split(labels, params.split, params.seed);

    std::vector<std::size_t> train_labels;
    for (const auto r : fit.split.train) train_labels.push_back(labels[r]);
    fit.model = svm_train(m.select_rows(fit.split.train), train_labels, params);

    const std::size_t k{std::max(fit.model.label_count, distinct.back() + 1)};
    fit.confusion = ConfusionMatrix{k};
    for (const auto r : fit.split.test) {
        ++fit.confusion.at(fit.model.predict(m.row(r)), labels[r]);
    }
    return fit;
}

std::vector<std::size_t> svm_outliers(const SvmModel& model, const Matrix& m, std::size_t dominant) {
    std::vector<std::size_t> out;
    const auto predicted{model.predict(m)};
    for (std::size_t r{0}; r < predicted.size(); ++r) {
        if (predicted[r] != dominant) out.push_back(r);
    }
    return out;
}

}  // namespace chainharvest::anomaly
