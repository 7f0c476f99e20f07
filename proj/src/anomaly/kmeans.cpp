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

#include <chainharvest/anomaly/kmeans.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <chainharvest/common/random.hpp>

namespace chainharvest::anomaly {

namespace {

    struct Nearest {
        std::size_t index{0};
        double distance{0.0};
    };

    Nearest nearest(const Matrix& centers, std::span<const double> x) {
        Nearest best{0, std::numeric_limits<double>::infinity()};
        for (std::size_t c{0}; c < centers.rows(); ++c) {
            const double d{squared_distance(centers.row(c), x)};
            if (d < best.distance) best = {c, d};
        }
        return best;
    }

    // Draws an index with probability proportional to weight. Rounding that leaves the target
    // past the running sum falls back to the last positive weight.
    std::size_t draw_weighted(std::span<const double> weight, double total, Rng& rng) {
        const double target{rng.uniform() * total};
        double running{0.0};
        for (std::size_t r{0}; r < weight.size(); ++r) {
            running += weight[r];
            if (weight[r] > 0.0 && running > target) return r;
        }
        for (std::size_t r{weight.size()}; r-- > 0;) {
            if (weight[r] > 0.0) return r;
        }
        return rng.index(weight.size());
    }

    // Greedy D-squared seeding: each new center is the best of a few weighted candidates by
    // resulting potential. Zero total mass falls back to a uniform pick.
    Matrix plus_plus(const Matrix& m, std::size_t k, Rng& rng) {
        const std::size_t n{m.rows()};
        const std::size_t trials{2 + static_cast<std::size_t>(std::log(static_cast<double>(k)))};
        Matrix centers{k, m.cols()};
        auto place = [&](std::size_t c, std::size_t r) {
            const auto src{m.row(r)};
            std::copy(src.begin(), src.end(), centers.row(c).begin());
        };
        place(0, rng.index(n));
        std::vector<double> dist(n);
        for (std::size_t r{0}; r < n; ++r) dist[r] = squared_distance(m.row(r), centers.row(0));
        std::vector<double> candidate(n);
        std::vector<double> best_dist(n);
        for (std::size_t c{1}; c < k; ++c) {
            double total{0.0};
            for (const double d : dist) total += d;
            if (!(total > 0.0)) {
                place(c, rng.index(n));
                continue;
            }
            std::size_t best{n};
            double best_potential{std::numeric_limits<double>::infinity()};
            for (std::size_t t{0}; t < trials; ++t) {
                const auto pick{draw_weighted(dist, total, rng)};
                double potential{0.0};
                for (std::size_t r{0}; r < n; ++r) {
                    candidate[r] = std::min(dist[r], squared_distance(m.row(r), m.row(pick)));
                    potential += candidate[r];
                }
                if (potential < best_potential) {
                    best_potential = potential;
                    best = pick;
                    best_dist.swap(candidate);
                }
            }
            place(c, best);
            dist.swap(best_dist);
        }
        return centers;
    }

    double assign(const Matrix& m, const Matrix& centers, std::vector<std::size_t>& labels,
                  std::vector<double>& distances) {
        double inertia{0.0};
        for (std::size_t r{0}; r < m.rows(); ++r) {
            const auto hit{nearest(centers, m.row(r))};
            labels[r] = hit.index;
            distances[r] = hit.distance;
            inertia += hit.distance;
        }
        return inertia;
    }

}  // namespace

std::size_t KMeansModel::predict(std::span<const double> x) const {
    if (x.size() != centers.cols()) {
        throw AnomalyError{AnomalyErrc::kDimensionMismatch, "expected " + std::to_string(centers.cols()) +
                                                                " columns, got " + std::to_string(x.size())};
    }
    return nearest(centers, x).index;
}

std::vector<std::size_t> KMeansModel::predict(const Matrix& rows) const {
    std::vector<std::size_t> out;
    out.reserve(rows.rows());
    for (std::size_t r{0}; r < rows.rows(); ++r) out.push_back(predict(rows.row(r)));
    return out;
}

std::vector<std::size_t> KMeansModel::cluster_sizes() const {
    std::vector<std::size_t> sizes(k, 0);
    for (const auto a : assignments) ++sizes[a];
    return sizes;
}

std::size_t KMeansModel::dominant_cluster() const {
    const auto sizes{cluster_sizes()};
    return static_cast<std::size_t>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
}

namespace {

    KMeansModel lloyd(const Matrix& m, const KMeansParams& params, Rng& rng) {
        const std::size_t n{m.rows()};
        const std::size_t k{params.k};
        const std::size_t dims{m.cols()};

        KMeansModel model;
        model.k = k;
        model.seed = params.seed;
        model.centers = plus_plus(m, k, rng);
        model.assignments.assign(n, 0);
        std::vector<double> distances(n, 0.0);

        for (std::size_t iter{0}; iter < params.max_iter; ++iter) {
            model.inertia_history.push_back(assign(m, model.centers, model.assignments, distances));
            model.iterations = iter + 1;

            Matrix next{k, dims};
            std::vector<std::size_t> counts(k, 0);
            for (std::size_t r{0}; r < n; ++r) {
                const auto c{model.assignments[r]};
                ++counts[c];
                auto dst{next.row(c)};
                const auto src{m.row(r)};
                for (std::size_t d{0}; d < dims; ++d) dst[d] += src[d];
            }
            std::vector<bool> taken(n, false);
            for (std::size_t c{0}; c < k; ++c) {
                if (counts[c] > 0) {
                    for (auto& v : next.row(c)) v /= static_cast<double>(counts[c]);
                    continue;
                }
                // Empty cluster: move it onto the point worst served by its center.
                std::size_t far{n};
                for (std::size_t r{0}; r < n; ++r) {
                    if (taken[r]) continue;
                    if (far == n || distances[r] > distances[far]) far = r;
                }
                taken[far] = true;
                distances[far] = 0.0;
                const auto src{m.row(far)};
                std::copy(src.begin(), src.end(), next.row(c).begin());
            }

            double shift{0.0};
            for (std::size_t c{0}; c < k; ++c) {
                shift = std::max(shift, std::sqrt(squared_distance(next.row(c), model.centers.row(c))));
            }
            model.centers = std::move(next);
            if (shift < params.tol) {
                model.converged = true;
                break;
            }
        }
        model.inertia = assign(m, model.centers, model.assignments, distances);
        return model;
    }

}  // namespace

KMeansModel kmeans_fit(const Matrix& m, const KMeansParams& params) {
    if (params.k < 1 || params.k > m.rows()) {
        throw AnomalyError{AnomalyErrc::kBadK, "k must lie in [1, " + std::to_string(m.rows()) + "], got " +
                                                   std::to_string(params.k)};
    }
    if (!(params.tol >= 0.0)) {
        throw AnomalyError{AnomalyErrc::kBadParam, "tolerance must be non-negative"};
    }
    if (params.n_init < 1) {
        throw AnomalyError{AnomalyErrc::kBadParam, "n_init must be at least 1"};
    }
    Rng rng{params.seed};
    KMeansModel best{lloyd(m, params, rng)};
    for (std::size_t run{1}; run < params.n_init; ++run) {
        auto model{lloyd(m, params, rng)};
        if (model.inertia < best.inertia) best = std::move(model);
    }
    return best;
}

std::vector<std::size_t> kmeans_outliers(const KMeansModel& model) {
    if (model.assignments.empty()) return {};
    const auto normal{model.dominant_cluster()};
    std::vector<std::size_t> out;
    for (std::size_t r{0}; r < model.assignments.size(); ++r) {
        if (model.assignments[r] != normal) out.push_back(r);
    }
    return out;
}

}  // namespace chainharvest::anomaly
