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

#include <chainharvest/anomaly/serialize.hpp>

#include <string>

#include <chainharvest/common/format.hpp>

namespace chainharvest::anomaly {

using nlohmann::json;

namespace {

    constexpr const char* kOcsvmFormat{"chainharvest-ocsvm/1"};
    constexpr const char* kKMeansFormat{"chainharvest-kmeans/1"};
    constexpr const char* kSvmFormat{"chainharvest-svm/1"};

    [[noreturn]] void malformed(const std::string& what) {
        throw AnomalyError{AnomalyErrc::kMalformedModel, "malformed model document: " + what};
    }

    json real(double v) { return format_double(v); }

    json reals(std::span<const double> values) {
        json out = json::array();
        for (const double v : values) out.push_back(real(v));
        return out;
    }

    json rows(const Matrix& m) {
        json out = json::array();
        for (std::size_t r{0}; r < m.rows(); ++r) out.push_back(reals(m.row(r)));
        return out;
    }

    const json& field(const json& doc, const char* key) {
        if (!doc.is_object() || !doc.contains(key)) malformed(std::string{"missing '"} + key + "'");
        return doc.at(key);
    }

    double read_real(const json& v) {
        if (v.is_string()) {
            try {
                return parse_double(v.get<std::string>());
            } catch (const std::invalid_argument& e) {
                malformed(e.what());
            }
        }
        if (v.is_number()) return v.get<double>();
        malformed("expected a decimal string");
    }

    template <class T>
    T read_int(const json& v) {
        if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<int64_t>() < 0)) {
            malformed("expected a non-negative integer");
        }
        return v.get<T>();
    }

    std::vector<double> read_reals(const json& v) {
        if (!v.is_array()) malformed("expected an array");
        std::vector<double> out;
        out.reserve(v.size());
        for (const auto& x : v) out.push_back(read_real(x));
        return out;
    }

    Matrix read_rows(const json& v, std::size_t cols) {
        if (!v.is_array()) malformed("expected an array of rows");
        Matrix out{v.size(), cols};
        for (std::size_t r{0}; r < v.size(); ++r) {
            const auto row{read_reals(v[r])};
            if (row.size() != cols) malformed("row " + std::to_string(r) + " has " + std::to_string(row.size()) +
                                              " entries, expected " + std::to_string(cols));
            std::copy(row.begin(), row.end(), out.row(r).begin());
        }
        return out;
    }

    void expect_format(const json& doc, const char* format) {
        const auto& f{field(doc, "format")};
        if (!f.is_string() || f.get<std::string>() != format) malformed(std::string{"expected format "} + format);
    }

    bool read_bool(const json& v) {
        if (!v.is_boolean()) malformed("expected a boolean");
        return v.get<bool>();
    }

}  // namespace

json to_json(const OcsvmModel& model) {
    json doc = json::object();
    doc["format"] = kOcsvmFormat;
    doc["kernel"] = "rbf";
    doc["nu"] = real(model.nu);
    doc["gamma"] = real(model.gamma);
    doc["tolerance"] = real(model.tolerance);
    doc["max_passes"] = model.max_passes;
    doc["seed"] = model.seed;
    doc["training_rows"] = model.training_rows;
    doc["dimension"] = model.dimension();
    doc["iterations"] = model.iterations;
    doc["converged"] = model.converged;
    doc["rho"] = real(model.rho);
    doc["dual_coefficients"] = reals(model.dual_coefficients);
    doc["support_vectors"] = rows(model.support_vectors);
    return doc;
}

OcsvmModel ocsvm_from_json(const json& doc) {
    expect_format(doc, kOcsvmFormat);
    OcsvmModel model;
    model.nu = read_real(field(doc, "nu"));
    model.gamma = read_real(field(doc, "gamma"));
    model.tolerance = read_real(field(doc, "tolerance"));
    model.max_passes = read_int<uint64_t>(field(doc, "max_passes"));
    model.seed = read_int<uint64_t>(field(doc, "seed"));
    model.training_rows = read_int<std::size_t>(field(doc, "training_rows"));
    model.iterations = read_int<uint64_t>(field(doc, "iterations"));
    model.converged = read_bool(field(doc, "converged"));
    model.rho = read_real(field(doc, "rho"));
    model.dual_coefficients = read_reals(field(doc, "dual_coefficients"));
    model.support_vectors = read_rows(field(doc, "support_vectors"), read_int<std::size_t>(field(doc, "dimension")));
    if (model.support_vectors.rows() != model.dual_coefficients.size()) {
        malformed("support vector and coefficient counts differ");
    }
    if (!(model.nu > 0.0 && model.nu <= 1.0) || !(model.gamma > 0.0)) malformed("parameters out of range");
    return model;
}

json to_json(const KMeansModel& model) {
    json doc = json::object();
    doc["format"] = kKMeansFormat;
    doc["k"] = model.k;
    doc["seed"] = model.seed;
    doc["dimension"] = model.centers.cols();
    doc["iterations"] = model.iterations;
    doc["converged"] = model.converged;
    doc["inertia"] = real(model.inertia);
    doc["inertia_history"] = reals(model.inertia_history);
    doc["centers"] = rows(model.centers);
    doc["assignments"] = model.assignments;
    return doc;
}

KMeansModel kmeans_from_json(const json& doc) {
    expect_format(doc, kKMeansFormat);
    KMeansModel model;
    model.k = read_int<std::size_t>(field(doc, "k"));
    model.seed = read_int<uint64_t>(field(doc, "seed"));
    model.iterations = read_int<std::size_t>(field(doc, "iterations"));
    model.converged = read_bool(field(doc, "converged"));
    model.inertia = read_real(field(doc, "inertia"));
    model.inertia_history = read_reals(field(doc, "inertia_history"));
    model.centers = read_rows(field(doc, "centers"), read_int<std::size_t>(field(doc, "dimension")));
    if (model.centers.rows() != model.k || model.k == 0) malformed("center count differs from k");
    const auto& assignments{field(doc, "assignments")};
    if (!assignments.is_array()) malformed("assignments must be an array");
    for (const auto& a : assignments) {
        const auto c{read_int<std::size_t>(a)};
        if (c >= model.k) malformed("assignment outside [0, k)");
        model.assignments.push_back(c);
    }
    return model;
}

json to_json(const SvmModel& model) {
    json doc = json::object();
    doc["format"] = kSvmFormat;
    doc["kernel"] = std::string{to_string(model.kernel)};
    doc["strategy"] = "one-vs-rest";
    doc["c"] = real(model.c);
    doc["gamma"] = real(model.gamma);
    doc["dimension"] = model.dimension;
    doc["label_count"] = model.label_count;
    json machines = json::array();
    for (const auto& m : model.machines) {
        json entry = json::object();
        entry["label"] = m.label;
        entry["passes"] = m.passes;
        entry["converged"] = m.converged;
        if (model.kernel == SvmKernel::kLinear) {
            entry["weights"] = reals(m.weights);
        } else {
            entry["coefficients"] = reals(m.coefficients);
            entry["support_vectors"] = rows(m.support_vectors);
        }
        machines.push_back(std::move(entry));
    }
    doc["machines"] = std::move(machines);
    return doc;
}

SvmModel svm_from_json(const json& doc) {
    expect_format(doc, kSvmFormat);
    SvmModel model;
    const auto& kernel{field(doc, "kernel")};
    if (!kernel.is_string()) malformed("kernel must be a string");
    try {
        model.kernel = svm_kernel_from_string(kernel.get<std::string>());
    } catch (const AnomalyError& e) {
        malformed(e.what());
    }
    model.c = read_real(field(doc, "c"));
    model.gamma = read_real(field(doc, "gamma"));
    model.dimension = read_int<std::size_t>(field(doc, "dimension"));
    model.label_count = read_int<std::size_t>(field(doc, "label_count"));
    const auto& machines{field(doc, "machines")};
    if (!machines.is_array() || machines.empty()) malformed("machines must be a non-empty array");
    for (const auto& entry : machines) {
        BinarySvm m;
        m.label = read_int<std::size_t>(field(entry, "label"));
        if (m.label >= model.label_count) malformed("machine label outside [0, label_count)");
        m.passes = read_int<std::size_t>(field(entry, "passes"));
        m.converged = read_bool(field(entry, "converged"));
        if (model.kernel == SvmKernel::kLinear) {
            m.weights = read_reals(field(entry, "weights"));
            if (m.weights.size() != model.dimension + 1) malformed("weight vector length");
        } else {
            m.coefficients = read_reals(field(entry, "coefficients"));
            m.support_vectors = read_rows(field(entry, "support_vectors"), model.dimension);
            if (m.support_vectors.rows() != m.coefficients.size()) malformed("support set size");
        }
        model.machines.push_back(std::move(m));
    }
    return model;
}

json to_json(const ConfusionMatrix& matrix) {
    json out = json::array();
    for (std::size_t a{0}; a < matrix.size(); ++a) {
        json row = json::array();
        for (std::size_t b{0}; b < matrix.size(); ++b) row.push_back(matrix.at(a, b));
        out.push_back(std::move(row));
    }
    return out;
}

ConfusionMatrix confusion_from_json(const json& doc) {
    if (!doc.is_array()) malformed("confusion matrix must be an array of rows");
    std::vector<std::vector<uint64_t>> counts;
    for (const auto& row : doc) {
        if (!row.is_array()) malformed("confusion matrix row must be an array");
        auto& out{counts.emplace_back()};
        for (const auto& c : row) out.push_back(read_int<uint64_t>(c));
    }
    try {
        return ConfusionMatrix::from_rows(counts);
    } catch (const AnomalyError& e) {
        malformed(e.what());
    }
}

json to_json(const Agreement& agreement) {
    json doc = json::object();
    doc["matrix"] = to_json(agreement.matrix);
    doc["total"] = agreement.matrix.total();
    doc["trace"] = agreement.matrix.trace();
    doc["overall_agreement"] = real(agreement.overall);
    doc["macro_agreement"] = real(agreement.macro);
    json recall = json::array();
    for (const auto& r : agreement.column_recall) recall.push_back(r ? real(*r) : json(nullptr));
    doc["column_recall"] = std::move(recall);
    doc["diagonal_dominant"] = is_diagonal_dominant(agreement.matrix);
    return doc;
}

}  // namespace chainharvest::anomaly
