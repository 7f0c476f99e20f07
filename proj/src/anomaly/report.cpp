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

#include <chainharvest/anomaly/report.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <chainharvest/common/csv.hpp>
#include <chainharvest/common/format.hpp>

namespace chainharvest::anomaly {

using nlohmann::json;

namespace {

    std::string methods_label(const std::vector<Method>& methods) {
        std::string out;
        for (const auto m : methods) {
            if (!out.empty()) out += '+';
            out += to_string(m);
        }
        return out;
    }

    void pad(std::ostringstream& out, const std::string& text, std::size_t width) {
        out << text;
        for (std::size_t i{text.size()}; i < width; ++i) out << ' ';
    }

}  // namespace

Annotations load_annotations(const std::filesystem::path& path) {
    std::ifstream in{path, std::ios::binary};
    if (!in) {
        throw std::runtime_error{"cannot read annotations file " + path.string()};
    }
    std::vector<std::string> fields;
    if (!csv::read_row(in, fields) || fields != std::vector<std::string>{"address", "label", "source"}) {
        throw AnomalyError{AnomalyErrc::kBadParam, "annotations header must be address,label,source"};
    }
    Annotations out;
    std::size_t line{1};
    while (csv::read_row(in, fields)) {
        ++line;
        if (fields.size() == 1 && fields[0].empty()) continue;
        if (fields.size() != 3) {
            throw AnomalyError{AnomalyErrc::kBadParam, "annotations line " + std::to_string(line) + " has " +
                                                           std::to_string(fields.size()) + " fields"};
        }
        try {
            out[Address::from_hex(fields[0])] = Annotation{fields[1], fields[2]};
        } catch (const HexError& e) {
            throw AnomalyError{AnomalyErrc::kBadParam,
                               "annotations line " + std::to_string(line) + ": " + e.what()};
        }
    }
    return out;
}

OutlierReport build_report(const features::FeatureMatrix& m, const std::map<Method, std::set<Address>>& flagged,
                           const Annotations* annotations) {
    OutlierReport report;
    for (std::size_t c{0}; c < m.values.cols(); ++c) {
        report.feature_names.emplace_back(c < features::kFeatureCount ? std::string{features::kFeatureNames[c]}
                                                                      : "f" + std::to_string(c));
    }
    std::map<Address, std::size_t> row_of;
    for (std::size_t r{0}; r < m.addresses.size(); ++r) row_of.emplace(m.addresses[r], r);

    std::map<Address, std::vector<Method>> votes;
    for (const auto& [method, set] : flagged) {
        for (const auto& a : set) votes[a].push_back(method);
    }
    for (auto& [address, methods] : votes) {
        ReportRow row;
        row.address = address;
        std::sort(methods.begin(), methods.end());
        row.flagged_by = methods;
        if (const auto it{row_of.find(address)}; it != row_of.end()) {
            const auto src{m.values.row(it->second)};
            row.features.assign(src.begin(), src.end());
        }
        if (annotations) {
            if (const auto it{annotations->find(address)}; it != annotations->end()) row.annotation = it->second;
        }
        report.rows.push_back(std::move(row));
    }
    std::stable_sort(report.rows.begin(), report.rows.end(), [](const ReportRow& a, const ReportRow& b) {
        return a.flagged_by.size() > b.flagged_by.size();
    });
    return report;
}

std::string render_report(const OutlierReport& report) {
    std::ostringstream out;
    const std::size_t address_width{42};
    const std::size_t methods_width{18};
    pad(out, "rank", 6);
    pad(out, "address", address_width + 2);
    pad(out, "flagged_by", methods_width);
    pad(out, "votes", 7);
    pad(out, "label", 16);
    out << "source\n";
    std::size_t rank{0};
    for (const auto& row : report.rows) {
        pad(out, std::to_string(++rank), 6);
        pad(out, row.address.to_hex(), address_width + 2);
        pad(out, methods_label(row.flagged_by), methods_width);
        pad(out, std::to_string(row.flagged_by.size()), 7);
        pad(out, row.annotation ? row.annotation->label : "", 16);
        out << (row.annotation ? row.annotation->source : "");
        out << '\n';
    }
    out << report.rows.size() << " flagged account" << (report.rows.size() == 1 ? "" : "s") << '\n';
    // Trailing spaces are trimmed so the table diffs cleanly.
    std::string text{out.str()};
    std::string trimmed;
    std::istringstream lines{text};
    for (std::string line; std::getline(lines, line);) {
        line.erase(line.find_last_not_of(' ') + 1);
        trimmed += line;
        trimmed += '\n';
    }
    return trimmed;
}

json to_json(const OutlierReport& report) {
    json doc = json::object();
    doc["format"] = "chainharvest-report/1";
    doc["feature_names"] = report.feature_names;
    json rows = json::array();
    for (const auto& row : report.rows) {
        json entry = json::object();
        entry["address"] = row.address.to_hex();
        json methods = json::array();
        for (const auto m : row.flagged_by) methods.push_back(std::string{to_string(m)});
        entry["flagged_by"] = std::move(methods);
        json values = json::array();
        for (const double v : row.features) values.push_back(format_double(v));
        entry["features"] = std::move(values);
        entry["label"] = row.annotation ? json(row.annotation->label) : json(nullptr);
        entry["source"] = row.annotation ? json(row.annotation->source) : json(nullptr);
        rows.push_back(std::move(entry));
    }
    doc["rows"] = std::move(rows);
    return doc;
}

}  // namespace chainharvest::anomaly
