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

#include <chainharvest/features/features.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include <chainharvest/common/csv.hpp>
#include <chainharvest/common/format.hpp>

namespace chainharvest::features {

namespace {

    struct Accumulator {
        uint64_t out_count{0};
        uint64_t in_count{0};
        U256 value_out{0};
        U256 value_in{0};
        std::set<Address> out_peers;
        std::set<Address> in_peers;
        uint64_t first{UINT64_MAX};
        uint64_t last{0};
        uint64_t calls{0};
        U256 gas_price_sum{0};

        void touch(uint64_t timestamp) {
            first = std::min(first, timestamp);
            last = std::max(last, timestamp);
        }
    };

    const U256 kWeiPerEther{U256{1'000'000'000'000'000'000ULL}};

}  // namespace

double wei_to_ether(const U256& wei) {
    const U256 whole{wei / kWeiPerEther};
    const U256 fraction{wei % kWeiPerEther};
    return whole.convert_to<double>() + fraction.convert_to<double>() / 1e18;
}

std::array<double, kFeatureCount> AccountFeatures::vector() const {
    return {
        static_cast<double>(out_tx_count),
        static_cast<double>(in_tx_count),
        wei_to_ether(total_value_out),
        wei_to_ether(total_value_in),
        mean_value_out,
        mean_value_in,
        static_cast<double>(unique_out_peers),
        static_cast<double>(unique_in_peers),
        static_cast<double>(age),
        activity_rate,
        contract_call_fraction,
        mean_gas_price,
    };
}

std::vector<AccountFeatures> aggregate_accounts(std::span<const ingest::StoredTransaction> transactions) {
    std::map<Address, Accumulator> accounts;
    for (const ingest::StoredTransaction& st : transactions) {
        const Transaction& tx{st.tx};
        Accumulator& sender{accounts[tx.from]};
        ++sender.out_count;
        sender.touch(st.timestamp);
        sender.gas_price_sum += tx.gas_price;
        if (!tx.input.empty()) {
            ++sender.calls;
        }
        if (!tx.to) {
            continue;
        }
        sender.value_out += tx.value;
        sender.out_peers.insert(*tx.to);
        Accumulator& recipient{accounts[*tx.to]};
        ++recipient.in_count;
        recipient.touch(st.timestamp);
        recipient.value_in += tx.value;
        recipient.in_peers.insert(tx.from);
    }

    std::vector<AccountFeatures> out;
    out.reserve(accounts.size());
    for (const auto& [address, acc] : accounts) {
        AccountFeatures f;
        f.address = address;
        f.out_tx_count = acc.out_count;
        f.in_tx_count = acc.in_count;
        f.total_value_out = acc.value_out;
        f.total_value_in = acc.value_in;
        f.mean_value_out = acc.out_count > 0 ? wei_to_ether(acc.value_out) / static_cast<double>(acc.out_count) : 0.0;
        f.mean_value_in = acc.in_count > 0 ? wei_to_ether(acc.value_in) / static_cast<double>(acc.in_count) : 0.0;
        f.unique_out_peers = acc.out_peers.size();
        f.unique_in_peers = acc.in_peers.size();
        f.age = acc.last - acc.first;
        const double days{std::max(1.0, static_cast<double>(f.age) / static_cast<double>(kSecondsPerDay))};
        f.activity_rate = static_cast<double>(acc.out_count + acc.in_count) / days;
        f.contract_call_fraction =
            acc.out_count > 0 ? static_cast<double>(acc.calls) / static_cast<double>(acc.out_count) : 0.0;
        f.mean_gas_price =
            acc.out_count > 0 ? acc.gas_price_sum.convert_to<double>() / static_cast<double>(acc.out_count) : 0.0;
        out.push_back(std::move(f));
    }
    return out;
}

std::vector<AccountFeatures> build_account_features(const ingest::ChainStore& store) {
    const auto transactions{store.transactions()};
    if (transactions.empty()) {
        throw FeatureError{FeatureErrc::kEmptyStore, "store contains no transactions"};
    }
    return aggregate_accounts(transactions);
}

FeatureMatrix to_matrix(std::span<const AccountFeatures> accounts) {
    FeatureMatrix m;
    m.values = Matrix{accounts.size(), kFeatureCount};
    for (std::size_t r{0}; r < accounts.size(); ++r) {
        m.addresses.push_back(accounts[r].address);
        const auto v{accounts[r].vector()};
        std::copy(v.begin(), v.end(), m.values.row(r).begin());
    }
    return m;
}

FeatureMatrix build_features(const ingest::ChainStore& store) { return to_matrix(build_account_features(store)); }

Scaling fit_scaling(const Matrix& m) {
    if (m.rows() < 2) {
        throw FeatureError{FeatureErrc::kTooFewRows, "z-scoring needs at least two rows"};
    }
    Scaling s;
    const double n{static_cast<double>(m.rows())};
    for (std::size_t c{0}; c < m.cols(); ++c) {
        double sum{0.0};
        for (std::size_t r{0}; r < m.rows(); ++r) {
            sum += m(r, c);
        }
        const double mean{sum / n};
        double sq{0.0};
        for (std::size_t r{0}; r < m.rows(); ++r) {
            const double d{m(r, c) - mean};
            sq += d * d;
        }
        double stddev{std::sqrt(sq / n)};
        if (stddev <= 1e-12 * std::max(1.0, std::abs(mean))) {
            stddev = 0.0;
        }
        s.mean.push_back(mean);
        s.stddev.push_back(stddev);
    }
    return s;
}

Matrix Scaling::apply(const Matrix& m) const {
    if (m.cols() != mean.size()) {
        throw FeatureError{FeatureErrc::kDimensionMismatch, "scaling expects " + std::to_string(mean.size()) +
                                                                " columns, got " + std::to_string(m.cols())};
    }
    Matrix out{m.rows(), m.cols()};
    for (std::size_t r{0}; r < m.rows(); ++r) {
        for (std::size_t c{0}; c < m.cols(); ++c) {
            out(r, c) = stddev[c] == 0.0 ? 0.0 : (m(r, c) - mean[c]) / stddev[c];
        }
    }
    return out;
}

FeatureMatrix zscore(const FeatureMatrix& m) {
    FeatureMatrix out;
    out.addresses = m.addresses;
    out.scaling = fit_scaling(m.values);
    out.values = out.scaling->apply(m.values);
    return out;
}

void write_features_csv(const FeatureMatrix& m, const std::filesystem::path& path) {
    std::ofstream out{path, std::ios::binary | std::ios::trunc};
    if (!out) {
        throw FeatureError{FeatureErrc::kIo, "cannot write " + path.string()};
    }
    std::vector<std::string> fields{"address"};
    fields.insert(fields.end(), kFeatureNames.begin(), kFeatureNames.end());
    csv::write_row(out, fields);
    for (std::size_t r{0}; r < m.values.rows(); ++r) {
        fields.assign(1, m.addresses[r].to_hex());
        for (const double v : m.values.row(r)) {
            fields.push_back(format_double(v));
        }
        csv::write_row(out, fields);
    }
    if (!out) {
        throw FeatureError{FeatureErrc::kIo, "write failed for " + path.string()};
    }
}

FeatureMatrix read_features_csv(const std::filesystem::path& path) {
    std::ifstream in{path, std::ios::binary};
    if (!in) {
        throw FeatureError{FeatureErrc::kIo, "cannot read " + path.string()};
    }
    std::vector<std::string> row;
    if (!csv::read_row(in, row) || row.empty() || row[0] != "address") {
        throw FeatureError{FeatureErrc::kMalformedCsv, path.string() + ": missing header"};
    }
    const std::size_t cols{row.size() - 1};
    std::vector<std::vector<double>> rows;
    FeatureMatrix m;
    std::size_t line{1};
    try {
        while (csv::read_row(in, row)) {
            ++line;
            if (row.size() == 1 && row[0].empty()) {
                continue;
            }
            if (row.size() != cols + 1) {
                throw std::invalid_argument{"expected " + std::to_string(cols + 1) + " fields"};
            }
            m.addresses.push_back(Address::from_hex(row[0]));
            std::vector<double> values;
            for (std::size_t c{1}; c < row.size(); ++c) {
                values.push_back(parse_double(row[c]));
            }
            rows.push_back(std::move(values));
        }
    } catch (const std::exception& ex) {
        throw FeatureError{FeatureErrc::kMalformedCsv, path.string() + ":" + std::to_string(line) + ": " + ex.what()};
    }
    m.values = rows.empty() ? Matrix{0, cols} : Matrix::from_rows(rows);
    return m;
}

}  // namespace chainharvest::features
