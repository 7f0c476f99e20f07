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

#include <chainharvest/common/csv.hpp>

#include <stdexcept>

namespace chainharvest::csv {

namespace {

    void write_field(std::ostream& out, const std::string& field) {
        if (field.find_first_of(",\"\r\n") == std::string::npos) {
            out << field;
            return;
        }
        out << '"';
        for (const char c : field) {
            if (c == '"') {
                out << '"';
            }
            out << c;
        }
        out << '"';
    }

}  // namespace

void write_row(std::ostream& out, std::span<const std::optional<std::string>> fields) {
    for (std::size_t i{0}; i < fields.size(); ++i) {
        if (i > 0) {
            out << ',';
        }
        if (fields[i]) {
            write_field(out, *fields[i]);
        }
    }
    out << "\r\n";
}

void write_row(std::ostream& out, std::span<const std::string> fields) {
    for (std::size_t i{0}; i < fields.size(); ++i) {
        if (i > 0) {
            out << ',';
        }
        write_field(out, fields[i]);
    }
    out << "\r\n";
}

bool read_row(std::istream& in, std::vector<std::string>& fields) {
    fields.clear();
    if (in.peek() == std::char_traits<char>::eof()) {
        return false;
    }
    std::string field;
    bool quoted{false};
    for (int c{in.get()};; c = in.get()) {
        if (quoted) {
            if (c == std::char_traits<char>::eof()) {
                throw std::runtime_error{"unterminated quoted CSV field"};
            }
            if (c == '"') {
                if (in.peek() == '"') {
                    field += static_cast<char>(in.get());
                } else {
                    quoted = false;
                }
            } else {
                field += static_cast<char>(c);
            }
            continue;
        }
        if (c == std::char_traits<char>::eof() || c == '\n') {
            fields.push_back(std::move(field));
            return true;
        }
        if (c == '\r' && in.peek() == '\n') {
            continue;
        }
        if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (c == '"' && field.empty()) {
            quoted = true;
        } else {
            field += static_cast<char>(c);
        }
    }
}

}  // namespace chainharvest::csv
