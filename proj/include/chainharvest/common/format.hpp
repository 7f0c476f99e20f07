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

#include <charconv>
#include <string>
#include <system_error>

namespace chainharvest {

//! Shortest text that parses back to the same double.
inline std::string format_double(double value) {
    char buf[32];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc{}) {
        return "nan";
    }
    std::string out{buf, end};
    return out == "-0" ? "0" : out;
}

//! Parses the whole string as a double; throws std::invalid_argument.
inline double parse_double(const std::string& text) {
    double value{0.0};
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || end != text.data() + text.size()) {
        throw std::invalid_argument{"not a number: '" + text + "'"};
    }
    return value;
}

}  // namespace chainharvest
