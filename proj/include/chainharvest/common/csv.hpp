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

#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace chainharvest::csv {

//! RFC 4180 field: quoted when it contains a comma, quote, CR or LF. nullopt writes an empty field.
void write_row(std::ostream& out, std::span<const std::optional<std::string>> fields);
void write_row(std::ostream& out, std::span<const std::string> fields);

//! Reads one record; returns false at end of input. Accepts LF or CRLF line endings.
//! Throws std::runtime_error on an unterminated quoted field.
bool read_row(std::istream& in, std::vector<std::string>& fields);

}  // namespace chainharvest::csv
