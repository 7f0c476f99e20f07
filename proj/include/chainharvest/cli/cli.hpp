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

#include <ostream>
#include <string>
#include <vector>

namespace chainharvest::cli {

//! Process exit codes; the non-zero values follow sysexits.h where one fits.
enum ExitCode : int {
    kExitOk = 0,
    kExitAborted = 2,          // crawl stopped early; checkpoint persisted
    kExitUnknownSelector = 3,  // decode found no matching function
    kExitUsage = 64,
    kExitDataError = 65,  // input present but malformed
    kExitNoInput = 66,
    kExitUnavailable = 69,  // node unreachable
    kExitSoftware = 70,
};

//! Runs one invocation. `args` excludes the program name. Machine-readable results go to
//! `out`; logs, the resolved configuration and summaries go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace chainharvest::cli
