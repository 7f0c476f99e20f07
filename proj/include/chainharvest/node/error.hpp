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

#include <chainharvest/common/error.hpp>

namespace chainharvest::node {

enum class NodeErrc {
    kNotFound,
    kTransport,         // wire failure persisted after all retries
    kRpcError,          // node answered with a JSON-RPC error object
    kMalformedResponse,
    kRangeOutOfBounds,
    kBeforeGenesis,
    kBadFixture,
};

using NodeError = Error<NodeErrc>;

const char* to_string(NodeErrc code) noexcept;

}  // namespace chainharvest::node
