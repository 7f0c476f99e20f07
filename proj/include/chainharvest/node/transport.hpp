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

#include <chrono>
#include <memory>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

namespace chainharvest::node {

//! Connection-level failure; the client retries these.
class TransportError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

//! The node answered with a JSON-RPC error object; not retried.
class RpcError : public std::runtime_error {
  public:
    RpcError(int code, const std::string& message) : std::runtime_error{message}, code_{code} {}
    [[nodiscard]] int code() const noexcept { return code_; }

  private:
    int code_;
};

inline constexpr int kRpcInvalidParams{-32602};
inline constexpr int kRpcMethodNotFound{-32601};
inline constexpr int kRpcInvalidRequest{-32600};

//! One JSON-RPC 2.0 method call. Implementations must be safe for concurrent use.
class Transport {
  public:
    virtual ~Transport() = default;

    //! Returns the "result" member. Throws TransportError or RpcError.
    virtual nlohmann::json call(const std::string& method, const nlohmann::json& params) = 0;
};

struct NodeEndpoint {
    std::string url;
    std::chrono::duration<double> request_timeout{30.0};
    unsigned max_retries{3};
    std::chrono::duration<double> retry_backoff{0.5};  // doubled after every failed attempt
};

//! Keeps scheme and host; drops credentials, path and query. Used in all log output.
std::string redact_url(const std::string& url);

//! "fixture:<path>" endpoints load a fixture file; anything else goes over HTTP.
std::shared_ptr<Transport> make_transport(const NodeEndpoint& endpoint);

//! One JSON-RPC request/response over HTTP POST, one connection per call.
class HttpTransport final : public Transport {
  public:
    explicit HttpTransport(NodeEndpoint endpoint);

    nlohmann::json call(const std::string& method, const nlohmann::json& params) override;

  private:
    NodeEndpoint endpoint_;
    std::string scheme_host_port_;
    std::string path_;
};

}  // namespace chainharvest::node
