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

#include <chainharvest/node/transport.hpp>

#include <atomic>
#include <optional>

#include <httplib.h>

#include <chainharvest/node/error.hpp>
#include <chainharvest/node/fixture.hpp>

namespace chainharvest::node {

using nlohmann::json;

namespace {

    struct UrlParts {
        std::string scheme;
        std::string userinfo;
        std::string host_port;
        std::string path;
    };

    UrlParts split_url(const std::string& url) {
        UrlParts parts;
        std::string_view rest{url};
        if (const auto pos{rest.find("://")}; pos != std::string_view::npos) {
            parts.scheme = rest.substr(0, pos);
            rest.remove_prefix(pos + 3);
        }
        const auto authority_end{rest.find_first_of("/?#")};
        std::string_view authority{rest.substr(0, authority_end)};
        if (const auto at{authority.rfind('@')}; at != std::string_view::npos) {
            parts.userinfo = authority.substr(0, at);
            authority.remove_prefix(at + 1);
        }
        parts.host_port = authority;
        if (authority_end != std::string_view::npos) {
            parts.path = rest.substr(authority_end);
        }
        return parts;
    }

    std::atomic<uint64_t> g_request_id{1};

}  // namespace

std::string redact_url(const std::string& url) {
    if (url.starts_with("fixture:")) {
        return "fixture:<path>";
    }
    const UrlParts parts{split_url(url)};
    std::string host{parts.host_port};
    // Drop the port as well; only the host identifies the node in logs.
    if (!host.empty() && host.front() != '[') {
        host = host.substr(0, host.find(':'));
    } else if (const auto close{host.find(']')}; close != std::string::npos) {
        host = host.substr(0, close + 1);
    }
    return parts.scheme.empty() ? host : parts.scheme + "://" + host;
}

std::shared_ptr<Transport> make_transport(const NodeEndpoint& endpoint) {
    constexpr std::string_view kFixturePrefix{"fixture:"};
    if (endpoint.url.starts_with(kFixturePrefix)) {
        return std::make_shared<FixtureTransport>(load_fixture(endpoint.url.substr(kFixturePrefix.size())));
    }
    return std::make_shared<HttpTransport>(endpoint);
}

HttpTransport::HttpTransport(NodeEndpoint endpoint) : endpoint_{std::move(endpoint)} {
    const UrlParts parts{split_url(endpoint_.url)};
    if (parts.scheme != "http" && parts.scheme != "https") {
        throw NodeError{NodeErrc::kTransport, "unsupported node URL scheme in " + redact_url(endpoint_.url)};
    }
    if (parts.host_port.empty()) {
        throw NodeError{NodeErrc::kTransport, "node URL has no host"};
    }
    scheme_host_port_ = parts.scheme + "://" + parts.host_port;
    path_ = parts.path.empty() ? "/" : parts.path;
}

json HttpTransport::call(const std::string& method, const json& params) {
    httplib::Client client{scheme_host_port_};
    const auto timeout{std::chrono::duration_cast<std::chrono::microseconds>(endpoint_.request_timeout)};
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);
    if (const UrlParts parts{split_url(endpoint_.url)}; !parts.userinfo.empty()) {
        const auto colon{parts.userinfo.find(':')};
        client.set_basic_auth(parts.userinfo.substr(0, colon),
                              colon == std::string::npos ? "" : parts.userinfo.substr(colon + 1));
    }

    const uint64_t id{g_request_id.fetch_add(1)};
    const json request{{"jsonrpc", "2.0"}, {"id", id}, {"method", method}, {"params", params}};
    const auto response{client.Post(path_, request.dump(), "application/json")};
    if (!response) {
        throw TransportError{"HTTP request to " + redact_url(endpoint_.url) +
                             " failed: " + httplib::to_string(response.error())};
    }
    if (response->status != 200) {
        throw TransportError{"HTTP status " + std::to_string(response->status) + " from " +
                             redact_url(endpoint_.url)};
    }
    json reply;
    try {
        reply = json::parse(response->body);
    } catch (const json::exception& ex) {
        throw TransportError{std::string{"unparseable JSON-RPC reply: "} + ex.what()};
    }
    if (const auto error{reply.find("error")}; error != reply.end() && !error->is_null()) {
        throw RpcError{error->value("code", 0), error->value("message", std::string{"unknown error"})};
    }
    const auto result{reply.find("result")};
    if (result == reply.end()) {
        throw TransportError{"JSON-RPC reply without result"};
    }
    return *result;
}

}  // namespace chainharvest::node
