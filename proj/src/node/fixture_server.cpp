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

#include <thread>

#include <httplib.h>

#include <chainharvest/node/fixture.hpp>

namespace chainharvest::node {

using nlohmann::json;

struct FixtureRpcServer::Impl {
    std::shared_ptr<FixtureTransport> backend;
    httplib::Server server;
    std::thread thread;
    int port{0};
};

FixtureRpcServer::FixtureRpcServer(std::shared_ptr<FixtureTransport> backend) : impl_{std::make_unique<Impl>()} {
    impl_->backend = std::move(backend);
    impl_->server.Post(R"(/.*)", [this](const httplib::Request& req, httplib::Response& res) {
        json request;
        try {
            request = json::parse(req.body);
        } catch (const json::exception&) {
            const json reply{{"jsonrpc", "2.0"}, {"id", nullptr}, {"error", {{"code", -32700}, {"message", "parse error"}}}};
            res.set_content(reply.dump(), "application/json");
            return;
        }
        try {
            json reply;
            if (request.is_array()) {
                reply = json::array();
                for (const json& entry : request) {
                    reply.push_back(impl_->backend->handle(entry));
                }
            } else {
                reply = impl_->backend->handle(request);
            }
            res.set_content(reply.dump(), "application/json");
        } catch (const TransportError& ex) {
            res.status = 503;
            res.set_content(ex.what(), "text/plain");
        }
    });
}

FixtureRpcServer::~FixtureRpcServer() { stop(); }

int FixtureRpcServer::start(int port) {
    const std::string host{"127.0.0.1"};
    if (port == 0) {
        impl_->port = impl_->server.bind_to_any_port(host);
    } else {
        impl_->port = impl_->server.bind_to_port(host, port) ? port : -1;
    }
    if (impl_->port < 0) {
        throw std::runtime_error{"cannot bind fixture server to port " + std::to_string(port)};
    }
    impl_->thread = std::thread{[this] { impl_->server.listen_after_bind(); }};
    impl_->server.wait_until_ready();
    return impl_->port;
}

void FixtureRpcServer::run(const std::string& host, int port) {
    impl_->port = port;
    if (!impl_->server.listen(host, port)) {
        throw std::runtime_error{"cannot listen on " + host + ":" + std::to_string(port)};
    }
}

void FixtureRpcServer::stop() {
    if (impl_->server.is_running()) {
        impl_->server.stop();
    }
    if (impl_->thread.joinable()) {
        impl_->thread.join();
    }
}

std::string FixtureRpcServer::url() const { return "http://127.0.0.1:" + std::to_string(impl_->port) + "/"; }

}  // namespace chainharvest::node
