#include "memoria/errors.hpp"
#include "memoria/service/service.hpp"

#include <httplib.h>

namespace memoria::service {

struct HttpServer::Impl {
    ServiceCore& core;
    httplib::Server server;

    explicit Impl(ServiceCore& c) : core(c) {
        auto route = [this](const httplib::Request& req, httplib::Response& res) {
            const auto out = core.handle({req.method, req.path, req.body, req.get_header_value("Authorization")});
            res.status = out.status;
            res.set_content(out.body.dump(), "application/json");
        };
        const std::string any = R"(/.*)";
        server.Get(any, route);
        server.Post(any, route);
        server.Put(any, route);
        server.Delete(any, route);
        server.Options(any, [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
        server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                    {"Access-Control-Allow-Headers", "Content-Type, Authorization"},
                                    {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
    }
};

HttpServer::HttpServer(ServiceCore& core) : impl_(std::make_unique<Impl>(core)) {}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
    if (port == 0) {
        const int bound = impl_->server.bind_to_any_port(host);
        if (bound < 0) throw Error("cannot bind " + host);
        return bound;
    }
    if (!impl_->server.bind_to_port(host, port)) throw Error("cannot bind " + host + ":" + std::to_string(port));
    return port;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
    if (impl_) impl_->server.stop();
}

} // namespace memoria::service
