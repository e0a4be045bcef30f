#include "pcnull/http_server.hpp"

#include <httplib.h>

#include <stdexcept>

namespace pcnull {

namespace {

using Json = SessionService::Json;

constexpr const char* kJsonType = "application/json";

void send(httplib::Response& res, int status, const Json& body) {
    res.status = status;
    res.set_content(body.dump(), kJsonType);
}

Json parse_body(const httplib::Request& req) {
    if (req.body.empty()) return Json(nullptr);
    try {
        return Json::parse(req.body);
    } catch (const nlohmann::json::parse_error& e) {
        throw ApiError(400, "malformed", std::string("invalid JSON body: ") + e.what());
    }
}

long long path_index(const std::string& s) {
    try {
        return std::stoll(s);
    } catch (const std::exception&) {
        throw ApiError(400, "index", "bad index '" + s + "'");
    }
}

template <typename Fn>
httplib::Server::Handler guarded(Fn fn) {
    return [fn](const httplib::Request& req, httplib::Response& res) {
        try {
            fn(req, res);
        } catch (const ApiError& e) {
            send(res, e.status(), e.body());
        } catch (const Error& e) {
            const ApiError api = to_api_error(e);
            send(res, api.status(), api.body());
        } catch (const std::exception& e) {
            send(res, 500, ApiError(500, "internal", e.what()).body());
        }
    };
}

}  // namespace

struct HttpServer::Impl {
    ServeOptions options;
    SessionService service;
    httplib::Server server;
    int port = -1;

    explicit Impl(ServeOptions o) : options(std::move(o)), service(options.service) { routes(); }

    void routes() {
        server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                    {"Access-Control-Allow-Methods", "GET, POST, PUT, OPTIONS"},
                                    {"Access-Control-Allow-Headers", "Content-Type"}});
        server.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

        server.Post("/sessions", guarded([this](const httplib::Request& req, httplib::Response& res) {
            Json body = parse_body(req);
            if (body.is_null()) throw ApiError(400, "malformed", "request body required");
            send(res, 201, service.create_session(body));
        }));
        server.Get(R"(/sessions/([0-9a-f]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
            send(res, 200, service.get_session(req.matches[1].str()));
        }));
        server.Put(R"(/sessions/([0-9a-f]+)/entries/([0-9]+)/([0-9]+))",
                   guarded([this](const httplib::Request& req, httplib::Response& res) {
                       send(res, 200,
                            service.put_entry(req.matches[1].str(), path_index(req.matches[2].str()),
                                              path_index(req.matches[3].str()), parse_body(req)));
                   }));
        server.Get(R"(/sessions/([0-9a-f]+)/report)",
                   guarded([this](const httplib::Request& req, httplib::Response& res) {
                       send(res, 200, service.get_report(req.matches[1].str()));
                   }));
        server.Post(R"(/sessions/([0-9a-f]+)/recover)",
                    guarded([this](const httplib::Request& req, httplib::Response& res) {
                        send(res, 200, service.recover(req.matches[1].str(), parse_body(req)));
                    }));
        server.Get(R"(/sessions/([0-9a-f]+)/weights)",
                   guarded([this](const httplib::Request& req, httplib::Response& res) {
                       const std::string flag = req.get_param_value("normalize");
                       const bool normalize = flag == "true" || flag == "1";
                       send(res, 200, service.get_weights(req.matches[1].str(), normalize));
                   }));
        server.Get(R"(/sessions/([0-9a-f]+)/export)",
                   guarded([this](const httplib::Request& req, httplib::Response& res) {
                       const std::string format = req.has_param("format") ? req.get_param_value("format") : "json";
                       if (format == "csv") {
                           res.set_content(service.export_matrix(req.matches[1].str(), Format::csv), "text/csv");
                       } else if (format == "json") {
                           res.set_content(service.export_matrix(req.matches[1].str(), Format::json), kJsonType);
                       } else {
                           throw ApiError(400, "malformed", "format must be csv or json");
                       }
                   }));
        server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
            if (res.body.empty() && res.status == 404)
                send(res, 404, ApiError(404, "not_found", "no such endpoint").body());
        });
    }
};

HttpServer::HttpServer(ServeOptions options) : impl_(std::make_unique<Impl>(std::move(options))) {}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind() {
    if (impl_->options.port == 0)
        impl_->port = impl_->server.bind_to_any_port(impl_->options.bind);
    else
        impl_->port = impl_->server.bind_to_port(impl_->options.bind, impl_->options.port) ? impl_->options.port : -1;
    if (impl_->port < 0)
        throw std::runtime_error("cannot bind " + impl_->options.bind + ":" + std::to_string(impl_->options.port));
    return impl_->port;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
    if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

SessionService& HttpServer::service() { return impl_->service; }

}  // namespace pcnull
