#pragma once

#include <memory>
#include <string>

#include "pcnull/service.hpp"

namespace pcnull {

struct ServeOptions {
    std::string bind = "127.0.0.1";
    int port = 8080;  // 0 picks a free port
    ServiceConfig service;
};

/// HTTP/JSON front end over a SessionService.
///
///   POST /sessions
///   GET  /sessions/{id}
///   PUT  /sessions/{id}/entries/{i}/{j}
///   GET  /sessions/{id}/report
///   POST /sessions/{id}/recover
///   GET  /sessions/{id}/weights?normalize=true|false
///   GET  /sessions/{id}/export?format=csv|json
class HttpServer {
public:
    explicit HttpServer(ServeOptions options);
    ~HttpServer();
    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    /// Binds the socket; returns the bound port. Throws std::runtime_error on failure.
    int bind();
    /// Serves until stop() is called. bind() must have succeeded.
    void listen();
    void stop();

    SessionService& service();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace pcnull
