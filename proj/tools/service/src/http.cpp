#include <httplib.h>

#include "lfp/service.hpp"

namespace lfp {

struct HttpServer::Impl {
  explicit Impl(SessionService& s) : service(s) {}
  SessionService& service;
  httplib::Server server;
};

namespace {

void send(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(dump(body), "application/json");
}

template <class F>
void guarded(httplib::Response& res, F&& f, int ok = 200) {
  try {
    send(res, ok, f());
  } catch (const Error& e) {
    send(res, http_status(e.code()), error_json(e));
  } catch (const Json::exception& e) {
    send(res, 400, Json{{"error", "ParseError"}, {"message", e.what()}});
  } catch (const std::exception& e) {
    send(res, 500, Json{{"error", "Internal"}, {"message", e.what()}});
  }
}

MovesQuery moves_query(const httplib::Request& req) {
  MovesQuery q;
  if (req.has_param("kind") && !req.get_param_value("kind").empty()) {
    auto k = parse_move_kind(req.get_param_value("kind"));
    if (!k) throw Error(ErrorCode::ValidationError, "unknown move kind");
    q.kind = *k;
  }
  if (req.has_param("condition") && !req.get_param_value("condition").empty())
    q.condition = req.get_param_value("condition");
  auto count = [&](const char* key, std::size_t fallback) -> std::size_t {
    if (!req.has_param(key) || req.get_param_value(key).empty()) return fallback;
    try {
      return std::stoul(req.get_param_value(key));
    } catch (const std::exception&) {
      throw Error(ErrorCode::ValidationError, std::string("bad ") + key);
    }
  };
  q.page = count("page", 0);
  q.page_size = count("page_size", q.page_size);
  if (req.has_param("productive")) {
    const std::string v = req.get_param_value("productive");
    if (v == "true" || v == "1") q.productive_only = true;
    else if (v == "false" || v == "0" || v.empty()) q.productive_only = false;
    else throw Error(ErrorCode::ValidationError, "bad productive");
  }
  return q;
}

}  // namespace

HttpServer::HttpServer(SessionService& service) : impl_(std::make_unique<Impl>(service)) {
  auto& srv = impl_->server;
  auto& svc = impl_->service;
  srv.Post("/sessions", [&svc](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] { return svc.create(Json::parse(req.body)); }, 201);
  });
  srv.Get(R"(/sessions/([^/]+))", [&svc](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] { return svc.state(req.matches[1]); });
  });
  srv.Get(R"(/sessions/([^/]+)/moves)", [&svc](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] { return svc.moves(req.matches[1], moves_query(req)); });
  });
  srv.Post(R"(/sessions/([^/]+)/moves/([^/]+))",
           [&svc](const httplib::Request& req, httplib::Response& res) {
             guarded(res, [&] { return svc.apply(req.matches[1], req.matches[2]); });
           });
  srv.Post(R"(/sessions/([^/]+)/undo)", [&svc](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] { return svc.undo(req.matches[1]); });
  });
  srv.Get(R"(/sessions/([^/]+)/trace)", [&svc](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] { return svc.trace(req.matches[1]); });
  });
  srv.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
  srv.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool HttpServer::listen() { return impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_) impl_->server.stop();
}

void HttpServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace lfp
