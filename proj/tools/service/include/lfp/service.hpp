#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>

#include "lfp/io.hpp"

namespace lfp {

struct MovesQuery {
  std::optional<MoveKind> kind;
  /// Condition name or index.
  std::optional<std::string> condition;
  std::size_t page = 0;
  std::size_t page_size = 20;
  bool productive_only = false;
};

inline constexpr std::size_t kMaxPageSize = 100;

/// Game sessions over one engine. Every session owns its workspace; its
/// mutations are serialized and reads see a consistent snapshot.
class SessionService {
 public:
  /// Relative model_path / config_path values resolve against `root`.
  explicit SessionService(std::filesystem::path root = ".");
  ~SessionService();

  /// Body: {"model": document, "config": document} or
  /// {"model_path": file, "config_path": file}. Returns the session state.
  Json create(const Json& body);
  Json state(const std::string& id) const;
  Json moves(const std::string& id, const MovesQuery& q);
  Json apply(const std::string& id, const std::string& move_id);
  Json undo(const std::string& id);
  /// A trace document with the model inlined.
  Json trace(const std::string& id) const;

  std::size_t session_count() const;

 private:
  struct Session;
  std::shared_ptr<Session> find(const std::string& id) const;
  std::string fresh_id();

  std::filesystem::path root_;
  mutable std::shared_mutex mu_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t counter_ = 0;
  std::uint64_t salt_;
};

/// HTTP status for an engine error.
int http_status(ErrorCode code) noexcept;

/// JSON error body {"error": code, "message": text}.
Json error_json(const Error& e);

/// Human-readable witness description, e.g. "f: A -> X  o{x->a, y->b}".
std::string describe_move(const Workspace& ws, const GameConfig& cfg, const Move& mv);

class HttpServer {
 public:
  explicit HttpServer(SessionService& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds host:port (port 0 picks a free one); returns the bound port or -1.
  int bind(const std::string& host, int port);
  /// Blocks until stop().
  bool listen();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace lfp
