#include "lfp/service.hpp"

#include <random>
#include <sstream>

namespace lfp {

namespace fs = std::filesystem;

namespace {

std::vector<std::string> roles(MoveKind k) {
  switch (k) {
    case MoveKind::DomE: return {"f", "h"};
    case MoveKind::CodE: return {"f"};
    default: return {"h", "h'"};
  }
}

std::string side_name(const PsMorphism& w, const GameConfig& cfg) {
  if (w.target().shares_storage_with(cfg.domain())) return "X";
  return "Y";
}

std::string source_name(const GameConfig& cfg, const Move& mv, const PsMorphism& w) {
  const std::string& cond = cfg.model.condition_names.at(mv.condition);
  const PsMorphism& g = cfg.model.conditions.at(mv.condition);
  return (w.source().shares_storage_with(g.source()) ? "A" : "B") + std::string("(") + cond + ")";
}

Json witness_table(const Writer& wr, const PsMorphism& w) {
  const FinCat& c = w.source().base();
  Json out = Json::object();
  for (Pos o = 0; o < c.object_count(); ++o) {
    auto from = wr.element_names(w.source().at(o));
    if (from.empty()) continue;
    auto to = wr.element_names(w.target().at(o));
    Json graph = Json::object();
    for (Pos e = 0; e < from.size(); ++e) graph[from[e]] = to[w.at(o).at(e)];
    out[c.object_name(o)] = std::move(graph);
  }
  return out;
}

Json move_json(const Workspace& ws, const GameConfig& cfg, const Move& mv) {
  Writer wr(ws);
  Json out = Json::object();
  out["id"] = move_id(cfg, mv);
  out["kind"] = std::string(to_string(mv.kind));
  out["condition"] = cfg.model.condition_names.at(mv.condition);
  out["description"] = describe_move(ws, cfg, mv);
  Json ws_j = Json::array();
  auto r = roles(mv.kind);
  for (std::size_t i = 0; i < mv.witnesses.size(); ++i) {
    const auto& w = mv.witnesses[i];
    ws_j.push_back(Json{{"role", r.at(i)},
                        {"source", source_name(cfg, mv, w)},
                        {"target", side_name(w, cfg)},
                        {"components", witness_table(wr, w)}});
  }
  out["witnesses"] = std::move(ws_j);
  return out;
}

// Moves not listed since the last state change are searched for among this
// many candidates before the id is declared stale.
constexpr std::size_t kMaxRescan = 200000;

std::size_t condition_index(const PresheafModel& model, const std::string& c) {
  for (std::size_t i = 0; i < model.condition_names.size(); ++i)
    if (model.condition_names[i] == c) return i;
  if (!c.empty() && c.find_first_not_of("0123456789") == std::string::npos) {
    std::size_t i = std::stoul(c);
    if (i < model.conditions.size()) return i;
  }
  throw Error(ErrorCode::ValidationError, "unknown condition '" + c + "'");
}

}  // namespace

std::string describe_move(const Workspace& ws, const GameConfig& cfg, const Move& mv) {
  Writer wr(ws);
  std::ostringstream out;
  out << to_string(mv.kind) << " on " << cfg.model.condition_names.at(mv.condition);
  auto r = roles(mv.kind);
  for (std::size_t i = 0; i < mv.witnesses.size(); ++i) {
    const auto& w = mv.witnesses[i];
    out << "; " << r.at(i) << ": " << source_name(cfg, mv, w) << " -> " << side_name(w, cfg);
    const FinCat& c = w.source().base();
    for (Pos o = 0; o < c.object_count(); ++o) {
      auto from = wr.element_names(w.source().at(o));
      if (from.empty()) continue;
      auto to = wr.element_names(w.target().at(o));
      out << " " << c.object_name(o) << "{";
      for (Pos e = 0; e < from.size(); ++e)
        out << (e ? ", " : "") << from[e] << "->" << to[w.at(o).at(e)];
      out << "}";
    }
  }
  return out.str();
}

int http_status(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::UnknownSession: return 404;
    case ErrorCode::StaleMove: return 409;
    default: return 400;
  }
}

Json error_json(const Error& e) {
  return Json{{"error", std::string(to_string(e.code()))}, {"message", e.what()}};
}

struct SessionService::Session {
  std::string id;
  std::unique_ptr<Workspace> ws = std::make_unique<Workspace>();
  std::unique_ptr<Loader> loader = std::make_unique<Loader>(*ws);
  PresheafModel model;
  std::optional<GameConfig> initial;
  std::vector<std::pair<Move, GameConfig>> history;
  std::map<std::string, Move> listed;
  mutable std::mutex mu;

  const GameConfig& current() const { return history.empty() ? *initial : history.back().second; }

  Json state() const {
    const GameConfig& cur = current();
    Writer wr(*ws);
    Json out = Json::object();
    bool won = is_iso(cur.m);
    out["session"] = id;
    out["status"] = won ? "Won" : "Open";
    out["won"] = won;
    out["digest"] = digest(cur);
    out["history"] = history.size();
    out["conditions"] = cur.model.condition_names;
    out["domain"] = wr.presheaf_body(cur.domain());
    out["codomain"] = wr.presheaf_body(cur.codomain());
    out["components"] = wr.morphism_payload(cur.m)["components"];
    return out;
  }
};

SessionService::SessionService(fs::path root) : root_(std::move(root)) {
  std::random_device rd;
  salt_ = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

SessionService::~SessionService() = default;

std::string SessionService::fresh_id() {
  std::mt19937_64 rng(salt_ + ++counter_);
  std::ostringstream out;
  out << std::hex << rng();
  return out.str();
}

std::shared_ptr<SessionService::Session> SessionService::find(const std::string& id) const {
  std::shared_lock lock(mu_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw Error(ErrorCode::UnknownSession, "no session '" + id + "'");
  return it->second;
}

std::size_t SessionService::session_count() const {
  std::shared_lock lock(mu_);
  return sessions_.size();
}

Json SessionService::create(const Json& body) {
  auto s = std::make_shared<Session>();
  Loader& l = *s->loader;
  auto payload_of = [](const Json& doc, DocKind want, const char* what) -> const Json& {
    if (!doc.is_object() || !doc.contains("kind") || !doc.contains("payload"))
      throw Error(ErrorCode::ParseError, std::string(what) + ": expected a document");
    if (doc["kind"] != to_string(want))
      throw Error(ErrorCode::ParseError, std::string(what) + ": expected a " +
                                             std::string(to_string(want)) + " document");
    return doc["payload"];
  };
  if (!body.is_object()) throw Error(ErrorCode::ParseError, "session: expected an object");
  if (body.contains("model_path"))
    s->model = l.load_model(root_ / body["model_path"].get<std::string>());
  else if (body.contains("model"))
    s->model = l.model_from(payload_of(body["model"], DocKind::Model, "model"), root_);
  else
    throw Error(ErrorCode::ParseError, "session: missing \"model\" or \"model_path\"");
  PsMorphism m = [&] {
    if (body.contains("config_path"))
      return l.load_morphism(root_ / body["config_path"].get<std::string>());
    if (body.contains("config"))
      return l.morphism_from(payload_of(body["config"], DocKind::Morphism, "config"), root_);
    throw Error(ErrorCode::ParseError, "session: missing \"config\" or \"config_path\"");
  }();
  if (!(m.source().base() == s->model.base))
    throw Error(ErrorCode::BaseMismatch, "session: configuration lives over another base");
  s->initial = GameConfig{s->model, m};
  std::unique_lock lock(mu_);
  s->id = fresh_id();
  sessions_.emplace(s->id, s);
  return s->state();
}

Json SessionService::state(const std::string& id) const {
  auto s = find(id);
  std::lock_guard lock(s->mu);
  return s->state();
}

Json SessionService::moves(const std::string& id, const MovesQuery& q) {
  auto s = find(id);
  std::lock_guard lock(s->mu);
  const GameConfig& cur = s->current();
  MoveQuery mq;
  mq.kind = q.kind;
  mq.productive_only = q.productive_only;
  if (q.condition) mq.condition = condition_index(cur.model, *q.condition);
  const std::size_t size = std::clamp<std::size_t>(q.page_size, 1, kMaxPageSize);
  MoveStream stream = enumerate_moves(cur, mq);
  for (std::size_t skip = q.page * size; skip > 0; --skip)
    if (!stream.next()) break;
  Json list = Json::array();
  bool more = false;
  while (auto mv = stream.next()) {
    if (list.size() == size) {
      more = true;
      break;
    }
    Json j = move_json(*s->ws, cur, *mv);
    s->listed.insert_or_assign(j["id"].get<std::string>(), std::move(*mv));
    list.push_back(std::move(j));
  }
  Json out = Json::object();
  out["session"] = id;
  out["digest"] = digest(cur);
  out["page"] = q.page;
  out["page_size"] = size;
  out["has_more"] = more;
  out["moves"] = std::move(list);
  return out;
}

Json SessionService::apply(const std::string& id, const std::string& mid) {
  auto s = find(id);
  std::lock_guard lock(s->mu);
  const GameConfig& cur = s->current();
  std::optional<Move> mv;
  if (auto it = s->listed.find(mid); it != s->listed.end() && move_id(cur, it->second) == mid)
    mv = it->second;
  if (!mv) {
    MoveStream stream = enumerate_moves(cur);
    std::size_t seen = 0;
    while (auto cand = stream.next()) {
      if (++seen > kMaxRescan) break;
      if (move_id(cur, *cand) == mid) {
        mv = std::move(*cand);
        break;
      }
    }
  }
  if (!mv) throw Error(ErrorCode::StaleMove, "move '" + mid + "' is not legal in the current state");
  GameConfig next = apply_move(*s->ws, cur, *mv);
  s->history.emplace_back(std::move(*mv), std::move(next));
  s->listed.clear();
  return s->state();
}

Json SessionService::undo(const std::string& id) {
  auto s = find(id);
  std::lock_guard lock(s->mu);
  if (s->history.empty()) throw Error(ErrorCode::ValidationError, "nothing to undo");
  s->history.pop_back();
  s->listed.clear();
  return s->state();
}

Json SessionService::trace(const std::string& id) const {
  auto s = find(id);
  std::lock_guard lock(s->mu);
  Trace t;
  t.initial = *s->initial;
  for (const auto& [mv, cfg] : s->history) t.steps.push_back({mv, digest(cfg)});
  Writer wr(*s->ws, &s->loader->names(), true);
  return Writer::envelope(DocKind::Trace, wr.trace_payload(t));
}

}  // namespace lfp
