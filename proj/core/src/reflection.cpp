#include "lfp/reflection.hpp"

#include <array>
#include <cstdio>

namespace lfp {

std::string_view to_string(MoveKind k) noexcept {
  switch (k) {
    case MoveKind::DomE: return "DomE";
    case MoveKind::DomU: return "DomU";
    case MoveKind::CodE: return "CodE";
    case MoveKind::CodU: return "CodU";
  }
  return "?";
}

std::optional<MoveKind> parse_move_kind(std::string_view s) noexcept {
  for (MoveKind k : {MoveKind::DomE, MoveKind::DomU, MoveKind::CodE, MoveKind::CodU})
    if (to_string(k) == s) return k;
  return std::nullopt;
}

std::string_view to_string(ReflectStatus s) noexcept {
  return s == ReflectStatus::Converged ? "Converged" : "BudgetExhausted";
}

std::string_view to_string(Strategy s) noexcept {
  return s == Strategy::Greedy ? "greedy" : "exhaustive";
}

std::optional<Strategy> parse_strategy(std::string_view s) noexcept {
  if (s == "greedy") return Strategy::Greedy;
  if (s == "exhaustive") return Strategy::Exhaustive;
  return std::nullopt;
}

std::string_view to_string(PlayStatus s) noexcept {
  return s == PlayStatus::Won ? "Won" : "Inconclusive";
}

namespace {

struct Fnv {
  std::uint64_t h = 14695981039346656037ull;
  void byte(unsigned char b) {
    h ^= b;
    h *= 1099511628211ull;
  }
  void word(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) byte(static_cast<unsigned char>(v >> (8 * i)));
  }
  void text(std::string_view s) {
    word(s.size());
    for (char c : s) byte(static_cast<unsigned char>(c));
  }
  std::string hex() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
  }
};

void hash_presheaf(Fnv& fnv, const Presheaf& x) {
  const FinCat& c = x.base();
  fnv.word(c.object_count());
  for (Pos o = 0; o < c.object_count(); ++o) fnv.word(x.at(o).size());
  for (Pos f = 0; f < c.morphism_count(); ++f)
    for (Pos v : x.action(f).images()) fnv.word(v);
}

void hash_morphism(Fnv& fnv, const PsMorphism& m) {
  for (const auto& comp : m.components()) {
    fnv.word(comp.images().size());
    for (Pos v : comp.images()) fnv.word(v);
  }
}

std::size_t witness_count(MoveKind k) { return k == MoveKind::CodE ? 1 : 2; }

}  // namespace

std::string digest(const GameConfig& cfg) {
  Fnv fnv;
  fnv.word(cfg.model.conditions.size());
  hash_presheaf(fnv, cfg.domain());
  hash_presheaf(fnv, cfg.codomain());
  hash_morphism(fnv, cfg.m);
  return fnv.hex();
}

std::string move_id(const GameConfig& cfg, const Move& mv) {
  Fnv fnv;
  fnv.text(digest(cfg));
  fnv.text(to_string(mv.kind));
  fnv.word(mv.condition);
  fnv.word(mv.witnesses.size());
  for (const auto& w : mv.witnesses) hash_morphism(fnv, w);
  return fnv.hex();
}

std::vector<Violation> check_move(const GameConfig& cfg, const Move& mv) {
  std::vector<Violation> out;
  if (mv.condition >= cfg.model.conditions.size()) {
    out.push_back({"move-condition", "condition index out of range"});
    return out;
  }
  if (mv.witnesses.size() != witness_count(mv.kind)) {
    out.push_back({"move-arity", std::string(to_string(mv.kind)) + " takes " +
                                     std::to_string(witness_count(mv.kind)) + " witnesses"});
    return out;
  }
  const PsMorphism& g = cfg.model.conditions[mv.condition];
  const Presheaf& a = g.source();
  const Presheaf& b = g.target();
  const Presheaf& x = cfg.domain();
  const Presheaf& y = cfg.codomain();
  auto expect = [&](std::size_t i, const Presheaf& s, const Presheaf& t) {
    const auto& w = mv.witnesses[i];
    if (!same_presheaf(w.source(), s) || !same_presheaf(w.target(), t)) {
      out.push_back({"witness-boundary", "witness " + std::to_string(i) + " has the wrong boundary"});
      return false;
    }
    for (auto& v : validate_morphism(w))
      out.push_back({v.rule, "witness " + std::to_string(i) + ": " + v.detail});
    return true;
  };
  const auto& w = mv.witnesses;
  switch (mv.kind) {
    case MoveKind::DomE:
      if (!expect(0, a, x) || !expect(1, b, y) || !out.empty()) return out;
      if (!(compose(g, w[1]) == compose(w[0], cfg.m)))
        out.push_back({"dome-square", "h∘g differs from m∘f"});
      break;
    case MoveKind::DomU:
      if (!expect(0, b, x) || !expect(1, b, x) || !out.empty()) return out;
      if (w[0] == w[1]) out.push_back({"domu-distinct", "h and h' coincide"});
      if (!(compose(g, w[0]) == compose(g, w[1])))
        out.push_back({"domu-restriction", "h∘g differs from h'∘g"});
      if (!(compose(w[0], cfg.m) == compose(w[1], cfg.m)))
        out.push_back({"domu-image", "m∘h differs from m∘h'"});
      break;
    case MoveKind::CodE:
      expect(0, a, y);
      break;
    case MoveKind::CodU:
      if (!expect(0, b, y) || !expect(1, b, y) || !out.empty()) return out;
      if (w[0] == w[1]) out.push_back({"codu-distinct", "h and h' coincide"});
      if (!(compose(g, w[0]) == compose(g, w[1])))
        out.push_back({"codu-restriction", "h∘g differs from h'∘g"});
      break;
  }
  return out;
}

bool is_redundant_existential(const GameConfig& cfg, const Move& mv) {
  if (mv.kind != MoveKind::DomE && mv.kind != MoveKind::CodE) return false;
  const PsMorphism& g = cfg.model.conditions.at(mv.condition);
  const PsMorphism& f = mv.witnesses.at(0);
  return !list_extensions(g, f, 1).empty();
}

MoveStream::MoveStream(GameConfig cfg, MoveQuery query)
    : cfg_(std::move(cfg)), query_(query) {
  std::vector<MoveKind> kinds{MoveKind::DomE, MoveKind::DomU, MoveKind::CodE, MoveKind::CodU};
  if (query_.kind) kinds = {*query_.kind};
  for (MoveKind k : kinds)
    for (std::size_t i = 0; i < cfg_.model.conditions.size(); ++i)
      if (!query_.condition || *query_.condition == i) phases_.emplace_back(k, i);
}

bool MoveStream::open_phase() {
  if (phase_ >= phases_.size()) return false;
  auto [kind, i] = phases_[phase_];
  const Presheaf& a = cfg_.model.conditions[i].source();
  bool on_domain = kind == MoveKind::DomE || kind == MoveKind::DomU;
  outer_.emplace(a, on_domain ? cfg_.domain() : cfg_.codomain());
  return true;
}

void MoveStream::expand(const PsMorphism& f) {
  auto [kind, i] = phases_[phase_];
  const PsMorphism& g = cfg_.model.conditions[i];
  auto pairs = [&](const std::vector<PsMorphism>& hs, bool same_image) {
    for (std::size_t p = 0; p < hs.size(); ++p)
      for (std::size_t q = p + 1; q < hs.size(); ++q) {
        if (same_image && !(compose(hs[p], cfg_.m) == compose(hs[q], cfg_.m))) continue;
        pending_.push_back(Move{kind, i, {hs[p], hs[q]}});
      }
  };
  switch (kind) {
    case MoveKind::DomE: {
      if (query_.productive_only && !list_extensions(g, f, 1).empty()) return;
      auto hs = extensions(g, compose(f, cfg_.m), cfg_.codomain());
      while (auto h = hs.next()) pending_.push_back(Move{kind, i, {f, std::move(*h)}});
      break;
    }
    case MoveKind::DomU:
      pairs(list_extensions(g, f), true);
      break;
    case MoveKind::CodE:
      if (query_.productive_only && !list_extensions(g, f, 1).empty()) return;
      pending_.push_back(Move{kind, i, {f}});
      break;
    case MoveKind::CodU:
      pairs(list_extensions(g, f), false);
      break;
  }
}

std::optional<Move> MoveStream::next() {
  for (;;) {
    if (!pending_.empty()) {
      Move mv = std::move(pending_.front());
      pending_.pop_front();
      return mv;
    }
    if (!outer_ && !open_phase()) return std::nullopt;
    auto f = outer_->next();
    if (!f) {
      outer_.reset();
      ++phase_;
      continue;
    }
    expand(*f);
  }
}

MoveStream enumerate_moves(const GameConfig& cfg, MoveQuery query) {
  return MoveStream(cfg, query);
}

AppliedMove apply_move_detailed(Workspace& ws, const GameConfig& cfg, const Move& mv) {
  auto problems = check_move(cfg, mv);
  if (!problems.empty())
    throw Error(ErrorCode::StaleMove, std::string(to_string(mv.kind)) + " move does not fit: " +
                                          problems.front().detail);
  const PsMorphism& g = cfg.model.conditions[mv.condition];
  const FinCat& base = cfg.model.base;
  const auto& w = mv.witnesses;
  const Presheaf& x = cfg.domain();
  const Presheaf& y = cfg.codomain();
  switch (mv.kind) {
    case MoveKind::DomE: {
      FinCat shape = FinCat::shape(ws, 3, {{0, 1}, {0, 2}});
      Diagram d = make_diagram(base, shape, {g.source(), x, g.target()},
                               {{3, w[0]}, {4, g}});
      auto colim = colimit(ws, d);
      auto m2 = factor_cocone(d, colim, {compose(w[0], cfg.m), cfg.m, w[1]}, y);
      return AppliedMove{GameConfig{cfg.model, m2}, colim.coprojections[1],
                         PsMorphism::identity(y)};
    }
    case MoveKind::DomU: {
      FinCat shape = FinCat::shape(ws, 2, {{0, 1}, {0, 1}});
      Diagram d = make_diagram(base, shape, {g.target(), x}, {{2, w[0]}, {3, w[1]}});
      auto colim = colimit(ws, d);
      auto m2 = factor_cocone(d, colim, {compose(w[0], cfg.m), cfg.m}, y);
      return AppliedMove{GameConfig{cfg.model, m2}, colim.coprojections[1],
                         PsMorphism::identity(y)};
    }
    case MoveKind::CodE: {
      auto po = pushout(ws, w[0], g);
      return AppliedMove{GameConfig{cfg.model, compose(cfg.m, po.from_f_target)},
                         PsMorphism::identity(x), po.from_f_target};
    }
    case MoveKind::CodU: {
      auto co = coequalizer_ps(ws, w[0], w[1]);
      return AppliedMove{GameConfig{cfg.model, compose(cfg.m, co.quotient)},
                         PsMorphism::identity(x), co.quotient};
    }
  }
  throw Error(ErrorCode::StaleMove, "unknown move kind");
}

GameConfig apply_move(Workspace& ws, const GameConfig& cfg, const Move& mv) {
  return apply_move_detailed(ws, cfg, mv).config;
}

Move transport(const Move& mv, const PsMorphism& domain_map, const PsMorphism& codomain_map) {
  Move out{mv.kind, mv.condition, {}};
  const auto& w = mv.witnesses;
  switch (mv.kind) {
    case MoveKind::DomE:
      out.witnesses = {compose(w.at(0), domain_map), compose(w.at(1), codomain_map)};
      break;
    case MoveKind::DomU:
      out.witnesses = {compose(w.at(0), domain_map), compose(w.at(1), domain_map)};
      break;
    case MoveKind::CodE:
      out.witnesses = {compose(w.at(0), codomain_map)};
      break;
    case MoveKind::CodU:
      out.witnesses = {compose(w.at(0), codomain_map), compose(w.at(1), codomain_map)};
      break;
  }
  return out;
}

Move rebase(const Move& mv, const GameConfig& cfg) {
  Move out{mv.kind, mv.condition, {}};
  for (std::size_t i = 0; i < mv.witnesses.size(); ++i) {
    const PsMorphism& w = mv.witnesses[i];
    bool on_domain = mv.kind == MoveKind::DomU || (mv.kind == MoveKind::DomE && i == 0);
    const Presheaf& target = on_domain ? cfg.domain() : cfg.codomain();
    if (!(w.source().base() == target.base()))
      throw Error(ErrorCode::StaleMove, "witness lives over another base");
    std::vector<FinFun> comps;
    for (Pos o = 0; o < target.base().object_count(); ++o) {
      auto images = w.at(o).images();
      for (Pos p : images)
        if (p >= target.at(o).size())
          throw Error(ErrorCode::StaleMove, "witness does not fit the configuration");
      comps.emplace_back(w.source().at(o), target.at(o), std::vector<Pos>(images.begin(), images.end()));
    }
    out.witnesses.emplace_back(w.source(), target, std::move(comps));
  }
  return out;
}

ReplayResult replay(Workspace& ws, const Trace& trace) {
  ReplayResult out;
  out.final_config = trace.initial;
  for (const auto& step : trace.steps) {
    try {
      out.final_config = apply_move(ws, out.final_config, rebase(step.move, out.final_config));
    } catch (const Error& e) {
      out.ok = false;
      out.message = "step " + std::to_string(out.steps_replayed + 1) + ": " + e.what();
      return out;
    }
    std::string d = digest(out.final_config);
    if (!step.digest.empty() && d != step.digest) {
      out.ok = false;
      out.message = "step " + std::to_string(out.steps_replayed + 1) + ": digest " + d +
                    " differs from recorded " + step.digest;
      return out;
    }
    ++out.steps_replayed;
  }
  return out;
}

JSets compute_j_sets(const Presheaf& x, const PresheafModel& model) {
  JSets j;
  for (std::size_t i = 0; i < model.conditions.size(); ++i) {
    const PsMorphism& g = model.conditions[i];
    NatTransStream fs(g.source(), x);
    while (auto f = fs.next()) {
      auto hs = list_extensions(g, *f);
      if (hs.empty()) {
        j.existence.push_back({i, std::move(*f)});
        continue;
      }
      for (std::size_t p = 0; p < hs.size(); ++p)
        for (std::size_t q = p + 1; q < hs.size(); ++q) j.uniqueness.push_back({i, hs[p], hs[q]});
    }
  }
  return j;
}

SaturationResult saturate(Workspace& ws, const Presheaf& x, const PresheafModel& model,
                          const JSets& j) {
  std::vector<Presheaf> nodes{x};
  std::vector<std::pair<Pos, Pos>> arrows;
  std::vector<PsMorphism> arrow_maps;
  for (const auto& e : j.existence) {
    const PsMorphism& g = model.conditions[e.condition];
    Pos a = static_cast<Pos>(nodes.size());
    nodes.push_back(g.source());
    nodes.push_back(g.target());
    arrows.emplace_back(a, 0);
    arrow_maps.push_back(e.f);
    arrows.emplace_back(a, a + 1);
    arrow_maps.push_back(g);
  }
  for (const auto& u : j.uniqueness) {
    Pos b = static_cast<Pos>(nodes.size());
    nodes.push_back(model.conditions[u.condition].target());
    arrows.emplace_back(b, 0);
    arrow_maps.push_back(u.h);
    arrows.emplace_back(b, 0);
    arrow_maps.push_back(u.h2);
  }
  const Pos n = static_cast<Pos>(nodes.size());
  FinCat shape = FinCat::shape(ws, n, arrows);
  std::map<Pos, PsMorphism> edges;
  for (Pos k = 0; k < arrow_maps.size(); ++k) edges.emplace(n + k, arrow_maps[k]);
  Diagram d = make_diagram(model.base, shape, std::move(nodes), edges);
  auto colim = colimit(ws, d);
  return SaturationResult{colim.value, colim.coprojections[0], j.existence.size(),
                          j.uniqueness.size()};
}

SaturationResult saturation_step(Workspace& ws, const Presheaf& x, const PresheafModel& model) {
  return saturate(ws, x, model, compute_j_sets(x, model));
}

ReflectOutcome reflect(Workspace& ws, const Presheaf& x, const PresheafModel& model,
                       std::size_t max_steps) {
  ReflectOutcome out;
  out.result = x;
  out.unit = PsMorphism::identity(x);
  for (std::size_t i = 0;; ++i) {
    JSets j = compute_j_sets(out.result, model);
    if (j.empty()) {
      out.status = ReflectStatus::Converged;
      out.steps_used = i;
      return out;
    }
    if (i == max_steps) {
      out.status = ReflectStatus::BudgetExhausted;
      out.steps_used = i;
      return out;
    }
    auto step = saturate(ws, out.result, model, j);
    out.unit = compose(out.unit, step.step);
    out.result = step.value;
  }
}

namespace {

bool existential(MoveKind k) { return k == MoveKind::DomE || k == MoveKind::CodE; }

// Applies the moves of `batch` in order, transporting witnesses along the maps
// produced so far. Returns the number of moves applied; stops early on a win.
std::size_t apply_batch(Workspace& ws, GameConfig& cur, Trace& trace,
                        const std::vector<Move>& batch, bool& won) {
  PsMorphism dx = PsMorphism::identity(cur.domain());
  PsMorphism dy = PsMorphism::identity(cur.codomain());
  std::size_t applied = 0;
  for (const auto& mv : batch) {
    Move t = applied == 0 ? mv : transport(mv, dx, dy);
    if (!check_move(cur, t).empty()) continue;
    if (existential(t.kind) && is_redundant_existential(cur, t)) continue;
    auto step = apply_move_detailed(ws, cur, t);
    dx = compose(dx, step.domain_map);
    dy = compose(dy, step.codomain_map);
    cur = std::move(step.config);
    trace.steps.push_back({std::move(t), digest(cur)});
    ++applied;
    if (is_iso(cur.m)) {
      won = true;
      return applied;
    }
  }
  return applied;
}

std::vector<Move> collect(const GameConfig& cfg, MoveKind kind, std::optional<std::size_t> cond) {
  std::vector<Move> out;
  MoveStream s(cfg, MoveQuery{kind, cond, existential(kind)});
  while (auto mv = s.next()) out.push_back(std::move(*mv));
  return out;
}

PlayOutcome play_greedy(Workspace& ws, const GameConfig& cfg, const PlayOptions& opt) {
  PlayOutcome out;
  out.trace.initial = cfg;
  GameConfig cur = cfg;
  bool won = is_iso(cur.m);
  bool stalled = false;
  while (!won && out.rounds < opt.budget) {
    ++out.rounds;
    std::size_t applied = 0;
    for (MoveKind k : opt.kinds) {
      applied += apply_batch(ws, cur, out.trace, collect(cur, k, opt.condition), won);
      if (won) break;
    }
    if (applied == 0) {
      stalled = true;
      break;
    }
  }
  bool all_kinds = opt.kinds.size() == 4 && !opt.condition;
  out.reflected = !won && stalled && all_kinds;
  out.status = won ? PlayStatus::Won : PlayStatus::Inconclusive;
  out.final_config = std::move(cur);
  return out;
}

PlayOutcome play_exhaustive(Workspace& ws, const GameConfig& cfg, const PlayOptions& opt) {
  PlayOutcome out;
  out.trace.initial = cfg;
  GameConfig cur = cfg;
  bool won = is_iso(cur.m);
  auto side_moves = [&](MoveKind e, MoveKind u) {
    std::vector<Move> batch = collect(cur, e, opt.condition);
    for (auto& mv : collect(cur, u, opt.condition)) batch.push_back(std::move(mv));
    return batch;
  };
  while (!won && out.rounds < opt.budget) {
    std::vector<Move> cod = side_moves(MoveKind::CodE, MoveKind::CodU);
    std::vector<Move> dom;
    if (cod.empty() || opt.schedule == Schedule::Interleaved)
      dom = side_moves(MoveKind::DomE, MoveKind::DomU);
    if (cod.empty() && dom.empty()) {
      out.reflected = !opt.condition;
      break;
    }
    ++out.rounds;
    if (!cod.empty()) apply_batch(ws, cur, out.trace, cod, won);
    if (!won && !dom.empty()) {
      if (opt.schedule == Schedule::Interleaved && !cod.empty())
        dom = side_moves(MoveKind::DomE, MoveKind::DomU);
      apply_batch(ws, cur, out.trace, dom, won);
    }
  }
  out.status = won ? PlayStatus::Won : PlayStatus::Inconclusive;
  out.final_config = std::move(cur);
  return out;
}

}  // namespace

PlayOutcome auto_play(Workspace& ws, const GameConfig& cfg, const PlayOptions& options) {
  return options.strategy == Strategy::Greedy ? play_greedy(ws, cfg, options)
                                              : play_exhaustive(ws, cfg, options);
}

}  // namespace lfp
