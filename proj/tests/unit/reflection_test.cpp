#include <doctest.h>

#include <filesystem>
#include <set>

#include "gen.hpp"
#include "lfp/io.hpp"
#include "lfp/reflection.hpp"
#include "oracles.hpp"

using namespace lfp;

namespace {

const std::filesystem::path kFixtures = LFP_FIXTURE_DIR;

struct Setup {
  Workspace ws;
  Loader loader{ws};
  PresheafModel cat = loader.load_model(kFixtures / "cat.model");
  PresheafModel setset = loader.load_model(kFixtures / "setset.model");

  GameConfig times2(const std::string& cond) {
    return GameConfig{cat, loader.load_morphism(kFixtures / ("times2_" + cond + ".config"))};
  }
};

bool orthogonal_to_all(const Presheaf& x, const PresheafModel& model) {
  for (const auto& g : model.conditions)
    if (!oracle::orthogonal(x, g)) return false;
  return true;
}

}  // namespace

TEST_CASE("digests are positional and workspace independent") {
  Setup a, b;
  CHECK(digest(a.times2("g_lu")) == digest(b.times2("g_lu")));
  CHECK(digest(a.times2("g_lu")) != digest(a.times2("g_ru")));
  CHECK(digest(a.times2("g_lu")).size() == 16);
}

TEST_CASE("enumerated moves are legal and have distinct ids") {
  Setup s;
  GameConfig cfg = s.times2("g_lu");
  for (MoveKind kind : {MoveKind::DomE, MoveKind::DomU, MoveKind::CodE, MoveKind::CodU}) {
    MoveQuery q;
    q.kind = kind;
    auto stream = enumerate_moves(cfg, q);
    std::set<std::string> ids;
    std::size_t n = 0;
    while (auto mv = stream.next()) {
      CHECK(mv->kind == kind);
      CHECK(check_move(cfg, *mv).empty());
      ids.insert(move_id(cfg, *mv));
      if (++n == 40) break;
    }
    CHECK(ids.size() == n);
  }
}

TEST_CASE("productive filtering drops redundant existentials") {
  Setup s;
  GameConfig cfg = s.times2("g_lu");
  MoveQuery q;
  q.kind = MoveKind::DomE;
  q.productive_only = true;
  auto stream = enumerate_moves(cfg, q);
  std::size_t n = 0;
  while (auto mv = stream.next()) {
    CHECK_FALSE(is_redundant_existential(cfg, *mv));
    ++n;
  }
  CHECK(n > 0);
}

TEST_CASE("a move from another configuration is stale") {
  Setup s;
  GameConfig lu = s.times2("g_lu"), ru = s.times2("g_ru");
  MoveQuery q;
  q.kind = MoveKind::DomE;
  auto mv = enumerate_moves(lu, q).next();
  REQUIRE(mv);
  try {
    apply_move(s.ws, ru, *mv);
    FAIL("expected StaleMove");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::StaleMove);
  }
}

TEST_CASE("DomE moves on g_lu win in three steps and replay") {
  Setup s;
  PlayOptions opts;
  opts.kinds = {MoveKind::DomE};
  opts.condition = 1;
  PlayOutcome out = auto_play(s.ws, s.times2("g_lu"), opts);
  REQUIRE(out.status == PlayStatus::Won);
  CHECK(out.trace.steps.size() == 3);
  CHECK(is_iso(out.final_config.m));
  ReplayResult r = replay(s.ws, out.trace);
  CHECK(r.ok);
  CHECK(digest(r.final_config) == digest(out.final_config));

  Trace tampered = out.trace;
  tampered.steps[1].digest = "0000000000000000";
  ReplayResult bad = replay(s.ws, tampered);
  CHECK_FALSE(bad.ok);
  CHECK(bad.steps_replayed == 1);
}

TEST_CASE("the bundled trace replays to a won position") {
  Setup s;
  Trace t = s.loader.load_trace(kFixtures / "times2_g_lu.trace");
  ReplayResult r = replay(s.ws, t);
  CHECK(r.ok);
  CHECK(r.steps_replayed == 3);
  CHECK(is_iso(r.final_config.m));
}

TEST_CASE("greedy stalls on g_p once both ends are reflected") {
  Setup s;
  PlayOutcome out = auto_play(s.ws, s.times2("g_p"), PlayOptions{});
  CHECK(out.status == PlayStatus::Inconclusive);
  CHECK(out.reflected);
  CHECK_FALSE(is_iso(out.final_config.m));
  for (const auto& g : s.cat.conditions) {
    CHECK(check_orthogonal(out.final_config.domain(), g).orthogonal);
    CHECK(check_orthogonal(out.final_config.codomain(), g).orthogonal);
  }
}

TEST_CASE("J-sets are empty exactly for orthogonal presheaves") {
  Setup s;
  gen::Rng rng(41);
  for (const PresheafModel* model : {&s.setset, &s.cat})
    for (int i = 0; i < 20; ++i) {
      Presheaf x = gen::presheaf(s.ws, rng, model->base, 2);
      JSets j = compute_j_sets(x, *model);
      CHECK(j.empty() == orthogonal_to_all(x, *model));
      for (const auto& u : j.uniqueness) CHECK_FALSE(u.h == u.h2);
    }
}

TEST_CASE("reflection is universal among orthogonal presheaves") {
  Setup s;
  gen::Rng rng(42);
  for (int i = 0; i < 15; ++i) {
    Presheaf x = gen::presheaf(s.ws, rng, s.setset.base, 2);
    ReflectOutcome r = reflect(s.ws, x, s.setset, 10);
    REQUIRE(r.status == ReflectStatus::Converged);
    CHECK(validate_morphism(r.unit).empty());
    CHECK(orthogonal_to_all(r.result, s.setset));

    Presheaf z = reflect(s.ws, gen::presheaf(s.ws, rng, s.setset.base, 2), s.setset, 10).result;
    auto maps = enumerate_nat_trans(x, z);
    while (auto f = maps.next()) CHECK(list_extensions(r.unit, *f).size() == 1);

    ReflectOutcome again = reflect(s.ws, r.result, s.setset, 10);
    CHECK(again.steps_used == 0);
    CHECK(is_iso(again.unit));
  }
}

TEST_CASE("reflection over C_cat is truncated by the step budget") {
  Setup s;
  ReflectOutcome lone = reflect(s.ws, yoneda(s.cat.base, Pos{0}), s.cat, 3);
  CHECK(lone.status == ReflectStatus::BudgetExhausted);
  CHECK(lone.steps_used == 3);
  CHECK(validate_morphism(lone.unit).empty());

  ReflectOutcome looping = reflect(s.ws, s.times2("g_p").codomain(), s.cat, 1);
  CHECK(looping.status == ReflectStatus::BudgetExhausted);
  CHECK(looping.result.total_size() > s.times2("g_p").codomain().total_size());
}

TEST_CASE("the unit is the composite of the saturation steps") {
  Setup s;
  gen::Rng rng(43);
  for (int i = 0; i < 15; ++i) {
    Presheaf x = gen::presheaf(s.ws, rng, s.setset.base, 2);
    ReflectOutcome r = reflect(s.ws, x, s.setset, 10);
    REQUIRE(r.status == ReflectStatus::Converged);
    Presheaf cur = x;
    PsMorphism unit = PsMorphism::identity(x);
    std::size_t steps = 0;
    while (!compute_j_sets(cur, s.setset).empty()) {
      SaturationResult st = saturation_step(s.ws, cur, s.setset);
      unit = compose(unit, st.step);
      cur = st.value;
      ++steps;
    }
    CHECK(steps == r.steps_used);
    CHECK(cur.sizes() == r.result.sizes());
    CHECK(oracle::components_of(unit) == oracle::components_of(r.unit));
  }
}

namespace {

// L(m): LX -> LY, the unique extension of η_Y∘m along η_X.
PsMorphism reflected(Workspace& ws, const PsMorphism& m, const PresheafModel& model) {
  ReflectOutcome rx = reflect(ws, m.source(), model, 10), ry = reflect(ws, m.target(), model, 10);
  REQUIRE(rx.status == ReflectStatus::Converged);
  REQUIRE(ry.status == ReflectStatus::Converged);
  auto ext = list_extensions(rx.unit, compose(m, ry.unit), 2);
  REQUIRE(ext.size() == 1);
  return ext[0];
}

}  // namespace

TEST_CASE("moves preserve whether the reflected morphism is an isomorphism") {
  Setup s;
  gen::Rng rng(44);
  int moves = 0, isos = 0;
  for (int i = 0; i < 40 && moves < 30; ++i) {
    Presheaf x = gen::presheaf(s.ws, rng, s.setset.base, 2);
    Presheaf y = gen::presheaf(s.ws, rng, s.setset.base, 2);
    auto m = gen::some_morphism(rng, x, y);
    if (!m) continue;
    GameConfig cfg{s.setset, *m};
    std::vector<Move> legal;
    auto stream = enumerate_moves(cfg);
    while (auto mv = stream.next())
      if (legal.push_back(*mv); legal.size() == 50) break;
    if (legal.empty()) continue;
    const Move& mv = legal[gen::below(rng, legal.size())];
    GameConfig next = apply_move(s.ws, cfg, mv);
    const bool before = is_iso(reflected(s.ws, cfg.m, s.setset));
    CHECK(before == is_iso(reflected(s.ws, next.m, s.setset)));
    isos += before;
    ++moves;
  }
  CHECK(moves >= 20);
  CHECK(isos > 0);
}

TEST_CASE("a tiny budget is reported") {
  Setup s;
  ReflectOutcome r = reflect(s.ws, s.cat.conditions[0].source(), s.cat, 0);
  CHECK(r.status == ReflectStatus::BudgetExhausted);
}
