#include <doctest.h>

#include <set>

#include "gen.hpp"
#include "lfp/finbase.hpp"

using namespace lfp;

TEST_CASE("fresh ids are distinct and keep their labels") {
  Workspace ws;
  ElemId a = ws.fresh("a");
  ElemId b = ws.fresh_like(a);
  CHECK(a != b);
  CHECK(ws.label(b) == "a");
  CHECK(ws.allocated() == 2);
}

TEST_CASE("finite sets are sorted and index by rank") {
  Workspace ws;
  ElemId a = ws.fresh(), b = ws.fresh(), c = ws.fresh();
  FinSet s({c, a, b});
  REQUIRE(s.size() == 3);
  CHECK(s[0] == a);
  CHECK(s.index_of(c) == Pos{2});
  CHECK_FALSE(s.contains(ElemId{999}));
}

TEST_CASE("composition is g after f and checks boundaries") {
  Workspace ws;
  FinSet s = gen::fresh_set(ws, 2, "s"), t = gen::fresh_set(ws, 3, "t"), u = gen::fresh_set(ws, 1, "u");
  FinFun f(s, t, {2, 0});
  FinFun g(t, u, {0, 0, 0});
  CHECK(compose(f, g).images()[1] == 0);
  CHECK(compose(identity(s), f) == f);
  CHECK_THROWS_AS(compose(g, f), Error);
  try {
    compose(g, f);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BoundaryMismatch);
  }
}

TEST_CASE("injective, surjective, bijective") {
  Workspace ws;
  FinSet s = gen::fresh_set(ws, 2, "s"), t = gen::fresh_set(ws, 2, "t");
  CHECK(is_bijection(FinFun(s, t, {1, 0})));
  FinFun c(s, t, {1, 1});
  CHECK_FALSE(is_injective(c));
  CHECK_FALSE(is_surjective(c));
  CHECK(is_surjective(FinFun(t, gen::fresh_set(ws, 1, "u"), {0, 0})));
}

TEST_CASE("function streams list |t|^|s| functions") {
  Workspace ws;
  gen::Rng rng(11);
  for (int i = 0; i < 20; ++i) {
    std::size_t n = gen::below(rng, 4), m = gen::below(rng, 4);
    auto stream = all_functions(gen::fresh_set(ws, n, "s"), gen::fresh_set(ws, m, "t"));
    std::size_t count = 0;
    while (stream.next()) ++count;
    std::size_t expected = 1;
    for (std::size_t k = 0; k < n; ++k) expected *= m;
    CHECK(count == expected);
  }
}

TEST_CASE("coproduct copies parts and copair restores the legs") {
  Workspace ws;
  std::vector<FinSet> parts{gen::fresh_set(ws, 2, "a"), gen::fresh_set(ws, 0, "b"),
                            gen::fresh_set(ws, 3, "c")};
  Coproduct sum = coproduct(ws, parts);
  CHECK(sum.sum.size() == 5);
  FinSet target = gen::fresh_set(ws, 2, "t");
  std::vector<FinFun> legs{FinFun(parts[0], target, {0, 1}), FinFun(parts[1], target, {}),
                           FinFun(parts[2], target, {1, 1, 0})};
  FinFun h = copair(sum, legs);
  for (std::size_t i = 0; i < parts.size(); ++i) CHECK(compose(sum.injections[i], h) == legs[i]);
}

TEST_CASE("coequalizer size matches an independent union-find") {
  Workspace ws;
  gen::Rng rng(12);
  for (int round = 0; round < 50; ++round) {
    std::size_t n = gen::below(rng, 4), m = 1 + gen::below(rng, 6);
    FinSet s = gen::fresh_set(ws, n, "s"), t = gen::fresh_set(ws, m, "t");
    std::vector<Pos> fi, gi;
    for (std::size_t k = 0; k < n; ++k) {
      fi.push_back(gen::below(rng, m));
      gi.push_back(gen::below(rng, m));
    }
    Coequalizer q = coequalizer(FinFun(s, t, fi), FinFun(s, t, gi));
    std::vector<std::size_t> parent(m);
    for (std::size_t k = 0; k < m; ++k) parent[k] = k;
    auto find = [&](std::size_t x) {
      while (parent[x] != x) x = parent[x];
      return x;
    };
    for (std::size_t k = 0; k < n; ++k) parent[find(fi[k])] = find(gi[k]);
    std::set<std::size_t> roots;
    for (std::size_t k = 0; k < m; ++k) roots.insert(find(k));
    CHECK(q.quotient_set.size() == roots.size());
    for (std::size_t k = 0; k < n; ++k) CHECK(q.quotient.at(fi[k]) == q.quotient.at(gi[k]));
  }
}
