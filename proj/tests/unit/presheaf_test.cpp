#include <doctest.h>

#include <filesystem>
#include <set>

#include "gen.hpp"
#include "lfp/io.hpp"
#include "oracles.hpp"

using namespace lfp;

namespace {

const std::filesystem::path kFixtures = LFP_FIXTURE_DIR;

struct Bases {
  Workspace ws;
  Loader loader{ws};
  PresheafModel cat = loader.load_model(kFixtures / "cat.model");
  PresheafModel setset = loader.load_model(kFixtures / "setset.model");
};

std::set<oracle::Components> as_set(NatTransStream s) {
  std::set<oracle::Components> out;
  while (auto m = s.next()) out.insert(oracle::components_of(*m));
  return out;
}

}  // namespace

TEST_CASE("enumeration agrees with brute force on random pairs") {
  Bases b;
  gen::Rng rng(21);
  for (const FinCat* base : {&b.cat.base, &b.setset.base}) {
    for (int i = 0; i < 25; ++i) {
      Presheaf x = gen::presheaf(b.ws, rng, *base, 3);
      Presheaf y = gen::presheaf(b.ws, rng, *base, 3);
      std::set<oracle::Components> expected;
      oracle::each_nat_trans(x, y, [&](const oracle::Components& a) {
        expected.insert(a);
        return true;
      });
      CHECK(as_set(enumerate_nat_trans(x, y)) == expected);
      CHECK(count_nat_trans(x, y) == expected.size());
    }
  }
}

TEST_CASE("enumerated families are natural and distinct") {
  Bases b;
  gen::Rng rng(22);
  for (int i = 0; i < 15; ++i) {
    Presheaf x = gen::presheaf(b.ws, rng, b.cat.base, 3);
    Presheaf y = gen::presheaf(b.ws, rng, b.cat.base, 3);
    std::size_t n = 0;
    auto s = enumerate_nat_trans(x, y);
    while (auto m = s.next()) {
      CHECK(validate_morphism(*m).empty());
      ++n;
    }
    CHECK(as_set(enumerate_nat_trans(x, y)).size() == n);
  }
}

TEST_CASE("relabelled copies are isomorphic") {
  Bases b;
  gen::Rng rng(23);
  for (int i = 0; i < 20; ++i) {
    Presheaf x = gen::presheaf(b.ws, rng, b.cat.base, 3);
    auto [y, iso] = gen::relabel(b.ws, rng, x);
    CHECK(validate_presheaf(y).empty());
    CHECK(validate_morphism(iso).empty());
    CHECK(is_iso(iso));
    CHECK(compose(iso, PsMorphism::identity(y)) == iso);
    Presheaf z = gen::presheaf(b.ws, rng, b.cat.base, 2);
    CHECK(count_nat_trans(x, z) == count_nat_trans(y, z));
    CHECK(count_nat_trans(z, x) == count_nat_trans(z, y));
  }
}

TEST_CASE("actions must run from the target of the morphism") {
  Bases b;
  const FinCat& c = b.setset.base;
  std::vector<FinSet> sets;
  for (Pos o = 0; o < c.object_count(); ++o) sets.push_back(gen::fresh_set(b.ws, 1, "x"));
  std::map<Pos, FinFun> acts;
  for (Pos f : c.generators()) acts.emplace(f, FinFun(sets[c.src(f)], sets[c.tgt(f)], {0}));
  try {
    Presheaf::from_generators(c, sets, acts);
    FAIL("expected BoundaryMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BoundaryMismatch);
  }
}

TEST_CASE("product sizes are pointwise products") {
  Bases b;
  gen::Rng rng(24);
  for (int i = 0; i < 20; ++i) {
    Presheaf x = gen::presheaf(b.ws, rng, b.cat.base, 3);
    Presheaf y = gen::presheaf(b.ws, rng, b.cat.base, 3);
    ProductResult p = product(b.ws, x, y);
    CHECK(validate_presheaf(p.value).empty());
    for (Pos c = 0; c < 3; ++c) CHECK(p.value.size_at(c) == x.size_at(c) * y.size_at(c));
    CHECK(validate_morphism(p.first).empty());
    CHECK(validate_morphism(p.second).empty());
  }
}

TEST_CASE("tensor copies and coproduct sizes") {
  Bases b;
  Presheaf y = yoneda(b.cat.base, Pos{1});
  TensorResult t = tensor(b.ws, y, 3);
  CHECK(t.value.sizes() == std::vector<std::size_t>{6, 9, 0});
  CHECK(t.coprojections.size() == 3);
  ColimitResult s = coproduct(b.ws, y, yoneda(b.cat.base, Pos{0}));
  CHECK(s.value.sizes() == std::vector<std::size_t>{3, 4, 0});
}

TEST_CASE("pushout of a span of representables") {
  Bases b;
  const FinCat& c = b.cat.base;
  Presheaf yo = yoneda(c, Pos{0});
  Presheaf ym = yoneda(c, Pos{1});
  Pos src = *c.find_morphism("src"), tgt = *c.find_morphism("tgt");
  auto pick = [&](Pos f) { return gen::element_map(ym, 0, *ym.at(0).index_of(c.morphisms()[f])); };
  PushoutResult po = pushout(b.ws, pick(src), pick(tgt));
  CHECK(validate_presheaf(po.value).empty());
  CHECK(po.value.size_at(0) == 3);
  CHECK(po.value.size_at(1) == 5);
}

TEST_CASE("factor_cocone rejects legs that do not commute") {
  Bases b;
  const FinCat& c = b.setset.base;
  Presheaf x = yoneda(c, Pos{0});
  FinCat shape = FinCat::shape(b.ws, 2, {{0, 1}});
  Diagram d = make_diagram(c, shape, {x, x}, {{Pos{2}, PsMorphism::identity(x)}});
  CHECK(validate_diagram(d).empty());
  ColimitResult colim = colimit(b.ws, d);
  ColimitResult cp = coproduct(b.ws, x, x);
  try {
    factor_cocone(d, colim, cp.coprojections, cp.value);
    FAIL("expected NotACocone");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotACocone);
  }
}

TEST_CASE("orthogonality agrees with brute force") {
  Bases b;
  gen::Rng rng(25);
  for (const PresheafModel* model : {&b.cat, &b.setset})
    for (int i = 0; i < 15; ++i) {
      Presheaf x = gen::presheaf(b.ws, rng, model->base, 2);
      for (const auto& g : model->conditions) {
        OrthogonalityResult r = check_orthogonal(x, g);
        CHECK(r.orthogonal == oracle::orthogonal(x, g));
        if (!r.orthogonal) {
          REQUIRE(r.witness);
          CHECK(r.liftings != 1);
          CHECK(list_extensions(g, *r.witness).size() == r.liftings);
        }
      }
    }
}

TEST_CASE("a set is orthogonal to g_p only when it is a product") {
  Bases b;
  const PsMorphism& g = b.setset.conditions[0];
  CHECK(check_orthogonal(g.target(), g).orthogonal);
  CHECK_FALSE(check_orthogonal(g.source(), g).orthogonal);
}
