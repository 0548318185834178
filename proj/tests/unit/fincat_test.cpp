#include <doctest.h>

#include <filesystem>
#include <functional>

#include "lfp/fincat.hpp"
#include "lfp/io.hpp"
#include "lfp/presheaf.hpp"

using namespace lfp;

namespace {

const std::filesystem::path kFixtures = LFP_FIXTURE_DIR;

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::ParseError;
}

CatPresentation loop_presentation() {
  CatPresentation p;
  p.objects = {"x"};
  p.arrows = {{"e", "x", "x"}};
  return p;
}

}  // namespace

TEST_CASE("C_cat completes to 17 morphisms with shortlex names") {
  Workspace ws;
  Loader loader(ws);
  FinCat c = loader.load_category(kFixtures / "cat.presentation");
  CHECK(validate_category(c).empty());
  CHECK(c.object_count() == 3);
  CHECK(c.morphism_count() == 17);
  for (const char* name : {"1_o", "1_m", "1_p", "src", "tgt", "id", "l", "r", "comp", "src;l",
                           "src;r", "tgt;r", "id;src", "id;tgt", "id;src;l", "id;src;r",
                           "id;tgt;r"})
    CHECK_MESSAGE(c.find_morphism(name).has_value(), name);
  CHECK_FALSE(c.find_morphism("tgt;l"));

  const Pos src = *c.find_morphism("src"), tgt = *c.find_morphism("tgt"),
            id = *c.find_morphism("id"), l = *c.find_morphism("l"), r = *c.find_morphism("r"),
            comp = *c.find_morphism("comp");
  CHECK(c.comp(src, id) == c.id(*c.find_object("o")));
  CHECK(c.comp(src, comp) == c.comp(src, l));
  CHECK(c.comp(tgt, comp) == c.comp(tgt, r));
  CHECK(c.comp(tgt, l) == c.comp(src, r));
  CHECK(c.morphism_name(c.comp(tgt, l)) == "src;r");
  CHECK(code_of([&] { c.comp(l, src); }) == ErrorCode::BoundaryMismatch);
}

TEST_CASE("hom sets of C_cat") {
  Workspace ws;
  Loader loader(ws);
  FinCat c = loader.load_category(kFixtures / "cat.presentation");
  const Pos o = *c.find_object("o"), m = *c.find_object("m"), p = *c.find_object("p");
  CHECK(hom_positions(c, o, m).size() == 2);
  CHECK(hom_positions(c, m, m).size() == 3);
  CHECK(hom_positions(c, m, o).size() == 1);
  CHECK(hom_positions(c, o, p).size() == 3);
  CHECK(hom_positions(c, m, p).size() == 6);
  CHECK(hom_positions(c, p, m).empty());
  std::size_t total = 0;
  for (Pos a = 0; a < 3; ++a)
    for (Pos b = 0; b < 3; ++b) total += hom_positions(c, a, b).size();
  CHECK(total == c.morphism_count());
}

TEST_CASE("representables are hom functors") {
  Workspace ws;
  Loader loader(ws);
  FinCat c = loader.load_category(kFixtures / "cat.presentation");
  for (Pos b = 0; b < c.object_count(); ++b) {
    Presheaf y = yoneda(c, b);
    CHECK(validate_presheaf(y).empty());
    for (Pos a = 0; a < c.object_count(); ++a) CHECK(y.size_at(a) == hom_positions(c, a, b).size());
  }
  Presheaf yo = yoneda(c, *c.find_object("o"));
  CHECK(yo.sizes() == std::vector<std::size_t>{1, 1, 0});
}

TEST_CASE("presentation completion reports bad input") {
  Workspace ws;
  CHECK(code_of([&] { from_presentation(ws, loop_presentation(), 4); }) == ErrorCode::BoundExceeded);

  CatPresentation idem = loop_presentation();
  idem.relations.push_back({{{"e", "e"}, ""}, {{"e"}, ""}});
  FinCat c = from_presentation(ws, idem, 2);
  CHECK(c.morphism_count() == 2);
  CHECK(validate_category(c).empty());

  CatPresentation bad = loop_presentation();
  bad.relations.push_back({{{"e"}, ""}, {{"nope"}, ""}});
  CHECK(code_of([&] { from_presentation(ws, bad, 2); }) == ErrorCode::IllFormedRelation);

  CatPresentation unknown = loop_presentation();
  unknown.arrows.push_back({"f", "x", "y"});
  CHECK(code_of([&] { from_presentation(ws, unknown, 2); }) == ErrorCode::UnknownObject);
}

TEST_CASE("relations with mismatched boundaries are ill formed") {
  Workspace ws;
  CatPresentation p;
  p.objects = {"a", "b"};
  p.arrows = {{"f", "a", "b"}, {"g", "b", "a"}};
  p.relations.push_back({{{"f"}, ""}, {{"g"}, ""}});
  CHECK(code_of([&] { from_presentation(ws, p, 3); }) == ErrorCode::IllFormedRelation);
}

TEST_CASE("validate_category catches a broken unit law") {
  Workspace ws;
  FinCat::Table t;
  t.objects = {"x"};
  t.morphisms = {"1", "e"};
  t.src = {0, 0};
  t.tgt = {0, 0};
  t.id = {0};
  t.comp = {{0, 0, 0}, {0, 1, 0}, {1, 0, 1}, {1, 1, 1}};
  FinCat c = FinCat::from_table(ws, t);
  CHECK_FALSE(validate_category(c).empty());

  t.comp[1] = {0, 1, 1};
  CHECK(validate_category(FinCat::from_table(ws, t)).empty());

  t.comp.pop_back();
  CHECK(code_of([&] { FinCat::from_table(ws, t); }) == ErrorCode::ValidationError);
}

TEST_CASE("shapes and the terminal category") {
  Workspace ws;
  FinCat span = FinCat::shape(ws, 3, {{0, 1}, {0, 2}});
  CHECK(span.morphism_count() == 5);
  CHECK(validate_category(span).empty());
  CHECK(span.src(3) == 0);
  CHECK(span.tgt(4) == 2);
  FinCat one = FinCat::terminal(ws);
  CHECK(one.object_count() == 1);
  CHECK(one.morphism_count() == 1);
}
