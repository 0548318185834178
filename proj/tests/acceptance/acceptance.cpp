// Acceptance run: one line per criterion, nonzero exit when any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

#include "../support/gen.hpp"
#include "../support/oracles.hpp"
#include "lfp/io.hpp"

using namespace lfp;

namespace {

const std::filesystem::path kFixtures = LFP_FIXTURE_DIR;

struct Check {
  bool pass = true;
  std::ostringstream note;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      if (pass) note << "failed: ";
      else note << "; ";
      note << what;
      pass = false;
    }
  }
};

struct Bundle {
  Workspace ws;
  Loader loader{ws};
  PresheafModel set, setset, cat;
  KanModel fob, fprod, times2;

  Bundle() {
    set = loader.load_model(kFixtures / "set.model");
    setset = loader.load_model(kFixtures / "setset.model");
    cat = loader.load_model(kFixtures / "cat.model");
    fob = loader.load_kan_model(kFixtures / "fob.kan");
    fprod = loader.load_kan_model(kFixtures / "fprod.kan");
    times2 = loader.load_kan_model(kFixtures / "times2.kan");
  }

  std::vector<const PresheafModel*> models() const { return {&set, &setset, &cat}; }

  GameConfig times2_config(const std::string& cond) {
    return GameConfig{cat, loader.load_morphism(kFixtures / ("times2_" + cond + ".config"))};
  }
};

const ConditionVerdict* verdict(const CriterionReport& r, const std::string& name) {
  for (const auto& v : r.verdicts)
    if (v.condition_name == name) return &v;
  return nullptr;
}

void a1(Bundle& b, Check& ck) {
  CriterionReport r = check_left_adjoint(b.ws, b.fob, b.cat, b.set);
  ck.expect(r.summary == Summary::CriterionHolds, "summary " + std::string(to_string(r.summary)));
  const std::pair<const char*, std::size_t> expected[] = {
      {"g_p", 3}, {"g_lu", 2}, {"g_ru", 2}, {"g_ass", 4}};
  for (std::size_t i = 0; i < 4; ++i) {
    const auto [name, n] = expected[i];
    const ConditionVerdict* v = verdict(r, name);
    ck.expect(v != nullptr, std::string("no verdict for ") + name);
    if (!v) continue;
    ck.expect(v->status == VerdictStatus::IsoAlready, std::string(name) + " not IsoAlready");
    ck.expect(v->source_sizes == std::vector<std::size_t>{n} &&
                  v->target_sizes == std::vector<std::size_t>{n},
              std::string(name) + " sizes");
    const PsMorphism& image = v->lan_image;
    ck.expect(is_bijection(image.at(0)) && image.source().size_at(0) == n,
              std::string(name) + " image is not a bijection of size " + std::to_string(n));
  }
  ck.note << "F_Ob images 3/2/2/4, all bijections";
}

void a2(Bundle& b, Check& ck) {
  CriterionReport r = check_left_adjoint(b.ws, b.fprod, b.setset, b.set);
  ck.expect(r.summary == Summary::CriterionFails, "summary " + std::string(to_string(r.summary)));
  const ConditionVerdict* v = verdict(r, "g_p");
  ck.expect(v && v->source_sizes == std::vector<std::size_t>{0} &&
                v->target_sizes == std::vector<std::size_t>{1},
            "g_p image is not 0 -> 1");
  ck.note << "F_prod on g_p: 0 -> 1, CriterionFails";
}

void a3(Bundle& b, Check& ck) {
  GameConfig lu = b.times2_config("g_lu");
  const Pos m = *b.cat.base.find_object("m");
  std::vector<std::size_t> fiber(lu.codomain().size_at(m), 0);
  for (Pos e = 0; e < lu.domain().size_at(m); ++e) ++fiber[lu.m.at(m).at(e)];
  const auto pairs = std::count(fiber.begin(), fiber.end(), std::size_t{2});
  ck.expect(pairs == 3, "g_lu has " + std::to_string(pairs) + " fibers of size 2 at m");

  PlayOptions dome;
  dome.kinds = {MoveKind::DomE};
  dome.condition = 1;
  PlayOutcome won = auto_play(b.ws, lu, dome);
  ck.expect(won.status == PlayStatus::Won && won.trace.steps.size() == 3,
            "DomE-only g_lu play: " + std::string(to_string(won.status)) + " in " +
                std::to_string(won.trace.steps.size()) + " moves");

  for (const char* name : {"g_ru", "g_ass"}) {
    PlayOutcome o = auto_play(b.ws, b.times2_config(name), PlayOptions{});
    ck.expect(o.status == PlayStatus::Won, std::string(name) + " not won within the default budget");
  }

  PlayOptions fifty;
  fifty.budget = 50;
  PlayOutcome p = auto_play(b.ws, b.times2_config("g_p"), fifty);
  ck.expect(p.status == PlayStatus::Inconclusive && p.rounds <= 50,
            "g_p: " + std::string(to_string(p.status)));
  ck.note << "g_lu: 3 fibers of size 2, won in 3 DomE moves; g_ru, g_ass won; g_p Inconclusive after "
          << p.rounds << " rounds";
}

void a4(Bundle& b, Check& ck) {
  gen::Rng rng(4);
  std::size_t samples = 0, elements = 0;
  for (const PresheafModel* model : b.models()) {
    const FinCat& base = model->base;
    std::vector<Presheaf> xs;
    for (int i = 0; i < 20; ++i) xs.push_back(gen::presheaf(b.ws, rng, base, 3));
    std::vector<Presheaf> bundled;
    for (const auto& g : model->conditions) {
      bundled.push_back(g.source());
      bundled.push_back(g.target());
    }
    for (const auto& x : xs) elements += x.total_size();
    for (const auto& x : xs)
      for (Pos c = 0; c < base.object_count(); ++c) {
        Presheaf yc = yoneda(base, c);
        ck.expect(count_nat_trans(yc, x) == x.size_at(c), "count law");
        ck.expect(oracle::count_nat_trans(yc, x) == x.size_at(c), "brute-force count law");
        ++samples;
      }
    for (const auto& x : bundled)
      for (Pos c = 0; c < base.object_count(); ++c) {
        ck.expect(count_nat_trans(yoneda(base, c), x) == x.size_at(c), "count law on bundled");
        ++samples;
      }
  }
  ck.note << samples << " (presheaf, object) pairs over 3 bases, 20 random presheaves each, "
          << elements << " elements in total";
}

PsMorphism density_comparison(const KanModel& y, const LanResult& lan, const Presheaf& x) {
  const FinCat& base = x.base();
  std::vector<FinFun> comps;
  for (Pos d = 0; d < base.object_count(); ++d) {
    std::vector<Pos> im;
    for (Pos cls = 0; cls < lan.value().size_at(d); ++cls) {
      LanProvenance p = lan.provenance(d, cls);
      Pos f = base.morphism_pos(y.objects[p.c].at(d)[p.u]);
      im.push_back(x.action(f).at(p.x));
    }
    comps.emplace_back(lan.value().at(d), x.at(d), std::move(im));
  }
  return PsMorphism(lan.value(), x, std::move(comps));
}

PsMorphism counit_comparison(const KanModel& f, const LanResult& lan, Pos c) {
  Presheaf yc = yoneda(f.source, c);
  std::vector<FinFun> comps;
  for (Pos d = 0; d < f.target.object_count(); ++d) {
    std::vector<Pos> im;
    for (Pos cls = 0; cls < lan.value().size_at(d); ++cls) {
      LanProvenance p = lan.provenance(d, cls);
      Pos h = f.source.morphism_pos(yc.at(p.c)[p.x]);
      im.push_back(f.morphisms[h].at(d).at(p.u));
    }
    comps.emplace_back(lan.value().at(d), f.objects[c].at(d), std::move(im));
  }
  return PsMorphism(lan.value(), f.objects[c], std::move(comps));
}

void a5(Bundle& b, Check& ck) {
  gen::Rng rng(5);
  std::size_t dens = 0, counits = 0;
  for (const PresheafModel* model : b.models()) {
    KanModel y = yoneda_kan_model(model->base);
    for (int i = 0; i < 20; ++i) {
      Presheaf x = gen::presheaf(b.ws, rng, model->base, 3);
      LanResult lan = lan_apply(b.ws, y, x);
      PsMorphism cmp = density_comparison(y, lan, x);
      ck.expect(validate_morphism(cmp).empty() && is_iso(cmp), "density comparison is not an iso");
      ++dens;
    }
  }
  std::vector<KanModel> fs{b.fob, b.fprod, b.times2};
  for (const PresheafModel* model : b.models()) {
    fs.push_back(yoneda_kan_model(model->base));
    for (Pos c = 0; c < model->base.object_count(); ++c)
      fs.push_back(product_kan_model(b.ws, *model, c));
  }
  for (const auto& f : fs)
    for (Pos c = 0; c < f.source.object_count(); ++c) {
      LanResult lan = lan_apply(b.ws, f, yoneda(f.source, c));
      PsMorphism cmp = counit_comparison(f, lan, c);
      ck.expect(validate_morphism(cmp).empty() && is_iso(cmp), "counit comparison is not an iso");
      ++counits;
    }
  ck.note << dens << " density isos, " << counits << " counit isos over " << fs.size()
          << " Kan models";
}

void a6(Bundle& b, Check& ck) {
  gen::Rng rng(6);
  const FinCat& base = b.setset.base;
  const Pos sl = *base.find_object("s_l"), sr = *base.find_object("s_r"),
            p = *base.find_object("p");
  const PsMorphism& g = b.setset.conditions[0];
  int n = 0;
  std::size_t nonempty_p = 0;
  for (; n < 24; ++n) {
    Presheaf x = gen::presheaf(b.ws, rng, base, 3);
    ck.expect(check_orthogonal(x, g).orthogonal == oracle::orthogonal(x, g),
              "orthogonality disagrees with brute force on the input");
    ReflectOutcome r = reflect(b.ws, x, b.setset, 10);
    ck.expect(r.status == ReflectStatus::Converged, "reflect did not converge");
    ck.expect(r.result.size_at(p) == x.size_at(sl) * x.size_at(sr), "|result(p)| is not the product");
    if (r.result.size_at(p) > 0) ++nonempty_p;
    const bool fast = check_orthogonal(r.result, g).orthogonal;
    ck.expect(fast, "result not orthogonal to g_p");
    ck.expect(fast == oracle::orthogonal(r.result, g), "brute-force orthogonality disagrees");
  }
  ck.note << n << " random presheaves over C_setset reflected (" << nonempty_p
          << " with nonempty p); |p| = |s_l|·|s_r|";
}

void a7(Bundle& b, Check& ck) {
  gen::Rng rng(7);
  int diagrams = 0, mediators = 0;
  while (diagrams < 60) {
    const PresheafModel& model = diagrams % 2 ? b.cat : b.setset;
    const FinCat& base = model.base;
    const std::size_t n = 1 + gen::below(rng, 3);
    std::vector<Presheaf> nodes;
    for (std::size_t i = 0; i < n; ++i) nodes.push_back(gen::presheaf(b.ws, rng, base, 3));
    std::vector<bool> is_source(n);
    for (std::size_t i = 0; i < n; ++i) is_source[i] = gen::below(rng, 2) == 0;
    std::vector<std::pair<Pos, Pos>> arrows;
    std::vector<PsMorphism> maps;
    for (Pos i = 0; i < n; ++i)
      for (Pos j = 0; j < n; ++j)
        if (is_source[i] && !is_source[j])
          for (std::size_t k = gen::below(rng, 3); k > 0; --k)
            if (auto m = gen::some_morphism(rng, nodes[i], nodes[j])) {
              arrows.emplace_back(i, j);
              maps.push_back(*m);
            }
    FinCat shape = FinCat::shape(b.ws, n, arrows);
    std::map<Pos, PsMorphism> edges;
    for (Pos k = 0; k < maps.size(); ++k) edges.emplace(static_cast<Pos>(n + k), maps[k]);
    Diagram d = make_diagram(base, shape, nodes, edges);
    ColimitResult colim = colimit(b.ws, d);
    for (Pos c = 0; c < base.object_count(); ++c) {
      std::vector<std::size_t> offset(n + 1, 0);
      for (std::size_t i = 0; i < n; ++i) offset[i + 1] = offset[i] + nodes[i].size_at(c);
      std::vector<std::pair<std::size_t, std::size_t>> pairs;
      for (std::size_t k = 0; k < arrows.size(); ++k) {
        auto [i, j] = arrows[k];
        for (Pos a = 0; a < nodes[i].size_at(c); ++a)
          pairs.emplace_back(offset[i] + a, offset[j] + maps[k].at(c).at(a));
      }
      ck.expect(colim.value.size_at(c) == oracle::equivalence_classes(offset[n], pairs),
                "colimit size differs from the closure oracle");
    }
    Presheaf z = gen::presheaf(b.ws, rng, base, 3);
    std::optional<PsMorphism> t = gen::some_morphism(rng, colim.value, z);
    if (!t) {
      z = colim.value;
      t = PsMorphism::identity(z);
    }
    std::vector<PsMorphism> legs;
    for (std::size_t i = 0; i < n; ++i) legs.push_back(compose(colim.coprojections[i], *t));
    PsMorphism med = factor_cocone(d, colim, legs, z);
    ck.expect(med == *t, "mediator differs from the map that built the cocone");
    std::size_t found = 0;
    auto all = enumerate_nat_trans(colim.value, z);
    while (auto cand = all.next()) {
      bool factors = true;
      for (std::size_t i = 0; i < n && factors; ++i)
        factors = compose(colim.coprojections[i], *cand) == legs[i];
      if (factors) ++found;
    }
    ck.expect(found == 1, "mediator not unique: " + std::to_string(found));
    ++mediators;
    ++diagrams;
  }
  ck.note << diagrams << " random diagrams, " << mediators << " mediators checked unique";
}

void a8(Bundle& b, Check& ck) {
  std::vector<std::pair<std::string, CriterionReport>> runs;
  runs.emplace_back("F_Ob", check_left_adjoint(b.ws, b.fob, b.cat, b.set));
  runs.emplace_back("x2", check_left_adjoint(b.ws, b.times2, b.cat, b.cat));
  for (const auto* model : {&b.set, &b.setset}) {
    ClosureReport cc = check_cartesian_closed(b.ws, *model);
    for (std::size_t c = 0; c < cc.per_object.size(); ++c)
      runs.emplace_back("closure/" + model->base.object_name(c), cc.per_object[c]);
  }
  std::size_t verdicts = 0;
  for (const auto& [name, r] : runs)
    for (const auto& v : r.verdicts) {
      ++verdicts;
      ck.expect(v.status != VerdictStatus::DecidedNotIso, name + "/" + v.condition_name + " DecidedNotIso");
    }
  ck.note << verdicts << " verdicts on known left adjoints, none DecidedNotIso";
}

}  // namespace

int main() {
  Bundle bundle;
  const std::pair<const char*, std::function<void(Bundle&, Check&)>> criteria[] = {
      {"A1", a1}, {"A2", a2}, {"A3", a3}, {"A4", a4},
      {"A5", a5}, {"A6", a6}, {"A7", a7}, {"A8", a8}};
  const double limits[] = {10, 5, 300, 0, 0, 0, 0, 0};
  int failed = 0;
  for (std::size_t i = 0; i < 8; ++i) {
    Check ck;
    auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[i].second(bundle, ck);
    } catch (const std::exception& e) {
      ck.expect(false, std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (limits[i] > 0)
      ck.expect(secs < limits[i], "runtime " + std::to_string(secs) + " s over the limit");
    if (!ck.pass) ++failed;
    std::printf("%s %s (%.2f s) %s\n", criteria[i].first, ck.pass ? "PASS" : "FAIL", secs,
                ck.note.str().c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
