#include "lfp/kan.hpp"

#include <algorithm>

#include "lfp/detail/union_find.hpp"

namespace lfp {

std::vector<Violation> validate_kan_model(const KanModel& f) {
  std::vector<Violation> out;
  const FinCat& c = f.source;
  if (f.objects.size() != c.object_count() || f.morphisms.size() != c.morphism_count()) {
    out.push_back({"kan-arity", "one image per object and per morphism expected"});
    return out;
  }
  for (Pos o = 0; o < c.object_count(); ++o) {
    if (!(f.objects[o].base() == f.target)) {
      out.push_back({"kan-base", "image of " + c.object_name(o) + " lives over another base"});
      continue;
    }
    for (auto v : validate_presheaf(f.objects[o]))
      out.push_back({v.rule, "image of " + c.object_name(o) + ": " + v.detail});
  }
  if (!out.empty()) return out;
  for (Pos m = 0; m < c.morphism_count(); ++m) {
    const auto& img = f.morphisms[m];
    if (!same_presheaf(img.source(), f.objects[c.src(m)]) ||
        !same_presheaf(img.target(), f.objects[c.tgt(m)])) {
      out.push_back({"kan-boundary", "image of " + c.morphism_name(m)});
      continue;
    }
    for (auto v : validate_morphism(img))
      out.push_back({v.rule, "image of " + c.morphism_name(m) + ": " + v.detail});
  }
  if (!out.empty()) return out;
  for (Pos o = 0; o < c.object_count(); ++o)
    if (!(f.morphisms[c.id(o)] == PsMorphism::identity(f.objects[o])))
      out.push_back({"kan-identity", "image of " + c.morphism_name(c.id(o)) + " is not the identity"});
  for (Pos a = 0; a < c.morphism_count(); ++a)
    for (Pos b : c.out_of(c.tgt(a)))
      if (!(compose(f.morphisms[a], f.morphisms[b]) == f.morphisms[c.comp(a, b)]))
        out.push_back({"kan-functoriality", "image of " + c.morphism_name(c.comp(a, b)) +
                                                " differs from the composite of " +
                                                c.morphism_name(a) + " and " + c.morphism_name(b)});
  return out;
}

KanModel kan_model_from_generators(FinCat source, FinCat target, std::vector<Presheaf> objects,
                                   const std::map<Pos, PsMorphism>& generator_images) {
  if (objects.size() != source.object_count())
    throw Error(ErrorCode::BoundaryMismatch, "kan model: one image per object expected");
  std::vector<PsMorphism> morphisms(source.morphism_count());
  for (Pos f = 0; f < source.morphism_count(); ++f) {
    auto path = source.factorization(f);
    if (path.empty()) {
      morphisms[f] = PsMorphism::identity(objects[source.src(f)]);
      continue;
    }
    std::optional<PsMorphism> acc;
    for (Pos g : path) {
      auto it = generator_images.find(g);
      if (it == generator_images.end())
        throw Error(ErrorCode::ValidationError,
                    "kan model: no image given for generator " + source.morphism_name(g));
      acc = acc ? compose(*acc, it->second) : it->second;
    }
    morphisms[f] = *acc;
  }
  return KanModel{std::move(source), std::move(target), std::move(objects), std::move(morphisms)};
}

namespace {

// y(f): y(c) -> y(c') for f: c -> c', h ↦ h;f
PsMorphism yoneda_map(const FinCat& c, const std::vector<Presheaf>& ys, Pos f) {
  const Presheaf& from = ys[c.src(f)];
  const Presheaf& to = ys[c.tgt(f)];
  std::vector<FinFun> comps;
  for (Pos d = 0; d < c.object_count(); ++d) {
    std::vector<Pos> images;
    for (ElemId h : from.at(d)) {
      Pos hf = c.comp(c.morphism_pos(h), f);
      images.push_back(to.at(d).index_of(c.morphisms()[hf]).value());
    }
    comps.emplace_back(from.at(d), to.at(d), std::move(images));
  }
  return PsMorphism(from, to, std::move(comps));
}

}  // namespace

KanModel yoneda_kan_model(const FinCat& c) {
  std::vector<Presheaf> ys;
  for (Pos o = 0; o < c.object_count(); ++o) ys.push_back(yoneda(c, o));
  std::vector<PsMorphism> maps;
  for (Pos f = 0; f < c.morphism_count(); ++f) maps.push_back(yoneda_map(c, ys, f));
  return KanModel{c, c, std::move(ys), std::move(maps)};
}

Pos LanResult::class_of(Pos d, Pos c, Pos x, Pos u) const {
  return class_[d][offset_[d][c] + x * fc_size_[d][c] + u];
}

LanProvenance LanResult::provenance(Pos d, Pos cls) const {
  Pos slot = rep_[d].at(cls);
  const auto& off = offset_[d];
  Pos c = static_cast<Pos>(std::upper_bound(off.begin(), off.end(), slot) - off.begin() - 1);
  Pos within = slot - off[c];
  return LanProvenance{c, within / fc_size_[d][c], within % fc_size_[d][c]};
}

PsMorphism LanResult::coprojection(const Presheaf& tensor, Pos c) const {
  const FinCat& base = value_.base();
  std::vector<FinFun> comps;
  for (Pos d = 0; d < base.object_count(); ++d) {
    Pos n = fc_size_[d][c];
    if (tensor.at(d).size() != n * x_sizes_[c])
      throw Error(ErrorCode::BoundaryMismatch, "coprojection: tensor has the wrong size");
    std::vector<Pos> images;
    for (Pos t = 0; t < tensor.at(d).size(); ++t) images.push_back(class_of(d, c, t / n, t % n));
    comps.emplace_back(tensor.at(d), value_.at(d), std::move(images));
  }
  return PsMorphism(tensor, value_, std::move(comps));
}

LanResult lan_apply(Workspace& ws, const KanModel& f, const Presheaf& x) {
  const FinCat& cs = f.source;
  const FinCat& ds = f.target;
  if (!(x.base() == cs)) throw Error(ErrorCode::BaseMismatch, "lan: input lives over another base");
  const Pos nc = static_cast<Pos>(cs.object_count());
  const Pos nd = static_cast<Pos>(ds.object_count());

  LanResult out;
  out.x_sizes_ = x.sizes();
  out.offset_.assign(nd, std::vector<Pos>(nc + 1, 0));
  out.fc_size_.assign(nd, std::vector<Pos>(nc, 0));
  out.class_.resize(nd);
  out.rep_.resize(nd);
  std::vector<FinSet> sets(nd);

  for (Pos d = 0; d < nd; ++d) {
    auto& off = out.offset_[d];
    for (Pos c = 0; c < nc; ++c) {
      out.fc_size_[d][c] = static_cast<Pos>(f.objects[c].at(d).size());
      off[c + 1] = off[c] + out.fc_size_[d][c] * static_cast<Pos>(x.at(c).size());
    }
    detail::UnionFind uf(off[nc]);
    for (Pos m = 0; m < cs.morphism_count(); ++m) {
      if (cs.is_identity(m)) continue;
      Pos c = cs.src(m), c2 = cs.tgt(m);
      const FinFun& fm = f.morphisms[m].at(d);  // F(c)(d) -> F(c')(d)
      const FinFun& xm = x.action(m);           // X(c') -> X(c)
      for (Pos x2 = 0; x2 < x.at(c2).size(); ++x2)
        for (Pos u = 0; u < out.fc_size_[d][c]; ++u)
          uf.unite(off[c2] + x2 * out.fc_size_[d][c2] + fm.at(u),
                   off[c] + xm.at(x2) * out.fc_size_[d][c] + u);
    }
    auto& cls = out.class_[d];
    cls.assign(off[nc], 0);
    std::vector<ElemId> ids;
    Pos c = 0;
    for (Pos slot = 0; slot < off[nc]; ++slot) {
      while (off[c + 1] <= slot) ++c;
      Pos root = uf.find(slot);
      if (root == slot) {
        cls[slot] = static_cast<Pos>(out.rep_[d].size());
        out.rep_[d].push_back(slot);
        Pos within = slot - off[c];
        ElemId xe = x.at(c)[within / out.fc_size_[d][c]];
        ElemId ue = f.objects[c].at(d)[within % out.fc_size_[d][c]];
        ids.push_back(ws.fresh("[" + ws.label(ue) + "|" + ws.label(xe) + "]"));
      } else {
        cls[slot] = cls[root];
      }
    }
    sets[d] = FinSet::from_sorted(std::move(ids));
  }

  std::vector<FinFun> actions;
  for (Pos phi = 0; phi < ds.morphism_count(); ++phi) {
    Pos from = ds.tgt(phi), to = ds.src(phi);
    std::vector<Pos> images;
    for (Pos k = 0; k < sets[from].size(); ++k) {
      LanProvenance pv = out.provenance(from, k);
      Pos u2 = f.objects[pv.c].action(phi).at(pv.u);
      images.push_back(out.class_of(to, pv.c, pv.x, u2));
    }
    actions.emplace_back(sets[from], sets[to], std::move(images));
  }
  out.value_ = Presheaf(ds, std::move(sets), std::move(actions));
  return out;
}

PsMorphism lan_map(const KanModel& f, const LanResult& from, const LanResult& to,
                   const PsMorphism& m) {
  if (!(m.source().base() == f.source))
    throw Error(ErrorCode::BaseMismatch, "lan: morphism lives over another base");
  const FinCat& ds = f.target;
  std::vector<FinFun> comps;
  for (Pos d = 0; d < ds.object_count(); ++d) {
    std::vector<Pos> images;
    for (Pos k = 0; k < from.value().at(d).size(); ++k) {
      LanProvenance pv = from.provenance(d, k);
      images.push_back(to.class_of(d, pv.c, m.at(pv.c).at(pv.x), pv.u));
    }
    comps.emplace_back(from.value().at(d), to.value().at(d), std::move(images));
  }
  return PsMorphism(from.value(), to.value(), std::move(comps));
}

PsMorphism lan_map(Workspace& ws, const KanModel& f, const PsMorphism& m) {
  LanResult a = lan_apply(ws, f, m.source());
  LanResult b = lan_apply(ws, f, m.target());
  return lan_map(f, a, b, m);
}

KanModel product_kan_model(Workspace& ws, const PresheafModel& model, Pos c,
                           const std::optional<Presheaf>& b) {
  const FinCat& base = model.base;
  if (c >= base.object_count())
    throw Error(ErrorCode::UnknownObject, "product kan model: unknown object");
  Presheaf factor = b ? *b : yoneda(base, c);
  if (!(factor.base() == base))
    throw Error(ErrorCode::BaseMismatch, "product kan model: factor lives over another base");
  KanModel y = yoneda_kan_model(base);
  std::vector<ProductResult> prods;
  std::vector<Presheaf> objects;
  for (Pos d = 0; d < base.object_count(); ++d) {
    prods.push_back(product(ws, y.objects[d], factor));
    objects.push_back(prods.back().value);
  }
  std::vector<PsMorphism> maps;
  for (Pos f = 0; f < base.morphism_count(); ++f) {
    const auto& src = prods[base.src(f)];
    const auto& tgt = prods[base.tgt(f)];
    std::vector<FinFun> comps;
    for (Pos e = 0; e < base.object_count(); ++e) {
      const Pos nb = static_cast<Pos>(factor.at(e).size());
      std::vector<Pos> images;
      for (Pos t = 0; t < src.value.at(e).size(); ++t)
        images.push_back(y.morphisms[f].at(e).at(t / nb) * nb + t % nb);
      comps.emplace_back(src.value.at(e), tgt.value.at(e), std::move(images));
    }
    maps.emplace_back(src.value, tgt.value, std::move(comps));
  }
  return KanModel{base, base, std::move(objects), std::move(maps)};
}

}  // namespace lfp
