#include "lfp/presheaf.hpp"

#include <algorithm>
#include <numeric>

#include "lfp/detail/union_find.hpp"

namespace lfp {

struct Presheaf::Impl {
  FinCat base;
  std::vector<FinSet> sets;
  std::vector<FinFun> actions;
};

namespace {

std::shared_ptr<const Presheaf::Impl>& empty_psh_impl() {
  static auto impl = std::make_shared<const Presheaf::Impl>();
  return impl;
}

void require_same_base(const FinCat& a, const FinCat& b, const char* where) {
  if (!(a == b)) throw Error(ErrorCode::BaseMismatch, std::string(where) + ": base categories differ");
}

}  // namespace

Presheaf::Presheaf() : impl_(empty_psh_impl()) {}

Presheaf::Presheaf(FinCat base, std::vector<FinSet> sets, std::vector<FinFun> actions) {
  if (sets.size() != base.object_count())
    throw Error(ErrorCode::BoundaryMismatch, "presheaf: one set per object expected");
  if (actions.size() != base.morphism_count())
    throw Error(ErrorCode::BoundaryMismatch, "presheaf: one action per morphism expected");
  for (Pos f = 0; f < actions.size(); ++f)
    if (!(actions[f].domain() == sets[base.tgt(f)]) ||
        !(actions[f].codomain() == sets[base.src(f)]))
      throw Error(ErrorCode::BoundaryMismatch,
                  "presheaf: action of " + base.morphism_name(f) + " has the wrong boundary");
  impl_ = std::make_shared<const Impl>(Impl{std::move(base), std::move(sets), std::move(actions)});
}

Presheaf Presheaf::from_generators(FinCat base, std::vector<FinSet> sets,
                                   const std::map<Pos, FinFun>& generator_actions) {
  if (sets.size() != base.object_count())
    throw Error(ErrorCode::BoundaryMismatch, "presheaf: one set per object expected");
  std::vector<FinFun> actions(base.morphism_count());
  for (Pos f = 0; f < base.morphism_count(); ++f) {
    auto path = base.factorization(f);
    if (path.empty()) {
      actions[f] = identity(sets[base.src(f)]);
      continue;
    }
    // X(a1;...;ak) = X(a1) ∘ ... ∘ X(ak)
    std::optional<FinFun> acc;
    for (auto it = path.rbegin(); it != path.rend(); ++it) {
      auto g = generator_actions.find(*it);
      if (g == generator_actions.end())
        throw Error(ErrorCode::ValidationError,
                    "presheaf: no action given for generator " + base.morphism_name(*it));
      acc = acc ? compose(*acc, g->second) : g->second;
    }
    actions[f] = *acc;
  }
  for (const auto& [g, fun] : generator_actions)
    if (g >= base.morphism_count() || !base.is_generator(g))
      throw Error(ErrorCode::ValidationError, "presheaf: action given for a non-generator");
  return Presheaf(std::move(base), std::move(sets), std::move(actions));
}

const FinCat& Presheaf::base() const noexcept { return impl_->base; }
const FinSet& Presheaf::at(Pos c) const { return impl_->sets.at(c); }
const FinFun& Presheaf::action(Pos f) const { return impl_->actions.at(f); }

std::vector<std::size_t> Presheaf::sizes() const {
  std::vector<std::size_t> out;
  for (const auto& s : impl_->sets) out.push_back(s.size());
  return out;
}

std::size_t Presheaf::total_size() const {
  std::size_t n = 0;
  for (const auto& s : impl_->sets) n += s.size();
  return n;
}

bool same_presheaf(const Presheaf& a, const Presheaf& b) {
  if (a.shares_storage_with(b)) return true;
  if (!(a.base() == b.base())) return false;
  for (Pos c = 0; c < a.base().object_count(); ++c)
    if (!(a.at(c) == b.at(c))) return false;
  for (Pos f = 0; f < a.base().morphism_count(); ++f)
    if (!(a.action(f) == b.action(f))) return false;
  return true;
}

Presheaf empty_presheaf(const FinCat& base) {
  std::vector<FinSet> sets(base.object_count());
  std::vector<FinFun> actions(base.morphism_count());
  return Presheaf(base, std::move(sets), std::move(actions));
}

Presheaf terminal_presheaf(Workspace& ws, const FinCat& base) {
  std::vector<FinSet> sets;
  for (Pos c = 0; c < base.object_count(); ++c)
    sets.push_back(FinSet::from_sorted({ws.fresh("*")}));
  std::vector<FinFun> actions;
  for (Pos f = 0; f < base.morphism_count(); ++f)
    actions.emplace_back(sets[base.tgt(f)], sets[base.src(f)], std::vector<Pos>{0});
  return Presheaf(base, std::move(sets), std::move(actions));
}

Presheaf yoneda(const FinCat& c, Pos obj) {
  if (obj >= c.object_count()) throw Error(ErrorCode::UnknownObject, "yoneda: unknown object");
  std::vector<FinSet> sets;
  std::vector<std::vector<Pos>> homs;
  for (Pos d = 0; d < c.object_count(); ++d) {
    homs.push_back(hom_positions(c, d, obj));
    std::vector<ElemId> ids;
    for (Pos f : homs.back()) ids.push_back(c.morphisms()[f]);
    sets.push_back(FinSet::from_sorted(std::move(ids)));
  }
  std::vector<FinFun> actions;
  for (Pos f = 0; f < c.morphism_count(); ++f) {
    // y(f): hom(tgt f, obj) -> hom(src f, obj), h ↦ f;h
    const auto& from = homs[c.tgt(f)];
    const auto& to = homs[c.src(f)];
    std::vector<Pos> images;
    for (Pos h : from) {
      Pos fh = c.comp(f, h);
      images.push_back(static_cast<Pos>(std::lower_bound(to.begin(), to.end(), fh) - to.begin()));
    }
    actions.emplace_back(sets[c.tgt(f)], sets[c.src(f)], std::move(images));
  }
  return Presheaf(c, std::move(sets), std::move(actions));
}

Presheaf yoneda(const FinCat& c, ElemId obj) { return yoneda(c, c.object_pos(obj)); }

PsMorphism::PsMorphism(Presheaf source, Presheaf target, std::vector<FinFun> components)
    : source_(std::move(source)), target_(std::move(target)), components_(std::move(components)) {
  require_same_base(source_.base(), target_.base(), "morphism");
  if (components_.size() != source_.base().object_count())
    throw Error(ErrorCode::BoundaryMismatch, "morphism: one component per object expected");
  for (Pos c = 0; c < components_.size(); ++c)
    if (!(components_[c].domain() == source_.at(c)) ||
        !(components_[c].codomain() == target_.at(c)))
      throw Error(ErrorCode::BoundaryMismatch,
                  "morphism: component at " + source_.base().object_name(c) +
                      " has the wrong boundary");
}

PsMorphism PsMorphism::identity(const Presheaf& x) {
  std::vector<FinFun> comps;
  for (Pos c = 0; c < x.base().object_count(); ++c) comps.push_back(lfp::identity(x.at(c)));
  return PsMorphism(x, x, std::move(comps));
}

bool operator==(const PsMorphism& a, const PsMorphism& b) {
  return same_presheaf(a.source_, b.source_) && same_presheaf(a.target_, b.target_) &&
         a.components_ == b.components_;
}

PsMorphism compose(const PsMorphism& f, const PsMorphism& g) {
  if (!same_presheaf(f.target(), g.source()))
    throw Error(ErrorCode::BoundaryMismatch, "compose: target of f is not the source of g");
  std::vector<FinFun> comps;
  for (Pos c = 0; c < f.source().base().object_count(); ++c)
    comps.push_back(compose(f.at(c), g.at(c)));
  return PsMorphism(f.source(), g.target(), std::move(comps));
}

std::vector<Violation> validate_presheaf(const Presheaf& x) {
  std::vector<Violation> out;
  const FinCat& c = x.base();
  for (Pos o = 0; o < c.object_count(); ++o)
    if (!(x.action(c.id(o)) == identity(x.at(o))))
      out.push_back({"identity-action", "action of " + c.morphism_name(c.id(o)) + " is not the identity"});
  for (Pos f = 0; f < c.morphism_count(); ++f)
    for (Pos g : c.out_of(c.tgt(f))) {
      Pos fg = c.comp(f, g);
      // X(f;g) = X(f) ∘ X(g)
      const FinFun& xg = x.action(g);
      const FinFun& xf = x.action(f);
      const FinFun& xfg = x.action(fg);
      for (Pos e = 0; e < xg.domain().size(); ++e)
        if (xf.at(xg.at(e)) != xfg.at(e)) {
          out.push_back({"functoriality", "action of " + c.morphism_name(fg) + " differs from " +
                                              c.morphism_name(f) + " after " + c.morphism_name(g)});
          break;
        }
    }
  return out;
}

std::vector<Violation> validate_morphism(const PsMorphism& m) {
  std::vector<Violation> out;
  const FinCat& c = m.source().base();
  for (Pos f = 0; f < c.morphism_count(); ++f) {
    // Y(f) ∘ α_{c'} = α_c ∘ X(f)
    Pos s = c.src(f), t = c.tgt(f);
    const FinFun& xf = m.source().action(f);
    const FinFun& yf = m.target().action(f);
    for (Pos e = 0; e < m.source().at(t).size(); ++e)
      if (yf.at(m.at(t).at(e)) != m.at(s).at(xf.at(e))) {
        out.push_back({"naturality", "square of " + c.morphism_name(f) + " fails"});
        break;
      }
  }
  return out;
}

bool is_iso(const PsMorphism& m) {
  for (const auto& comp : m.components())
    if (!is_bijection(comp)) return false;
  return true;
}

std::vector<Violation> validate_model(const PresheafModel& model) {
  std::vector<Violation> out = validate_category(model.base);
  for (std::size_t i = 0; i < model.conditions.size(); ++i) {
    const auto& g = model.conditions[i];
    std::string tag = i < model.condition_names.size() ? model.condition_names[i]
                                                       : "condition " + std::to_string(i);
    if (!(g.source().base() == model.base)) {
      out.push_back({"condition-base", tag + " lives over another base"});
      continue;
    }
    for (auto v : validate_presheaf(g.source())) out.push_back({v.rule, tag + " source: " + v.detail});
    for (auto v : validate_presheaf(g.target())) out.push_back({v.rule, tag + " target: " + v.detail});
    for (auto v : validate_morphism(g)) out.push_back({v.rule, tag + ": " + v.detail});
  }
  return out;
}

namespace {
constexpr Pos kUnset = ~Pos{0};
}

NatTransStream::NatTransStream(Presheaf x, Presheaf y, const PinnedImages& pinned)
    : x_(std::move(x)), y_(std::move(y)) {
  require_same_base(x_.base(), y_.base(), "natural transformations");
  const FinCat& c = x_.base();
  const Pos n = static_cast<Pos>(c.object_count());
  std::vector<Pos> objs(n);
  std::iota(objs.begin(), objs.end(), Pos{0});
  std::vector<std::size_t> incoming(n, 0);
  for (Pos o = 0; o < n; ++o)
    for (Pos f : c.into(o))
      if (!c.is_identity(f)) ++incoming[o];
  std::stable_sort(objs.begin(), objs.end(),
                   [&](Pos a, Pos b) { return incoming[a] > incoming[b]; });
  for (Pos o : objs)
    for (Pos e = 0; e < x_.at(o).size(); ++e) order_.emplace_back(o, e);
  value_.resize(n);
  for (Pos o = 0; o < n; ++o) value_[o].assign(x_.at(o).size(), kUnset);
  for (Pos o = 0; o < pinned.size() && ok_; ++o)
    for (Pos e = 0; e < pinned[o].size() && ok_; ++e)
      if (pinned[o][e]) {
        if (*pinned[o][e] >= y_.at(o).size()) ok_ = false;
        else ok_ = assign(o, e, *pinned[o][e]);
      }
  trail_.clear();
}

bool NatTransStream::assign(Pos c, Pos x, Pos v) {
  const FinCat& base = x_.base();
  std::vector<std::array<Pos, 3>> queue{{c, x, v}};
  while (!queue.empty()) {
    auto [o, e, val] = queue.back();
    queue.pop_back();
    Pos& slot = value_[o][e];
    if (slot != kUnset) {
      if (slot != val) return false;
      continue;
    }
    slot = val;
    trail_.emplace_back(o, e);
    // f: d -> o forces α_d(X(f)(e)) = Y(f)(val)
    for (Pos f : base.into(o)) {
      if (base.is_identity(f)) continue;
      Pos d = base.src(f);
      queue.push_back({d, x_.action(f).at(e), y_.action(f).at(val)});
    }
  }
  return true;
}

void NatTransStream::undo_to(std::size_t mark) {
  while (trail_.size() > mark) {
    auto [o, e] = trail_.back();
    value_[o][e] = kUnset;
    trail_.pop_back();
  }
}

PsMorphism NatTransStream::emit() const {
  std::vector<FinFun> comps;
  for (Pos o = 0; o < x_.base().object_count(); ++o)
    comps.emplace_back(x_.at(o), y_.at(o), value_[o]);
  return PsMorphism(x_, y_, std::move(comps));
}

std::optional<PsMorphism> NatTransStream::next() {
  if (done_ || !ok_) return std::nullopt;
  std::size_t var = 0;
  Pos from = 0;
  if (started_) {
    // resume after the last solution by advancing the deepest decision
    if (stack_.empty()) {
      done_ = true;
      return std::nullopt;
    }
    Decision d = stack_.back();
    stack_.pop_back();
    undo_to(d.mark);
    var = d.var;
    from = d.value + 1;
  }
  started_ = true;
  for (;;) {
    while (var < order_.size() && value_[order_[var].first][order_[var].second] != kUnset) {
      ++var;
      from = 0;
    }
    if (var == order_.size()) return emit();
    auto [o, e] = order_[var];
    bool placed = false;
    for (Pos v = from; v < y_.at(o).size(); ++v) {
      std::size_t mark = trail_.size();
      if (assign(o, e, v)) {
        stack_.push_back({var, v, mark});
        placed = true;
        break;
      }
      undo_to(mark);
    }
    if (placed) {
      ++var;
      from = 0;
      continue;
    }
    if (stack_.empty()) {
      done_ = true;
      return std::nullopt;
    }
    Decision d = stack_.back();
    stack_.pop_back();
    undo_to(d.mark);
    var = d.var;
    from = d.value + 1;
  }
}

NatTransStream NatTransStream::exhausted(Presheaf x, Presheaf y) {
  NatTransStream s(std::move(x), std::move(y));
  s.done_ = true;
  return s;
}

NatTransStream enumerate_nat_trans(const Presheaf& x, const Presheaf& y) {
  return NatTransStream(x, y);
}

std::size_t count_nat_trans(const Presheaf& x, const Presheaf& y) {
  NatTransStream s(x, y);
  std::size_t n = 0;
  while (s.next()) ++n;
  return n;
}

NatTransStream extensions(const PsMorphism& g, const PsMorphism& f, const Presheaf& x) {
  if (!same_presheaf(g.source(), f.source()))
    throw Error(ErrorCode::BoundaryMismatch, "extensions: f and g have different sources");
  const Presheaf& b = g.target();
  PinnedImages pinned(b.base().object_count());
  bool ok = true;
  for (Pos c = 0; c < pinned.size(); ++c) {
    pinned[c].assign(b.at(c).size(), std::nullopt);
    for (Pos a = 0; a < g.source().at(c).size(); ++a) {
      auto& slot = pinned[c][g.at(c).at(a)];
      Pos want = f.at(c).at(a);
      if (slot && *slot != want) ok = false;
      slot = want;
    }
  }
  if (!ok) return NatTransStream::exhausted(b, x);
  return NatTransStream(b, x, pinned);
}

std::vector<PsMorphism> list_extensions(const PsMorphism& g, const PsMorphism& f,
                                        std::size_t limit) {
  std::vector<PsMorphism> out;
  if (limit == 0) return out;
  auto s = extensions(g, f, f.target());
  while (auto h = s.next()) {
    out.push_back(std::move(*h));
    if (out.size() >= limit) break;
  }
  return out;
}

Diagram make_diagram(FinCat base, FinCat shape, std::vector<Presheaf> nodes,
                     const std::map<Pos, PsMorphism>& generator_edges) {
  if (nodes.size() != shape.object_count())
    throw Error(ErrorCode::BoundaryMismatch, "diagram: one node per shape object expected");
  std::vector<PsMorphism> edges(shape.morphism_count());
  for (Pos e = 0; e < shape.morphism_count(); ++e) {
    auto path = shape.factorization(e);
    if (path.empty()) {
      edges[e] = PsMorphism::identity(nodes[shape.src(e)]);
      continue;
    }
    std::optional<PsMorphism> acc;
    for (Pos g : path) {
      auto it = generator_edges.find(g);
      if (it == generator_edges.end())
        throw Error(ErrorCode::ValidationError, "diagram: missing edge " + shape.morphism_name(g));
      acc = acc ? compose(*acc, it->second) : it->second;
    }
    edges[e] = *acc;
  }
  return Diagram{std::move(base), std::move(shape), std::move(nodes), std::move(edges)};
}

std::vector<Violation> validate_diagram(const Diagram& d) {
  std::vector<Violation> out;
  const FinCat& s = d.shape;
  if (d.nodes.size() != s.object_count() || d.edges.size() != s.morphism_count()) {
    out.push_back({"diagram-arity", "node or edge count does not match the shape"});
    return out;
  }
  for (Pos e = 0; e < s.morphism_count(); ++e) {
    if (!same_presheaf(d.edges[e].source(), d.nodes[s.src(e)]) ||
        !same_presheaf(d.edges[e].target(), d.nodes[s.tgt(e)]))
      out.push_back({"edge-boundary", "edge " + s.morphism_name(e)});
  }
  if (!out.empty()) return out;
  for (Pos o = 0; o < s.object_count(); ++o)
    if (!(d.edges[s.id(o)] == PsMorphism::identity(d.nodes[o])))
      out.push_back({"edge-identity", "edge " + s.morphism_name(s.id(o)) + " is not the identity"});
  for (Pos e = 0; e < s.morphism_count(); ++e)
    for (Pos e2 : s.out_of(s.tgt(e)))
      if (!(compose(d.edges[e], d.edges[e2]) == d.edges[s.comp(e, e2)]))
        out.push_back({"edge-composite", "edge " + s.morphism_name(s.comp(e, e2))});
  return out;
}

ColimitResult colimit(Workspace& ws, const Diagram& d) {
  const FinCat& s = d.shape;
  const FinCat& base = d.base;
  for (const auto& node : d.nodes) require_same_base(node.base(), base, "colimit");
  const Pos nobj = static_cast<Pos>(base.object_count());
  const std::size_t nnodes = d.nodes.size();

  std::vector<std::vector<Pos>> offset(nobj, std::vector<Pos>(nnodes + 1, 0));
  std::vector<std::vector<Pos>> class_of(nobj);
  std::vector<std::vector<Pos>> rep_of_class(nobj);
  std::vector<FinSet> sets(nobj);
  for (Pos c = 0; c < nobj; ++c) {
    for (std::size_t i = 0; i < nnodes; ++i)
      offset[c][i + 1] = offset[c][i] + static_cast<Pos>(d.nodes[i].at(c).size());
    detail::UnionFind uf(offset[c][nnodes]);
    for (Pos e = 0; e < s.morphism_count(); ++e) {
      if (s.is_identity(e)) continue;
      Pos i = s.src(e), j = s.tgt(e);
      const FinFun& comp = d.edges[e].at(c);
      for (Pos x = 0; x < comp.domain().size(); ++x) uf.unite(offset[c][i] + x, offset[c][j] + comp.at(x));
    }
    auto& cls = class_of[c];
    cls.assign(offset[c][nnodes], 0);
    std::vector<ElemId> ids;
    std::size_t node = 0;
    for (Pos t = 0; t < cls.size(); ++t) {
      while (offset[c][node + 1] <= t) ++node;
      Pos root = uf.find(t);
      if (root == t) {
        cls[t] = static_cast<Pos>(rep_of_class[c].size());
        rep_of_class[c].push_back(t);
        ids.push_back(ws.fresh_like(d.nodes[node].at(c)[t - offset[c][node]]));
      } else {
        cls[t] = cls[root];
      }
    }
    sets[c] = FinSet::from_sorted(std::move(ids));
  }

  auto locate = [&](Pos c, Pos t) {
    std::size_t i = static_cast<std::size_t>(
        std::upper_bound(offset[c].begin(), offset[c].end(), t) - offset[c].begin() - 1);
    return std::pair<std::size_t, Pos>{i, t - offset[c][i]};
  };

  std::vector<FinFun> actions;
  for (Pos f = 0; f < base.morphism_count(); ++f) {
    Pos from = base.tgt(f), to = base.src(f);
    std::vector<Pos> images;
    for (Pos t : rep_of_class[from]) {
      auto [i, x] = locate(from, t);
      images.push_back(class_of[to][offset[to][i] + d.nodes[i].action(f).at(x)]);
    }
    actions.emplace_back(sets[from], sets[to], std::move(images));
  }
  ColimitResult out;
  out.value = Presheaf(base, std::move(sets), std::move(actions));
  for (std::size_t i = 0; i < nnodes; ++i) {
    std::vector<FinFun> comps;
    for (Pos c = 0; c < nobj; ++c) {
      std::vector<Pos> images(d.nodes[i].at(c).size());
      for (Pos x = 0; x < images.size(); ++x) images[x] = class_of[c][offset[c][i] + x];
      comps.emplace_back(d.nodes[i].at(c), out.value.at(c), std::move(images));
    }
    out.coprojections.emplace_back(d.nodes[i], out.value, std::move(comps));
  }
  return out;
}

PushoutResult pushout(Workspace& ws, const PsMorphism& f, const PsMorphism& g) {
  require_same_base(f.source().base(), g.source().base(), "pushout");
  if (!same_presheaf(f.source(), g.source()))
    throw Error(ErrorCode::BoundaryMismatch, "pushout: f and g have different sources");
  FinCat shape = FinCat::shape(ws, 3, {{0, 1}, {0, 2}});
  Diagram d = make_diagram(f.source().base(), shape, {f.source(), f.target(), g.target()},
                           {{*shape.find_morphism("e0"), f}, {*shape.find_morphism("e1"), g}});
  auto colim = colimit(ws, d);
  return PushoutResult{colim.value, colim.coprojections[1], colim.coprojections[2]};
}

CoequalizerResult coequalizer_ps(Workspace& ws, const PsMorphism& h, const PsMorphism& h2) {
  require_same_base(h.source().base(), h2.source().base(), "coequalizer");
  if (!same_presheaf(h.source(), h2.source()) || !same_presheaf(h.target(), h2.target()))
    throw Error(ErrorCode::BoundaryMismatch, "coequalizer: maps are not parallel");
  FinCat shape = FinCat::shape(ws, 2, {{0, 1}, {0, 1}});
  Diagram d = make_diagram(h.source().base(), shape, {h.source(), h.target()},
                           {{*shape.find_morphism("e0"), h}, {*shape.find_morphism("e1"), h2}});
  auto colim = colimit(ws, d);
  return CoequalizerResult{colim.value, colim.coprojections[1]};
}

PsMorphism factor_cocone(const Diagram& d, const ColimitResult& colim,
                         const std::vector<PsMorphism>& legs, const Presheaf& target) {
  if (legs.size() != d.nodes.size())
    throw Error(ErrorCode::NotACocone, "one leg per node expected");
  for (std::size_t i = 0; i < legs.size(); ++i)
    if (!same_presheaf(legs[i].source(), d.nodes[i]) || !same_presheaf(legs[i].target(), target))
      throw Error(ErrorCode::NotACocone, "leg " + std::to_string(i) + " has the wrong boundary");
  const FinCat& s = d.shape;
  for (Pos e = 0; e < s.morphism_count(); ++e)
    if (!(compose(d.edges[e], legs[s.tgt(e)]) == legs[s.src(e)]))
      throw Error(ErrorCode::NotACocone, "legs do not commute with edge " + s.morphism_name(e));
  const FinCat& base = colim.value.base();
  std::vector<FinFun> comps;
  for (Pos c = 0; c < base.object_count(); ++c) {
    std::vector<Pos> images(colim.value.at(c).size(), kUnset);
    for (std::size_t i = 0; i < legs.size(); ++i) {
      const FinFun& cp = colim.coprojections[i].at(c);
      for (Pos x = 0; x < cp.domain().size(); ++x)
        if (images[cp.at(x)] == kUnset) images[cp.at(x)] = legs[i].at(c).at(x);
    }
    for (Pos v : images)
      if (v == kUnset) throw Error(ErrorCode::NotACocone, "colimit element without a preimage");
    comps.emplace_back(colim.value.at(c), target.at(c), std::move(images));
  }
  return PsMorphism(colim.value, target, std::move(comps));
}

ProductResult product(Workspace& ws, const Presheaf& x, const Presheaf& y) {
  require_same_base(x.base(), y.base(), "product");
  const FinCat& base = x.base();
  std::vector<FinSet> sets;
  for (Pos c = 0; c < base.object_count(); ++c) {
    std::vector<ElemId> ids;
    for (ElemId a : x.at(c))
      for (ElemId b : y.at(c)) ids.push_back(ws.fresh("(" + ws.label(a) + "," + ws.label(b) + ")"));
    sets.push_back(FinSet::from_sorted(std::move(ids)));
  }
  std::vector<FinFun> actions;
  for (Pos f = 0; f < base.morphism_count(); ++f) {
    Pos from = base.tgt(f), to = base.src(f);
    const Pos ny_from = static_cast<Pos>(y.at(from).size());
    const Pos ny_to = static_cast<Pos>(y.at(to).size());
    std::vector<Pos> images;
    for (Pos a = 0; a < x.at(from).size(); ++a)
      for (Pos b = 0; b < ny_from; ++b)
        images.push_back(x.action(f).at(a) * ny_to + y.action(f).at(b));
    actions.emplace_back(sets[from], sets[to], std::move(images));
  }
  Presheaf value(base, sets, std::move(actions));
  std::vector<FinFun> p1, p2;
  for (Pos c = 0; c < base.object_count(); ++c) {
    const Pos ny = static_cast<Pos>(y.at(c).size());
    std::vector<Pos> i1, i2;
    for (Pos t = 0; t < sets[c].size(); ++t) {
      i1.push_back(t / ny);
      i2.push_back(t % ny);
    }
    p1.emplace_back(sets[c], x.at(c), std::move(i1));
    p2.emplace_back(sets[c], y.at(c), std::move(i2));
  }
  return ProductResult{value, PsMorphism(value, x, std::move(p1)), PsMorphism(value, y, std::move(p2))};
}

TensorResult tensor(Workspace& ws, const Presheaf& x, std::size_t n) {
  FinCat shape = FinCat::shape(ws, n, {});
  Diagram d{x.base(), shape, std::vector<Presheaf>(n, x), {}};
  for (Pos o = 0; o < n; ++o) d.edges.push_back(PsMorphism::identity(x));
  auto colim = colimit(ws, d);
  return TensorResult{colim.value, colim.coprojections};
}

ColimitResult coproduct(Workspace& ws, const Presheaf& x, const Presheaf& y) {
  require_same_base(x.base(), y.base(), "coproduct");
  FinCat shape = FinCat::shape(ws, 2, {});
  Diagram d{x.base(), shape, {x, y}, {PsMorphism::identity(x), PsMorphism::identity(y)}};
  return colimit(ws, d);
}

OrthogonalityResult check_orthogonal(const Presheaf& x, const PsMorphism& g) {
  require_same_base(x.base(), g.source().base(), "orthogonality");
  OrthogonalityResult out;
  NatTransStream fs(g.source(), x);
  while (auto f = fs.next()) {
    auto lifts = extensions(g, *f, x);
    std::size_t count = 0;
    while (count < 2 && lifts.next()) ++count;
    if (count != 1) {
      out.orthogonal = false;
      out.witness = std::move(*f);
      out.liftings = count;
      return out;
    }
  }
  return out;
}

}  // namespace lfp
