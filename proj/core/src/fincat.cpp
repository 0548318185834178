#include "lfp/fincat.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

#include "lfp/detail/union_find.hpp"

namespace lfp {

struct FinCat::Impl {
  FinSet objects;
  FinSet morphisms;
  std::vector<std::string> object_names;
  std::vector<std::string> morphism_names;
  std::vector<Pos> src, tgt, id;
  std::vector<std::vector<Pos>> out_of, into;
  std::vector<Pos> pos_in_out;
  // comp_row[f][k] = f ; out_of[tgt f][k]
  std::vector<std::vector<Pos>> comp_row;
  std::vector<std::vector<Pos>> factorization;
  std::map<std::string, Pos, std::less<>> object_index, morphism_index;
  std::optional<CatPresentation> presentation;
  std::size_t presentation_bound = 0;
};

namespace {

std::shared_ptr<const FinCat::Impl>& empty_impl() {
  static auto impl = std::make_shared<const FinCat::Impl>();
  return impl;
}

[[noreturn]] void bad_table(const std::string& what) {
  throw Error(ErrorCode::ValidationError, "category table: " + what);
}

}  // namespace

FinCat::FinCat() : impl_(empty_impl()) {}

FinCat FinCat::from_table(Workspace& ws, Table t) {
  const std::size_t n = t.objects.size(), m = t.morphisms.size();
  if (t.src.size() != m || t.tgt.size() != m) bad_table("src/tgt arity");
  if (t.id.size() != n) bad_table("id arity");
  for (std::size_t f = 0; f < m; ++f)
    if (t.src[f] >= n || t.tgt[f] >= n) bad_table("morphism boundary out of range");
  for (Pos i : t.id)
    if (i >= m) bad_table("identity out of range");

  auto impl = std::make_shared<Impl>();
  impl->object_names = std::move(t.objects);
  impl->morphism_names = std::move(t.morphisms);
  for (Pos c = 0; c < n; ++c)
    if (!impl->object_index.emplace(impl->object_names[c], c).second)
      bad_table("duplicate object name " + impl->object_names[c]);
  for (Pos f = 0; f < m; ++f)
    if (!impl->morphism_index.emplace(impl->morphism_names[f], f).second)
      bad_table("duplicate morphism name " + impl->morphism_names[f]);

  std::vector<ElemId> ids;
  for (Pos c = 0; c < n; ++c) ids.push_back(ws.fresh(impl->object_names[c]));
  impl->objects = FinSet::from_sorted(std::move(ids));
  ids.clear();
  for (Pos f = 0; f < m; ++f) ids.push_back(ws.fresh(impl->morphism_names[f]));
  impl->morphisms = FinSet::from_sorted(std::move(ids));

  impl->src = std::move(t.src);
  impl->tgt = std::move(t.tgt);
  impl->id = std::move(t.id);
  impl->out_of.assign(n, {});
  impl->into.assign(n, {});
  impl->pos_in_out.assign(m, 0);
  for (Pos f = 0; f < m; ++f) {
    impl->pos_in_out[f] = static_cast<Pos>(impl->out_of[impl->src[f]].size());
    impl->out_of[impl->src[f]].push_back(f);
    impl->into[impl->tgt[f]].push_back(f);
  }

  constexpr Pos unset = ~Pos{0};
  impl->comp_row.resize(m);
  for (Pos f = 0; f < m; ++f)
    impl->comp_row[f].assign(impl->out_of[impl->tgt[f]].size(), unset);
  for (const auto& [f, g, fg] : t.comp) {
    if (f >= m || g >= m || fg >= m) bad_table("composite out of range");
    if (impl->tgt[f] != impl->src[g]) bad_table("composite of non-composable pair");
    Pos& slot = impl->comp_row[f][impl->pos_in_out[g]];
    if (slot != unset) bad_table("composite listed twice");
    slot = fg;
  }
  for (const auto& row : impl->comp_row)
    for (Pos v : row)
      if (v == unset) bad_table("missing composite");

  if (t.factorization.empty()) {
    impl->factorization.resize(m);
    for (Pos f = 0; f < m; ++f)
      if (impl->id[impl->src[f]] != f) impl->factorization[f] = {f};
  } else {
    if (t.factorization.size() != m) bad_table("factorization arity");
    for (const auto& path : t.factorization)
      for (Pos g : path)
        if (g >= m) bad_table("factorization out of range");
    impl->factorization = std::move(t.factorization);
  }
  return FinCat(std::move(impl));
}

FinCat FinCat::shape(Workspace& ws, std::size_t n,
                     const std::vector<std::pair<Pos, Pos>>& arrows) {
  Table t;
  for (std::size_t i = 0; i < n; ++i) t.objects.push_back(std::to_string(i));
  for (std::size_t i = 0; i < n; ++i) {
    t.morphisms.push_back("1_" + std::to_string(i));
    t.src.push_back(static_cast<Pos>(i));
    t.tgt.push_back(static_cast<Pos>(i));
    t.id.push_back(static_cast<Pos>(i));
  }
  for (std::size_t k = 0; k < arrows.size(); ++k) {
    auto [a, b] = arrows[k];
    if (a >= n || b >= n) bad_table("shape arrow out of range");
    t.morphisms.push_back("e" + std::to_string(k));
    t.src.push_back(a);
    t.tgt.push_back(b);
  }
  const Pos m = static_cast<Pos>(t.morphisms.size());
  for (Pos f = 0; f < m; ++f)
    for (Pos g = 0; g < m; ++g) {
      if (t.tgt[f] != t.src[g]) continue;
      bool f_id = f < n, g_id = g < n;
      if (!f_id && !g_id) bad_table("shape arrows must not be composable");
      t.comp.push_back({f, g, f_id ? g : f});
    }
  return from_table(ws, std::move(t));
}

FinCat FinCat::terminal(Workspace& ws) {
  Table t;
  t.objects = {"*"};
  t.morphisms = {"1_*"};
  t.src = t.tgt = t.id = {0};
  t.comp = {{0, 0, 0}};
  return from_table(ws, std::move(t));
}

const FinSet& FinCat::objects() const noexcept { return impl_->objects; }
const FinSet& FinCat::morphisms() const noexcept { return impl_->morphisms; }
Pos FinCat::src(Pos f) const { return impl_->src.at(f); }
Pos FinCat::tgt(Pos f) const { return impl_->tgt.at(f); }
Pos FinCat::id(Pos c) const { return impl_->id.at(c); }

Pos FinCat::comp(Pos f, Pos g) const {
  if (impl_->tgt.at(f) != impl_->src.at(g))
    throw Error(ErrorCode::BoundaryMismatch,
                "cannot compose " + morphism_name(f) + " with " + morphism_name(g));
  return impl_->comp_row[f][impl_->pos_in_out[g]];
}

std::span<const Pos> FinCat::out_of(Pos c) const { return impl_->out_of.at(c); }
std::span<const Pos> FinCat::into(Pos c) const { return impl_->into.at(c); }
std::span<const Pos> FinCat::factorization(Pos f) const {
  return impl_->factorization.at(f);
}

bool FinCat::is_generator(Pos f) const {
  const auto& path = impl_->factorization.at(f);
  return path.size() == 1 && path[0] == f;
}

std::vector<Pos> FinCat::generators() const {
  std::vector<Pos> out;
  for (Pos f = 0; f < morphism_count(); ++f)
    if (is_generator(f)) out.push_back(f);
  return out;
}

const std::string& FinCat::object_name(Pos c) const { return impl_->object_names.at(c); }
const std::string& FinCat::morphism_name(Pos f) const {
  return impl_->morphism_names.at(f);
}

std::optional<Pos> FinCat::find_object(std::string_view name) const {
  auto it = impl_->object_index.find(name);
  if (it == impl_->object_index.end()) return std::nullopt;
  return it->second;
}

std::optional<Pos> FinCat::find_morphism(std::string_view name) const {
  auto it = impl_->morphism_index.find(name);
  if (it == impl_->morphism_index.end()) return std::nullopt;
  return it->second;
}

Pos FinCat::object_pos(ElemId obj) const {
  auto p = impl_->objects.index_of(obj);
  if (!p) throw Error(ErrorCode::UnknownObject, "id is not an object of the category");
  return *p;
}

Pos FinCat::morphism_pos(ElemId f) const {
  auto p = impl_->morphisms.index_of(f);
  if (!p) throw Error(ErrorCode::UnknownObject, "id is not a morphism of the category");
  return *p;
}

FinFun FinCat::src_fun() const { return FinFun(morphisms(), objects(), impl_->src); }
FinFun FinCat::tgt_fun() const { return FinFun(morphisms(), objects(), impl_->tgt); }
FinFun FinCat::id_fun() const { return FinFun(objects(), morphisms(), impl_->id); }

ElemId FinCat::comp(ElemId f, ElemId g) const {
  return morphisms()[comp(morphism_pos(f), morphism_pos(g))];
}

const CatPresentation* FinCat::presentation() const noexcept {
  return impl_->presentation ? &*impl_->presentation : nullptr;
}

std::size_t FinCat::presentation_bound() const noexcept { return impl_->presentation_bound; }

FinCat::Table FinCat::table() const {
  Table t;
  t.objects = impl_->object_names;
  t.morphisms = impl_->morphism_names;
  t.src = impl_->src;
  t.tgt = impl_->tgt;
  t.id = impl_->id;
  for (Pos f = 0; f < morphism_count(); ++f) {
    const auto& outs = impl_->out_of[impl_->tgt[f]];
    for (std::size_t k = 0; k < outs.size(); ++k)
      t.comp.push_back({f, outs[k], impl_->comp_row[f][k]});
  }
  t.factorization = impl_->factorization;
  return t;
}

bool operator==(const FinCat& a, const FinCat& b) {
  if (a.impl_ == b.impl_) return true;
  const auto& x = *a.impl_;
  const auto& y = *b.impl_;
  return x.object_names == y.object_names && x.morphism_names == y.morphism_names &&
         x.src == y.src && x.tgt == y.tgt && x.id == y.id && x.comp_row == y.comp_row;
}

std::vector<Violation> validate_category(const FinCat& c) {
  std::vector<Violation> out;
  const Pos n = static_cast<Pos>(c.object_count());
  const Pos m = static_cast<Pos>(c.morphism_count());
  auto name = [&](Pos f) { return c.morphism_name(f); };
  for (Pos o = 0; o < n; ++o) {
    Pos i = c.id(o);
    if (c.src(i) != o || c.tgt(i) != o)
      out.push_back({"identity-boundary", "identity " + name(i) + " of " + c.object_name(o)});
  }
  for (Pos f = 0; f < m; ++f) {
    if (c.comp(c.id(c.src(f)), f) != f)
      out.push_back({"left-unit", "comp(" + name(c.id(c.src(f))) + ", " + name(f) + ") != " + name(f)});
    if (c.comp(f, c.id(c.tgt(f))) != f)
      out.push_back({"right-unit", "comp(" + name(f) + ", " + name(c.id(c.tgt(f))) + ") != " + name(f)});
    for (Pos g : c.out_of(c.tgt(f))) {
      Pos fg = c.comp(f, g);
      if (c.src(fg) != c.src(f) || c.tgt(fg) != c.tgt(g))
        out.push_back({"composite-boundary", "comp(" + name(f) + ", " + name(g) + ")"});
    }
  }
  for (Pos f = 0; f < m; ++f)
    for (Pos g : c.out_of(c.tgt(f)))
      for (Pos h : c.out_of(c.tgt(g))) {
        Pos fg = c.comp(f, g), gh = c.comp(g, h);
        if (c.tgt(fg) != c.src(h) || c.tgt(f) != c.src(gh)) continue;
        if (c.comp(fg, h) != c.comp(f, gh))
          out.push_back({"associativity", name(f) + ", " + name(g) + ", " + name(h)});
      }
  return out;
}

namespace {

struct PathSpace {
  std::vector<std::vector<Pos>> paths;  // generator indices, diagrammatic
  std::vector<Pos> start, end;          // object of each path
  std::map<std::vector<Pos>, Pos> index_of_nonempty;
  std::vector<Pos> identity_path;       // per object
};

[[noreturn]] void ill_formed(const std::string& what) {
  throw Error(ErrorCode::IllFormedRelation, what);
}

}  // namespace

FinCat from_presentation(Workspace& ws, const CatPresentation& p,
                         std::size_t max_path_len) {
  if (max_path_len < 1)
    throw Error(ErrorCode::BoundExceeded, "max_path_len must be at least 1");
  std::map<std::string, Pos, std::less<>> obj;
  for (const auto& o : p.objects)
    if (!obj.emplace(o, static_cast<Pos>(obj.size())).second)
      throw Error(ErrorCode::ValidationError, "duplicate object " + o);
  const Pos n = static_cast<Pos>(p.objects.size());

  std::map<std::string, Pos, std::less<>> gen;
  std::vector<Pos> gsrc, gtgt;
  for (const auto& a : p.arrows) {
    auto s = obj.find(a.source), t = obj.find(a.target);
    if (s == obj.end()) throw Error(ErrorCode::UnknownObject, "arrow " + a.name + ": " + a.source);
    if (t == obj.end()) throw Error(ErrorCode::UnknownObject, "arrow " + a.name + ": " + a.target);
    if (!gen.emplace(a.name, static_cast<Pos>(gsrc.size())).second)
      throw Error(ErrorCode::ValidationError, "duplicate arrow " + a.name);
    gsrc.push_back(s->second);
    gtgt.push_back(t->second);
  }
  const Pos ngen = static_cast<Pos>(gsrc.size());

  // Shortlex enumeration: identities, then paths by length, each length in
  // lexicographic generator order.
  const std::size_t bound = max_path_len + 1;
  PathSpace ps;
  for (Pos o = 0; o < n; ++o) {
    ps.identity_path.push_back(static_cast<Pos>(ps.paths.size()));
    ps.paths.push_back({});
    ps.start.push_back(o);
    ps.end.push_back(o);
  }
  std::size_t layer_begin = ps.paths.size();
  for (Pos a = 0; a < ngen; ++a) {
    ps.index_of_nonempty.emplace(std::vector<Pos>{a}, static_cast<Pos>(ps.paths.size()));
    ps.paths.push_back({a});
    ps.start.push_back(gsrc[a]);
    ps.end.push_back(gtgt[a]);
  }
  for (std::size_t len = 2; len <= bound; ++len) {
    std::size_t layer_end = ps.paths.size();
    for (std::size_t i = layer_begin; i < layer_end; ++i)
      for (Pos a = 0; a < ngen; ++a) {
        if (gsrc[a] != ps.end[i]) continue;
        auto path = ps.paths[i];
        path.push_back(a);
        ps.index_of_nonempty.emplace(path, static_cast<Pos>(ps.paths.size()));
        ps.start.push_back(ps.start[i]);
        ps.end.push_back(gtgt[a]);
        ps.paths.push_back(std::move(path));
      }
    layer_begin = layer_end;
  }
  const Pos npaths = static_cast<Pos>(ps.paths.size());

  auto lookup = [&](const std::vector<Pos>& path, Pos at) -> std::optional<Pos> {
    if (path.empty()) return ps.identity_path[at];
    auto it = ps.index_of_nonempty.find(path);
    if (it == ps.index_of_nonempty.end()) return std::nullopt;
    return it->second;
  };

  // Whiskering tables: path extended by one generator on either side.
  constexpr Pos none = ~Pos{0};
  std::vector<std::vector<Pos>> right(npaths, std::vector<Pos>(ngen, none));
  std::vector<std::vector<Pos>> left(npaths, std::vector<Pos>(ngen, none));
  for (Pos i = 0; i < npaths; ++i)
    for (Pos a = 0; a < ngen; ++a) {
      if (gsrc[a] == ps.end[i]) {
        auto path = ps.paths[i];
        path.push_back(a);
        if (auto j = lookup(path, 0)) right[i][a] = *j;
      }
      if (gtgt[a] == ps.start[i]) {
        std::vector<Pos> path{a};
        path.insert(path.end(), ps.paths[i].begin(), ps.paths[i].end());
        if (auto j = lookup(path, 0)) left[i][a] = *j;
      }
    }

  detail::UnionFind uf(npaths);
  auto resolve = [&](const CatPresentation::Path& path, std::size_t r) {
    if (path.arrows.empty()) {
      auto o = obj.find(path.identity_at);
      if (o == obj.end())
        ill_formed("relation " + std::to_string(r) + ": unknown identity object '" +
                   path.identity_at + "'");
      return std::pair<Pos, std::pair<Pos, Pos>>{ps.identity_path[o->second],
                                                 {o->second, o->second}};
    }
    std::vector<Pos> gens;
    for (const auto& a : path.arrows) {
      auto g = gen.find(a);
      if (g == gen.end())
        ill_formed("relation " + std::to_string(r) + ": unknown arrow '" + a + "'");
      if (!gens.empty() && gtgt[gens.back()] != gsrc[g->second])
        ill_formed("relation " + std::to_string(r) + ": path is not composable");
      gens.push_back(g->second);
    }
    auto idx = lookup(gens, 0);
    if (!idx)
      throw Error(ErrorCode::BoundExceeded,
                  "relation " + std::to_string(r) + " is longer than the path bound");
    return std::pair<Pos, std::pair<Pos, Pos>>{*idx, {gsrc[gens.front()], gtgt[gens.back()]}};
  };
  for (std::size_t r = 0; r < p.relations.size(); ++r) {
    auto [i, bi] = resolve(p.relations[r].first, r);
    auto [j, bj] = resolve(p.relations[r].second, r);
    if (bi != bj) ill_formed("relation " + std::to_string(r) + ": paths are not parallel");
    uf.unite(i, j);
  }

  for (bool changed = true; changed;) {
    changed = false;
    for (Pos i = 0; i < npaths; ++i) {
      Pos r = uf.find(i);
      if (r == i) continue;
      for (Pos a = 0; a < ngen; ++a) {
        if (right[i][a] != none && right[r][a] != none)
          changed |= uf.unite(right[i][a], right[r][a]);
        if (left[i][a] != none && left[r][a] != none)
          changed |= uf.unite(left[i][a], left[r][a]);
      }
    }
  }

  // Every class must have a representative of length <= max_path_len. The
  // union-find root is the least index, i.e. the shortlex-least path.
  for (Pos i = 0; i < npaths; ++i)
    if (ps.paths[i].size() > max_path_len && ps.paths[uf.find(i)].size() > max_path_len)
      throw Error(ErrorCode::BoundExceeded,
                  "presentation does not close within path length " +
                      std::to_string(max_path_len));

  std::vector<Pos> class_of(npaths, none);
  std::vector<Pos> rep;
  for (Pos i = 0; i < npaths; ++i) {
    Pos r = uf.find(i);
    if (r == i) {
      class_of[i] = static_cast<Pos>(rep.size());
      rep.push_back(i);
    }
  }
  for (Pos i = 0; i < npaths; ++i) class_of[i] = class_of[uf.find(i)];

  FinCat::Table t;
  t.objects = p.objects;
  for (Pos k = 0; k < rep.size(); ++k) {
    const auto& path = ps.paths[rep[k]];
    std::string name;
    if (path.empty()) {
      name = "1_" + p.objects[ps.start[rep[k]]];
    } else {
      for (std::size_t q = 0; q < path.size(); ++q) {
        if (q) name += ';';
        name += p.arrows[path[q]].name;
      }
    }
    t.morphisms.push_back(std::move(name));
    t.src.push_back(ps.start[rep[k]]);
    t.tgt.push_back(ps.end[rep[k]]);
  }
  for (Pos o = 0; o < n; ++o) t.id.push_back(class_of[ps.identity_path[o]]);

  std::vector<Pos> gen_class(ngen);
  for (Pos a = 0; a < ngen; ++a) gen_class[a] = class_of[lookup({a}, 0).value()];
  for (Pos k = 0; k < rep.size(); ++k) {
    std::vector<Pos> f;
    for (Pos a : ps.paths[rep[k]]) f.push_back(gen_class[a]);
    t.factorization.push_back(std::move(f));
  }

  // Composition is the right action of the second representative's generators.
  for (Pos f = 0; f < rep.size(); ++f)
    for (Pos g = 0; g < rep.size(); ++g) {
      if (t.tgt[f] != t.src[g]) continue;
      Pos cur = rep[f];
      for (Pos a : ps.paths[rep[g]]) {
        Pos next = right[rep[class_of[cur]]][a];
        if (next == none)
          throw Error(ErrorCode::BoundExceeded, "composite escapes the enumerated paths");
        cur = next;
      }
      t.comp.push_back({f, g, class_of[cur]});
    }

  FinCat c = FinCat::from_table(ws, std::move(t));
  if (!validate_category(c).empty())
    throw Error(ErrorCode::BoundExceeded,
                "completed presentation fails the category axioms within path length " +
                    std::to_string(max_path_len));
  auto impl = std::make_shared<FinCat::Impl>(*c.impl_);
  impl->presentation = p;
  impl->presentation_bound = max_path_len;
  return FinCat(std::move(impl));
}

std::vector<Pos> hom_positions(const FinCat& c, Pos a, Pos b) {
  if (a >= c.object_count() || b >= c.object_count())
    throw Error(ErrorCode::UnknownObject, "hom-set of an unknown object");
  std::vector<Pos> out;
  for (Pos f : c.out_of(a))
    if (c.tgt(f) == b) out.push_back(f);
  return out;
}

FinSet hom_set(const FinCat& c, ElemId a, ElemId b) {
  std::vector<ElemId> ids;
  for (Pos f : hom_positions(c, c.object_pos(a), c.object_pos(b)))
    ids.push_back(c.morphisms()[f]);
  return FinSet::from_sorted(std::move(ids));
}

}  // namespace lfp
