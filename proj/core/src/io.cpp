#include "lfp/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace lfp {

namespace fs = std::filesystem;

std::string_view to_string(DocKind k) noexcept {
  switch (k) {
    case DocKind::Presentation: return "presentation";
    case DocKind::Category: return "category";
    case DocKind::Presheaf: return "presheaf";
    case DocKind::Morphism: return "morphism";
    case DocKind::Model: return "model";
    case DocKind::KanModel: return "kan_model";
    case DocKind::Trace: return "trace";
  }
  return "?";
}

std::optional<DocKind> parse_doc_kind(std::string_view s) noexcept {
  for (DocKind k : {DocKind::Presentation, DocKind::Category, DocKind::Presheaf,
                    DocKind::Morphism, DocKind::Model, DocKind::KanModel, DocKind::Trace})
    if (to_string(k) == s) return k;
  return std::nullopt;
}

void NameRegistry::name_presheaf(const Presheaf& x, std::string name) {
  presheaves_[x.identity_key()] = {x, std::move(name)};
}

const std::string* NameRegistry::presheaf_name(const Presheaf& x) const {
  auto it = presheaves_.find(x.identity_key());
  return it == presheaves_.end() ? nullptr : &it->second.second;
}

void NameRegistry::set_category_ref(const FinCat& c, Json ref) {
  categories_[c.identity_key()] = {c, std::move(ref)};
}

const Json* NameRegistry::category_ref(const FinCat& c) const {
  auto it = categories_.find(c.identity_key());
  return it == categories_.end() ? nullptr : &it->second.second;
}

namespace {

[[noreturn]] void parse_fail(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::ParseError, where + ": " + what);
}

void validation_fail(const std::string& where, const std::vector<Violation>& v) {
  if (v.empty()) return;
  std::string msg = where + ": " + std::to_string(v.size()) + " violation(s)";
  for (std::size_t i = 0; i < v.size() && i < 5; ++i) msg += "; " + v[i].rule + ": " + v[i].detail;
  throw Error(ErrorCode::ValidationError, msg);
}

const Json& need(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) parse_fail(where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) parse_fail(where, std::string("missing \"") + key + "\"");
  return *it;
}

const std::string& need_string(const Json& v, const std::string& where) {
  if (!v.is_string()) parse_fail(where, "expected a string");
  return v.get_ref<const std::string&>();
}

const Json& need_array(const Json& v, const std::string& where) {
  if (!v.is_array()) parse_fail(where, "expected an array");
  return v;
}

const Json& need_object(const Json& v, const std::string& where) {
  if (!v.is_object()) parse_fail(where, "expected an object");
  return v;
}

std::vector<std::string> names_of(const Workspace& ws, const FinSet& s) {
  std::vector<std::string> out;
  std::set<std::string> used;
  for (ElemId id : s) {
    std::string base = ws.label(id);
    if (base.empty()) base = "e" + std::to_string(id.value);
    std::string name = base;
    for (int k = 2; used.count(name); ++k) name = base + "#" + std::to_string(k);
    used.insert(name);
    out.push_back(std::move(name));
  }
  return out;
}

std::map<std::string, Pos> index_names(const Workspace& ws, const FinSet& s) {
  std::map<std::string, Pos> out;
  auto names = names_of(ws, s);
  for (Pos i = 0; i < names.size(); ++i) out.emplace(names[i], i);
  return out;
}

Pos object_named(const FinCat& c, const std::string& name, const std::string& where) {
  auto o = c.find_object(name);
  if (!o) parse_fail(where, "unknown object '" + name + "'");
  return *o;
}

FinFun function_from(const Workspace& ws, const Json& graph, const FinSet& dom, const FinSet& cod,
                     const std::string& where) {
  need_object(graph, where);
  auto dom_idx = index_names(ws, dom);
  auto cod_idx = index_names(ws, cod);
  std::vector<Pos> images(dom.size(), ~Pos{0});
  for (const auto& [key, val] : graph.items()) {
    auto d = dom_idx.find(key);
    if (d == dom_idx.end()) parse_fail(where, "unknown element '" + key + "'");
    auto c = cod_idx.find(need_string(val, where + "/" + key));
    if (c == cod_idx.end())
      parse_fail(where + "/" + key, "unknown element '" + val.get<std::string>() + "'");
    images[d->second] = c->second;
  }
  for (Pos i = 0; i < images.size(); ++i)
    if (images[i] == ~Pos{0}) parse_fail(where, "no image for element '" + names_of(ws, dom)[i] + "'");
  return FinFun(dom, cod, std::move(images));
}

}  // namespace

struct Loader::Scope {
  FinCat base;
  std::map<std::string, Presheaf> local;
};

Json Loader::read_document(const fs::path& file) {
  std::ifstream in(file);
  if (!in) parse_fail(file.string(), "cannot open file");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    parse_fail(file.string(), "byte " + std::to_string(e.byte) + ": " + e.what());
  }
  const std::string where = file.string();
  const auto& version = need_string(need(doc, "format_version", where), where + "/format_version");
  if (version.rfind("1.", 0) != 0) parse_fail(where, "unsupported format_version " + version);
  const auto& kind = need_string(need(doc, "kind", where), where + "/kind");
  if (!parse_doc_kind(kind)) parse_fail(where, "unknown kind '" + kind + "'");
  need(doc, "payload", where);
  return doc;
}

DocKind Loader::kind_of(const fs::path& file) {
  return *parse_doc_kind(read_document(file)["kind"].get<std::string>());
}

FinCat Loader::category_from(const Json& ref, const fs::path& dir) {
  const std::string where = "category";
  need_object(ref, where);
  FinCat c;
  if (ref.contains("include")) {
    fs::path file = dir / need_string(ref["include"], where + "/include");
    std::string key = fs::weakly_canonical(file).string();
    if (auto it = categories_.find(key); it != categories_.end()) {
      c = it->second;
    } else {
      if (std::find(include_stack_.begin(), include_stack_.end(), key) != include_stack_.end())
        parse_fail(file.string(), "include cycle");
      include_stack_.push_back(key);
      Json doc = read_document(file);
      auto kind = *parse_doc_kind(doc["kind"].get<std::string>());
      if (kind == DocKind::Presentation)
        c = presentation_from(doc["payload"]);
      else if (kind == DocKind::Category)
        c = table_from(doc["payload"]);
      else if (kind == DocKind::Model)
        c = load_model(file).base;
      else
        parse_fail(file.string(), "a " + std::string(to_string(kind)) + " document has no category");
      include_stack_.pop_back();
      categories_.emplace(key, c);
    }
  } else if (ref.contains("presentation")) {
    c = presentation_from(ref["presentation"]);
  } else if (ref.contains("category")) {
    c = table_from(ref["category"]);
  } else {
    parse_fail(where, "expected \"include\", \"presentation\" or \"category\"");
  }
  names_.set_category_ref(c, ref);
  return c;
}

FinCat Loader::presentation_from(const Json& payload) {
  const std::string where = "presentation";
  CatPresentation p;
  for (const auto& o : need_array(need(payload, "objects", where), where + "/objects"))
    p.objects.push_back(need_string(o, where + "/objects"));
  for (const auto& a : need_array(need(payload, "arrows", where), where + "/arrows"))
    p.arrows.push_back({need_string(need(a, "name", where + "/arrows"), where + "/arrows/name"),
                        need_string(need(a, "source", where + "/arrows"), where + "/arrows/source"),
                        need_string(need(a, "target", where + "/arrows"), where + "/arrows/target")});
  auto path = [&](const Json& j, const std::string& at) {
    CatPresentation::Path out;
    if (j.is_object()) {
      out.identity_at = need_string(need(j, "identity", at), at + "/identity");
    } else {
      for (const auto& a : need_array(j, at)) out.arrows.push_back(need_string(a, at));
      if (out.arrows.empty()) parse_fail(at, "empty path; use {\"identity\": object}");
    }
    return out;
  };
  const auto& rels = need_array(need(payload, "relations", where), where + "/relations");
  for (std::size_t i = 0; i < rels.size(); ++i) {
    std::string at = where + "/relations/" + std::to_string(i);
    if (!rels[i].is_array() || rels[i].size() != 2) parse_fail(at, "expected a pair of paths");
    p.relations.emplace_back(path(rels[i][0], at + "/0"), path(rels[i][1], at + "/1"));
  }
  const auto& bound = need(payload, "max_path_len", where);
  if (!bound.is_number_unsigned()) parse_fail(where + "/max_path_len", "expected a count");
  return from_presentation(ws_, p, bound.get<std::size_t>());
}

FinCat Loader::table_from(const Json& payload) {
  const std::string where = "category";
  FinCat::Table t;
  std::map<std::string, Pos> obj, mor;
  for (const auto& o : need_array(need(payload, "objects", where), where + "/objects")) {
    obj.emplace(need_string(o, where + "/objects"), static_cast<Pos>(t.objects.size()));
    t.objects.push_back(o.get<std::string>());
  }
  auto lookup = [&](const std::map<std::string, Pos>& m, const Json& j, const std::string& at) {
    auto it = m.find(need_string(j, at));
    if (it == m.end()) parse_fail(at, "unknown name '" + j.get<std::string>() + "'");
    return it->second;
  };
  for (const auto& f : need_array(need(payload, "morphisms", where), where + "/morphisms")) {
    std::string at = where + "/morphisms";
    const auto& name = need_string(need(f, "name", at), at + "/name");
    mor.emplace(name, static_cast<Pos>(t.morphisms.size()));
    t.morphisms.push_back(name);
    t.src.push_back(lookup(obj, need(f, "source", at), at + "/source"));
    t.tgt.push_back(lookup(obj, need(f, "target", at), at + "/target"));
  }
  const auto& ids = need_object(need(payload, "identities", where), where + "/identities");
  t.id.assign(t.objects.size(), 0);
  for (const auto& o : t.objects)
    t.id[obj[o]] = lookup(mor, need(ids, o.c_str(), where + "/identities"), where + "/identities/" + o);
  for (const auto& row : need_array(need(payload, "composition", where), where + "/composition")) {
    std::string at = where + "/composition";
    if (!row.is_array() || row.size() != 3) parse_fail(at, "expected [f, g, f;g]");
    t.comp.push_back({lookup(mor, row[0], at), lookup(mor, row[1], at), lookup(mor, row[2], at)});
  }
  FinCat c = FinCat::from_table(ws_, std::move(t));
  validation_fail(where, validate_category(c));
  return c;
}

Presheaf Loader::presheaf_body(const FinCat& base, const Json& body, const std::string& where) {
  const auto& sets_j = need_object(need(body, "sets", where), where + "/sets");
  std::vector<FinSet> sets(base.object_count());
  std::vector<bool> seen(base.object_count(), false);
  for (const auto& [oname, elems] : sets_j.items()) {
    std::string at = where + "/sets/" + oname;
    Pos o = object_named(base, oname, at);
    std::set<std::string> uniq;
    std::vector<ElemId> ids;
    for (const auto& e : need_array(elems, at)) {
      const auto& name = need_string(e, at);
      if (!uniq.insert(name).second) parse_fail(at, "duplicate element '" + name + "'");
      ids.push_back(ws_.fresh(name));
    }
    sets[o] = FinSet::from_sorted(std::move(ids));
    seen[o] = true;
  }
  for (Pos o = 0; o < base.object_count(); ++o)
    if (!seen[o]) parse_fail(where + "/sets", "no set for object '" + base.object_name(o) + "'");
  std::map<Pos, FinFun> actions;
  const auto& acts = need_object(need(body, "actions", where), where + "/actions");
  for (const auto& [fname, graph] : acts.items()) {
    std::string at = where + "/actions/" + fname;
    auto f = base.find_morphism(fname);
    if (!f || !base.is_generator(*f)) parse_fail(at, "'" + fname + "' is not a generating arrow");
    actions.emplace(*f, function_from(ws_, graph, sets[base.tgt(*f)], sets[base.src(*f)], at));
  }
  for (Pos g : base.generators())
    if (!actions.count(g))
      parse_fail(where + "/actions", "no action for '" + base.morphism_name(g) + "'");
  Presheaf x = Presheaf::from_generators(base, std::move(sets), actions);
  validation_fail(where, validate_presheaf(x));
  return x;
}

Presheaf Loader::resolve(const Scope& scope, const Json& ref, const std::string& where) {
  if (ref.is_string()) {
    auto it = scope.local.find(ref.get<std::string>());
    if (it == scope.local.end()) parse_fail(where, "unknown presheaf '" + ref.get<std::string>() + "'");
    return it->second;
  }
  if (ref.is_object() && ref.contains("yoneda"))
    return yoneda(scope.base, object_named(scope.base, need_string(ref["yoneda"], where), where));
  parse_fail(where, "expected a presheaf name or {\"yoneda\": object}");
}

PsMorphism Loader::morphism_body(const Scope& scope, const Json& body, const std::string& where) {
  Presheaf s = resolve(scope, need(body, "source", where), where + "/source");
  Presheaf t = resolve(scope, need(body, "target", where), where + "/target");
  const auto& comps = need_object(need(body, "components", where), where + "/components");
  std::vector<FinFun> funs(scope.base.object_count());
  std::vector<bool> seen(funs.size(), false);
  for (const auto& [oname, graph] : comps.items()) {
    std::string at = where + "/components/" + oname;
    Pos o = object_named(scope.base, oname, at);
    funs[o] = function_from(ws_, graph, s.at(o), t.at(o), at);
    seen[o] = true;
  }
  for (Pos o = 0; o < funs.size(); ++o)
    if (!seen[o]) {
      if (!s.at(o).empty())
        parse_fail(where + "/components", "no component at '" + scope.base.object_name(o) + "'");
      funs[o] = FinFun(s.at(o), t.at(o), {});
    }
  PsMorphism m(s, t, std::move(funs));
  validation_fail(where, validate_morphism(m));
  return m;
}

Presheaf Loader::presheaf_from(const Json& payload, const fs::path& dir) {
  FinCat base = category_from(need(payload, "base", "presheaf"), dir);
  return presheaf_body(base, payload, "presheaf");
}

PsMorphism Loader::morphism_from(const Json& payload, const fs::path& dir) {
  Scope scope{category_from(need(payload, "base", "morphism"), dir), {}};
  if (auto it = model_presheaves_.find(scope.base.identity_key()); it != model_presheaves_.end())
    scope.local = it->second;
  if (payload.contains("presheaves"))
    for (const auto& [name, body] : need_object(payload["presheaves"], "morphism/presheaves").items()) {
      Presheaf x = presheaf_body(scope.base, body, "morphism/presheaves/" + name);
      names_.name_presheaf(x, name);
      scope.local.insert_or_assign(name, x);
    }
  return morphism_body(scope, payload, "morphism");
}

PresheafModel Loader::model_from(const Json& payload, const fs::path& dir) {
  Scope scope{category_from(need(payload, "base", "model"), dir), {}};
  if (payload.contains("presheaves"))
    for (const auto& [name, body] : need_object(payload["presheaves"], "model/presheaves").items()) {
      Presheaf x = presheaf_body(scope.base, body, "model/presheaves/" + name);
      names_.name_presheaf(x, name);
      scope.local.emplace(name, x);
    }
  PresheafModel model{scope.base, {}, {}};
  const auto& conds = need_array(need(payload, "conditions", "model"), "model/conditions");
  for (std::size_t i = 0; i < conds.size(); ++i) {
    std::string at = "model/conditions/" + std::to_string(i);
    model.condition_names.push_back(need_string(need(conds[i], "name", at), at + "/name"));
    model.conditions.push_back(morphism_body(scope, conds[i], at));
  }
  validation_fail("model", validate_model(model));
  model_presheaves_[scope.base.identity_key()] = scope.local;
  return model;
}

KanModel Loader::kan_model_from(const Json& payload, const fs::path& dir) {
  const std::string where = "kan_model";
  FinCat src = category_from(need(payload, "source", where), dir);
  Scope scope{category_from(need(payload, "target", where), dir), {}};
  if (payload.contains("presheaves"))
    for (const auto& [name, body] : need_object(payload["presheaves"], where + "/presheaves").items()) {
      Presheaf x = presheaf_body(scope.base, body, where + "/presheaves/" + name);
      names_.name_presheaf(x, name);
      scope.local.emplace(name, x);
    }
  std::vector<Presheaf> objects(src.object_count());
  const auto& objs = need_object(need(payload, "objects", where), where + "/objects");
  for (Pos c = 0; c < src.object_count(); ++c) {
    const std::string& name = src.object_name(c);
    std::string at = where + "/objects/" + name;
    objects[c] = resolve(scope, need(objs, name.c_str(), where + "/objects"), at);
  }
  std::map<Pos, PsMorphism> images;
  const auto& mors = need_object(need(payload, "morphisms", where), where + "/morphisms");
  for (const auto& [fname, comps] : mors.items()) {
    std::string at = where + "/morphisms/" + fname;
    auto f = src.find_morphism(fname);
    if (!f || !src.is_generator(*f)) parse_fail(at, "'" + fname + "' is not a generating arrow");
    const Presheaf& a = objects[src.src(*f)];
    const Presheaf& b = objects[src.tgt(*f)];
    std::vector<FinFun> funs(scope.base.object_count());
    std::vector<bool> seen(funs.size(), false);
    for (const auto& [dname, graph] : need_object(comps, at).items()) {
      Pos d = object_named(scope.base, dname, at);
      funs[d] = function_from(ws_, graph, a.at(d), b.at(d), at + "/" + dname);
      seen[d] = true;
    }
    for (Pos d = 0; d < funs.size(); ++d)
      if (!seen[d]) {
        if (!a.at(d).empty()) parse_fail(at, "no component at '" + scope.base.object_name(d) + "'");
        funs[d] = FinFun(a.at(d), b.at(d), {});
      }
    images.emplace(*f, PsMorphism(a, b, std::move(funs)));
  }
  for (Pos g : src.generators())
    if (!images.count(g)) parse_fail(where + "/morphisms", "no image for '" + src.morphism_name(g) + "'");
  KanModel k = kan_model_from_generators(src, scope.base, std::move(objects), images);
  validation_fail(where, validate_kan_model(k));
  return k;
}

GameConfig Loader::config_from(const PresheafModel& model, const Json& body) {
  Scope scope{model.base, {}};
  if (auto it = model_presheaves_.find(model.base.identity_key()); it != model_presheaves_.end())
    scope.local = it->second;
  if (body.contains("presheaves"))
    for (const auto& [name, pb] : need_object(body["presheaves"], "config/presheaves").items())
      scope.local.insert_or_assign(name, presheaf_body(model.base, pb, "config/presheaves/" + name));
  return GameConfig{model, morphism_body(scope, body, "config")};
}

PsMorphism Loader::witness_from(const Json& images, const Presheaf& source, const Presheaf& target) {
  const FinCat& base = source.base();
  std::vector<FinFun> funs(base.object_count());
  for (Pos o = 0; o < base.object_count(); ++o) {
    const std::string& name = base.object_name(o);
    std::vector<Pos> pos;
    if (images.contains(name))
      for (const auto& v : need_array(images[name], "witness/" + name)) {
        if (!v.is_number_unsigned()) parse_fail("witness/" + name, "expected positions");
        pos.push_back(v.get<Pos>());
      }
    try {
      funs[o] = FinFun(source.at(o), target.at(o), std::move(pos));
    } catch (const Error& e) {
      throw Error(ErrorCode::StaleMove, "witness at " + name + " does not fit: " + e.what());
    }
  }
  return PsMorphism(source, target, std::move(funs));
}

Trace Loader::trace_from(const Json& payload, const fs::path& dir) {
  const std::string where = "trace";
  const Json& mref = need(payload, "model", where);
  PresheafModel model = mref.contains("include")
                            ? load_model(dir / need_string(mref["include"], where + "/model/include"))
                            : model_from(mref, dir);
  Trace t;
  t.initial = config_from(model, need(payload, "initial", where));
  GameConfig cur = t.initial;
  const auto& steps = need_array(need(payload, "steps", where), where + "/steps");
  for (std::size_t i = 0; i < steps.size(); ++i) {
    std::string at = where + "/steps/" + std::to_string(i);
    const auto& s = steps[i];
    auto kind = parse_move_kind(need_string(need(s, "kind", at), at + "/kind"));
    if (!kind) parse_fail(at + "/kind", "unknown move kind");
    const Json& cj = need(s, "condition", at);
    std::size_t cond = 0;
    if (cj.is_number_unsigned()) {
      cond = cj.get<std::size_t>();
    } else {
      auto it = std::find(model.condition_names.begin(), model.condition_names.end(),
                          need_string(cj, at + "/condition"));
      if (it == model.condition_names.end()) parse_fail(at + "/condition", "unknown condition");
      cond = static_cast<std::size_t>(it - model.condition_names.begin());
    }
    if (cond >= model.conditions.size()) parse_fail(at + "/condition", "condition out of range");
    const PsMorphism& g = model.conditions[cond];
    const auto& ws = need_array(need(s, "witnesses", at), at + "/witnesses");
    Move mv{*kind, cond, {}};
    auto side = [&](bool source_a, bool on_domain, std::size_t k) {
      if (k >= ws.size()) parse_fail(at + "/witnesses", "too few witnesses");
      return witness_from(ws[k], source_a ? g.source() : g.target(),
                          on_domain ? cur.domain() : cur.codomain());
    };
    switch (*kind) {
      case MoveKind::DomE: mv.witnesses = {side(true, true, 0), side(false, false, 1)}; break;
      case MoveKind::DomU: mv.witnesses = {side(false, true, 0), side(false, true, 1)}; break;
      case MoveKind::CodE: mv.witnesses = {side(true, false, 0)}; break;
      case MoveKind::CodU: mv.witnesses = {side(false, false, 0), side(false, false, 1)}; break;
    }
    std::string d = s.contains("digest") ? need_string(s["digest"], at + "/digest") : "";
    try {
      cur = apply_move(ws_, cur, mv);
    } catch (const Error& e) {
      throw Error(e.code(), at + ": " + e.what());
    }
    t.steps.push_back({std::move(mv), std::move(d)});
  }
  return t;
}

namespace {

template <class F>
auto with_kind(Loader& l, const fs::path& file, DocKind want, F&& f) {
  Json doc = l.read_document(file);
  auto kind = *parse_doc_kind(doc["kind"].get<std::string>());
  if (kind != want)
    parse_fail(file.string(), "expected a " + std::string(to_string(want)) + " document, found " +
                                  std::string(to_string(kind)));
  return f(doc["payload"], file.parent_path());
}

}  // namespace

FinCat Loader::load_category(const fs::path& file) {
  return category_from(Json{{"include", file.filename().string()}}, file.parent_path());
}

Presheaf Loader::load_presheaf(const fs::path& file) {
  return with_kind(*this, file, DocKind::Presheaf,
                   [&](const Json& p, const fs::path& dir) { return presheaf_from(p, dir); });
}

PsMorphism Loader::load_morphism(const fs::path& file) {
  return with_kind(*this, file, DocKind::Morphism,
                   [&](const Json& p, const fs::path& dir) { return morphism_from(p, dir); });
}

PresheafModel Loader::load_model(const fs::path& file) {
  std::string key = fs::weakly_canonical(file).string();
  if (auto it = models_.find(key); it != models_.end()) return it->second;
  PresheafModel m = with_kind(*this, file, DocKind::Model,
                              [&](const Json& p, const fs::path& dir) { return model_from(p, dir); });
  models_.emplace(key, m);
  return m;
}

KanModel Loader::load_kan_model(const fs::path& file) {
  return with_kind(*this, file, DocKind::KanModel,
                   [&](const Json& p, const fs::path& dir) { return kan_model_from(p, dir); });
}

Trace Loader::load_trace(const fs::path& file) {
  return with_kind(*this, file, DocKind::Trace,
                   [&](const Json& p, const fs::path& dir) { return trace_from(p, dir); });
}

struct Writer::Naming {
  const FinCat* base = nullptr;
  std::map<const void*, std::string> assigned;
  std::set<std::string> used;
  Json presheaves = Json::object();
};

Json Writer::envelope(DocKind kind, Json payload) {
  Json doc = Json::object();
  doc["format_version"] = std::string(kFormatVersion);
  doc["kind"] = std::string(to_string(kind));
  doc["payload"] = std::move(payload);
  return doc;
}

std::vector<std::string> Writer::element_names(const FinSet& s) const { return names_of(ws_, s); }

Json Writer::presentation_payload(const CatPresentation& p, std::size_t bound) const {
  Json out = Json::object();
  out["objects"] = p.objects;
  Json arrows = Json::array();
  for (const auto& a : p.arrows)
    arrows.push_back(Json{{"name", a.name}, {"source", a.source}, {"target", a.target}});
  out["arrows"] = std::move(arrows);
  auto path = [](const CatPresentation::Path& q) {
    return q.arrows.empty() ? Json{{"identity", q.identity_at}} : Json(q.arrows);
  };
  Json rels = Json::array();
  for (const auto& [l, r] : p.relations) rels.push_back(Json::array({path(l), path(r)}));
  out["relations"] = std::move(rels);
  out["max_path_len"] = bound;
  return out;
}

Json Writer::table_payload(const FinCat& c) const {
  Json out = Json::object();
  Json objs = Json::array();
  for (Pos o = 0; o < c.object_count(); ++o) objs.push_back(c.object_name(o));
  out["objects"] = std::move(objs);
  Json mors = Json::array();
  for (Pos f = 0; f < c.morphism_count(); ++f)
    mors.push_back(Json{{"name", c.morphism_name(f)},
                        {"source", c.object_name(c.src(f))},
                        {"target", c.object_name(c.tgt(f))}});
  out["morphisms"] = std::move(mors);
  Json ids = Json::object();
  for (Pos o = 0; o < c.object_count(); ++o) ids[c.object_name(o)] = c.morphism_name(c.id(o));
  out["identities"] = std::move(ids);
  Json comp = Json::array();
  for (Pos f = 0; f < c.morphism_count(); ++f)
    for (Pos g : c.out_of(c.tgt(f)))
      comp.push_back(Json::array({c.morphism_name(f), c.morphism_name(g), c.morphism_name(c.comp(f, g))}));
  out["composition"] = std::move(comp);
  return out;
}

Json Writer::category_ref(const FinCat& c) const {
  if (!inline_ && names_)
    if (const Json* ref = names_->category_ref(c)) return *ref;
  if (const CatPresentation* p = c.presentation())
    return Json{{"presentation", presentation_payload(*p, c.presentation_bound())}};
  return Json{{"category", table_payload(c)}};
}

Json Writer::presheaf_body(const Presheaf& x) const {
  const FinCat& c = x.base();
  Json out = Json::object();
  Json sets = Json::object();
  std::vector<std::vector<std::string>> names;
  for (Pos o = 0; o < c.object_count(); ++o) {
    names.push_back(element_names(x.at(o)));
    sets[c.object_name(o)] = names.back();
  }
  out["sets"] = std::move(sets);
  Json actions = Json::object();
  for (Pos f : c.generators()) {
    Json graph = Json::object();
    const auto& from = names[c.tgt(f)];
    const auto& to = names[c.src(f)];
    for (Pos e = 0; e < from.size(); ++e) graph[from[e]] = to[x.action(f).at(e)];
    actions[c.morphism_name(f)] = std::move(graph);
  }
  out["actions"] = std::move(actions);
  return out;
}

Json Writer::presheaf_payload(const Presheaf& x) const {
  Json out = Json::object();
  out["base"] = category_ref(x.base());
  Json body = presheaf_body(x);
  for (auto& [k, v] : body.items()) out[k] = v;
  return out;
}

Json Writer::morphism_components(const PsMorphism& m) const {
  const FinCat& c = m.source().base();
  Json comps = Json::object();
  for (Pos o = 0; o < c.object_count(); ++o) {
    auto from = element_names(m.source().at(o));
    auto to = element_names(m.target().at(o));
    Json graph = Json::object();
    for (Pos e = 0; e < from.size(); ++e) graph[from[e]] = to[m.at(o).at(e)];
    comps[c.object_name(o)] = std::move(graph);
  }
  return comps;
}

Json Writer::presheaf_ref(Naming& naming, const Presheaf& x, const std::string& fallback) const {
  if (auto it = naming.assigned.find(x.identity_key()); it != naming.assigned.end())
    return it->second;
  const FinCat& c = *naming.base;
  for (Pos o = 0; o < c.object_count(); ++o)
    if (same_presheaf(x, yoneda(c, o))) return Json{{"yoneda", c.object_name(o)}};
  std::string base = fallback;
  if (names_)
    if (const std::string* n = names_->presheaf_name(x)) base = *n;
  std::string name = base;
  for (int k = 2; naming.used.count(name); ++k) name = base + "_" + std::to_string(k);
  naming.used.insert(name);
  naming.assigned.emplace(x.identity_key(), name);
  naming.presheaves[name] = presheaf_body(x);
  return name;
}

Json Writer::morphism_payload(const PsMorphism& m) const {
  Naming naming;
  naming.base = &m.source().base();
  Json s = presheaf_ref(naming, m.source(), "X");
  Json t = presheaf_ref(naming, m.target(), "Y");
  Json out = Json::object();
  out["base"] = category_ref(m.source().base());
  out["presheaves"] = std::move(naming.presheaves);
  out["source"] = std::move(s);
  out["target"] = std::move(t);
  out["components"] = morphism_components(m);
  return out;
}

Json Writer::model_payload(const PresheafModel& model) const {
  Naming naming;
  naming.base = &model.base;
  Json conds = Json::array();
  for (std::size_t i = 0; i < model.conditions.size(); ++i) {
    const auto& g = model.conditions[i];
    std::string name = i < model.condition_names.size() ? model.condition_names[i]
                                                        : "g" + std::to_string(i);
    Json cj = Json::object();
    cj["name"] = name;
    cj["source"] = presheaf_ref(naming, g.source(), "A_" + name);
    cj["target"] = presheaf_ref(naming, g.target(), "B_" + name);
    cj["components"] = morphism_components(g);
    conds.push_back(std::move(cj));
  }
  Json out = Json::object();
  out["base"] = category_ref(model.base);
  out["presheaves"] = std::move(naming.presheaves);
  out["conditions"] = std::move(conds);
  return out;
}

Json Writer::kan_payload(const KanModel& f) const {
  Naming naming;
  naming.base = &f.target;
  Json objs = Json::object();
  for (Pos c = 0; c < f.source.object_count(); ++c)
    objs[f.source.object_name(c)] = presheaf_ref(naming, f.objects[c], "F_" + f.source.object_name(c));
  Json mors = Json::object();
  for (Pos g : f.source.generators())
    mors[f.source.morphism_name(g)] = morphism_components(f.morphisms[g]);
  Json out = Json::object();
  out["source"] = category_ref(f.source);
  out["target"] = category_ref(f.target);
  out["presheaves"] = std::move(naming.presheaves);
  out["objects"] = std::move(objs);
  out["morphisms"] = std::move(mors);
  return out;
}

Json Writer::config_body(const GameConfig& cfg) const {
  Json out = Json::object();
  Json ps = Json::object();
  ps["X"] = presheaf_body(cfg.domain());
  ps["Y"] = presheaf_body(cfg.codomain());
  out["presheaves"] = std::move(ps);
  out["source"] = "X";
  out["target"] = "Y";
  out["components"] = morphism_components(cfg.m);
  return out;
}

Json Writer::witness(const PsMorphism& w) const {
  const FinCat& c = w.source().base();
  Json out = Json::object();
  for (Pos o = 0; o < c.object_count(); ++o) {
    auto images = w.at(o).images();
    out[c.object_name(o)] = std::vector<Pos>(images.begin(), images.end());
  }
  return out;
}

Json Writer::trace_payload(const Trace& t) const {
  const auto& model = t.initial.model;
  Json steps = Json::array();
  for (const auto& s : t.steps) {
    Json sj = Json::object();
    sj["kind"] = std::string(to_string(s.move.kind));
    sj["condition"] = s.move.condition < model.condition_names.size()
                          ? Json(model.condition_names[s.move.condition])
                          : Json(s.move.condition);
    Json ws = Json::array();
    for (const auto& w : s.move.witnesses) ws.push_back(witness(w));
    sj["witnesses"] = std::move(ws);
    sj["digest"] = s.digest;
    steps.push_back(std::move(sj));
  }
  Json out = Json::object();
  out["model"] = model_payload(model);
  out["initial"] = config_body(t.initial);
  out["steps"] = std::move(steps);
  return out;
}

std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

void write_file(const fs::path& file, const Json& doc) {
  std::ofstream out(file);
  if (!out) throw Error(ErrorCode::ParseError, file.string() + ": cannot write file");
  out << dump(doc);
}

Json canonical_document(const fs::path& file) {
  Workspace ws;
  Loader l(ws);
  Writer w(ws, &l.names());
  switch (l.kind_of(file)) {
    case DocKind::Presentation: {
      FinCat c = l.load_category(file);
      return Writer::envelope(DocKind::Presentation,
                              w.presentation_payload(*c.presentation(), c.presentation_bound()));
    }
    case DocKind::Category:
      return Writer::envelope(DocKind::Category, w.table_payload(l.load_category(file)));
    case DocKind::Presheaf:
      return Writer::envelope(DocKind::Presheaf, w.presheaf_payload(l.load_presheaf(file)));
    case DocKind::Morphism:
      return Writer::envelope(DocKind::Morphism, w.morphism_payload(l.load_morphism(file)));
    case DocKind::Model:
      return Writer::envelope(DocKind::Model, w.model_payload(l.load_model(file)));
    case DocKind::KanModel:
      return Writer::envelope(DocKind::KanModel, w.kan_payload(l.load_kan_model(file)));
    case DocKind::Trace:
      return Writer::envelope(DocKind::Trace, w.trace_payload(l.load_trace(file)));
  }
  throw Error(ErrorCode::ParseError, file.string() + ": unknown kind");
}

Json sizes_json(const Presheaf& x) {
  Json out = Json::array();
  const FinCat& c = x.base();
  for (Pos o = 0; o < c.object_count(); ++o)
    out.push_back(Json{{"object", c.object_name(o)}, {"size", x.at(o).size()}});
  return out;
}

Json verdict_json(const ConditionVerdict& v, const FinCat& target) {
  Json out = Json::object();
  out["condition"] = v.condition_name;
  out["index"] = v.condition_index;
  out["status"] = std::string(to_string(v.status));
  out["rounds"] = v.rounds;
  out["moves"] = v.trace ? v.trace->steps.size() : 0;
  Json sizes = Json::array();
  for (Pos o = 0; o < target.object_count(); ++o)
    sizes.push_back(Json{{"object", target.object_name(o)},
                         {"source", v.source_sizes.at(o)},
                         {"target", v.target_sizes.at(o)}});
  out["sizes"] = std::move(sizes);
  if (v.trace && !v.trace->steps.empty()) out["final_digest"] = v.trace->steps.back().digest;
  return out;
}

Json report_json(const CriterionReport& r, const FinCat& target, std::string_view command) {
  Json out = Json::object();
  out["command"] = std::string(command);
  out["summary"] = std::string(to_string(r.summary));
  out["description"] = std::string(describe(r.summary));
  out["exit_code"] = exit_code(r.summary);
  Json vs = Json::array();
  for (const auto& v : r.verdicts) vs.push_back(verdict_json(v, target));
  out["verdicts"] = std::move(vs);
  return out;
}

Json closure_json(const ClosureReport& r, const FinCat& base) {
  Json out = Json::object();
  out["command"] = "check-cc";
  out["summary"] = std::string(to_string(r.summary));
  out["description"] = std::string(describe(r.summary));
  out["exit_code"] = exit_code(r.summary);
  Json objs = Json::array();
  for (Pos c = 0; c < r.per_object.size(); ++c) {
    Json oj = Json::object();
    oj["object"] = base.object_name(c);
    oj["summary"] = std::string(to_string(r.per_object[c].summary));
    Json vs = Json::array();
    for (const auto& v : r.per_object[c].verdicts) vs.push_back(verdict_json(v, base));
    oj["verdicts"] = std::move(vs);
    objs.push_back(std::move(oj));
  }
  out["objects"] = std::move(objs);
  return out;
}

}  // namespace lfp
