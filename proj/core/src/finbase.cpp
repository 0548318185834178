#include "lfp/finbase.hpp"

#include <algorithm>

#include "lfp/detail/union_find.hpp"

namespace lfp {

ElemId Workspace::fresh(std::string label) {
  ElemId id = fresh();
  labels_.emplace(id.value, std::move(label));
  return id;
}

ElemId Workspace::fresh_like(ElemId origin) {
  ElemId id = fresh();
  origins_.emplace(id.value, origin.value);
  return id;
}

void Workspace::set_label(ElemId id, std::string label) {
  labels_[id.value] = std::move(label);
}

std::string Workspace::label(ElemId id) const {
  std::uint64_t v = id.value;
  for (;;) {
    if (auto it = labels_.find(v); it != labels_.end()) return it->second;
    auto o = origins_.find(v);
    if (o == origins_.end()) return {};
    v = o->second;
  }
}

namespace {
const std::shared_ptr<const std::vector<ElemId>>& empty_elems() {
  static const auto empty = std::make_shared<const std::vector<ElemId>>();
  return empty;
}
}  // namespace

FinSet::FinSet() : elems_(empty_elems()) {}

FinSet::FinSet(std::vector<ElemId> elements) {
  std::sort(elements.begin(), elements.end());
  if (std::adjacent_find(elements.begin(), elements.end()) != elements.end())
    throw Error(ErrorCode::ValidationError, "duplicate element in finite set");
  elems_ = std::make_shared<const std::vector<ElemId>>(std::move(elements));
}

FinSet FinSet::from_sorted(std::vector<ElemId> elements) {
  FinSet s;
  s.elems_ = std::make_shared<const std::vector<ElemId>>(std::move(elements));
  return s;
}

std::optional<Pos> FinSet::index_of(ElemId id) const {
  auto it = std::lower_bound(elems_->begin(), elems_->end(), id);
  if (it == elems_->end() || *it != id) return std::nullopt;
  return static_cast<Pos>(it - elems_->begin());
}

bool operator==(const FinSet& a, const FinSet& b) {
  return a.elems_ == b.elems_ || *a.elems_ == *b.elems_;
}

FinFun::FinFun(FinSet domain, FinSet codomain, std::vector<Pos> images)
    : dom_(std::move(domain)), cod_(std::move(codomain)) {
  if (images.size() != dom_.size())
    throw Error(ErrorCode::ValidationError, "function graph is not total");
  for (Pos p : images)
    if (p >= cod_.size())
      throw Error(ErrorCode::ValidationError, "function image outside codomain");
  images_ = std::make_shared<const std::vector<Pos>>(std::move(images));
}

FinFun FinFun::from_graph(FinSet domain, FinSet codomain,
                          const std::map<ElemId, ElemId>& graph) {
  std::vector<Pos> images;
  images.reserve(domain.size());
  for (ElemId x : domain) {
    auto it = graph.find(x);
    if (it == graph.end())
      throw Error(ErrorCode::ValidationError, "function graph is not total");
    auto p = codomain.index_of(it->second);
    if (!p) throw Error(ErrorCode::ValidationError, "function image outside codomain");
    images.push_back(*p);
  }
  return FinFun(std::move(domain), std::move(codomain), std::move(images));
}

ElemId FinFun::operator()(ElemId x) const {
  auto p = dom_.index_of(x);
  if (!p) throw Error(ErrorCode::BoundaryMismatch, "element outside function domain");
  return cod_[(*images_)[*p]];
}

bool operator==(const FinFun& a, const FinFun& b) {
  return a.dom_ == b.dom_ && a.cod_ == b.cod_ &&
         (a.images_ == b.images_ || *a.images_ == *b.images_);
}

FinFun identity(const FinSet& s) {
  std::vector<Pos> images(s.size());
  for (Pos i = 0; i < images.size(); ++i) images[i] = i;
  return FinFun(s, s, std::move(images));
}

FinFun compose(const FinFun& f, const FinFun& g) {
  if (!(f.codomain() == g.domain()))
    throw Error(ErrorCode::BoundaryMismatch, "compose: codomain of f differs from domain of g");
  std::vector<Pos> images(f.domain().size());
  for (Pos i = 0; i < images.size(); ++i) images[i] = g.at(f.at(i));
  return FinFun(f.domain(), g.codomain(), std::move(images));
}

bool is_injective(const FinFun& f) {
  std::vector<char> hit(f.codomain().size(), 0);
  for (Pos p : f.images()) {
    if (hit[p]) return false;
    hit[p] = 1;
  }
  return true;
}

bool is_surjective(const FinFun& f) {
  std::vector<char> hit(f.codomain().size(), 0);
  std::size_t count = 0;
  for (Pos p : f.images())
    if (!hit[p]) {
      hit[p] = 1;
      ++count;
    }
  return count == f.codomain().size();
}

bool is_bijection(const FinFun& f) {
  return f.domain().size() == f.codomain().size() && is_injective(f);
}

Coproduct coproduct(Workspace& ws, std::span<const FinSet> parts) {
  std::vector<ElemId> sum;
  std::size_t total = 0;
  for (const auto& p : parts) total += p.size();
  sum.reserve(total);
  for (const auto& p : parts)
    for (ElemId x : p) sum.push_back(ws.fresh_like(x));
  Coproduct out;
  out.sum = FinSet::from_sorted(std::move(sum));
  Pos offset = 0;
  for (const auto& p : parts) {
    std::vector<Pos> images(p.size());
    for (Pos i = 0; i < images.size(); ++i) images[i] = offset + i;
    offset += static_cast<Pos>(p.size());
    out.injections.emplace_back(p, out.sum, std::move(images));
  }
  return out;
}

FinFun copair(const Coproduct& c, std::span<const FinFun> legs) {
  if (legs.size() != c.injections.size())
    throw Error(ErrorCode::BoundaryMismatch, "copair: one leg per summand expected");
  if (legs.empty()) return FinFun(c.sum, FinSet{}, {});
  const FinSet& target = legs.front().codomain();
  std::vector<Pos> images(c.sum.size());
  for (std::size_t i = 0; i < legs.size(); ++i) {
    if (!(legs[i].codomain() == target))
      throw Error(ErrorCode::BoundaryMismatch, "copair: legs disagree on codomain");
    if (!(legs[i].domain() == c.injections[i].domain()))
      throw Error(ErrorCode::BoundaryMismatch, "copair: leg domain differs from summand");
    for (Pos x = 0; x < legs[i].domain().size(); ++x)
      images[c.injections[i].at(x)] = legs[i].at(x);
  }
  return FinFun(c.sum, target, std::move(images));
}

Coequalizer coequalizer(const FinFun& f, const FinFun& g) {
  if (!(f.domain() == g.domain()) || !(f.codomain() == g.codomain()))
    throw Error(ErrorCode::BoundaryMismatch, "coequalizer: maps are not parallel");
  const FinSet& t = f.codomain();
  detail::UnionFind uf(t.size());
  for (Pos s = 0; s < f.domain().size(); ++s) uf.unite(f.at(s), g.at(s));
  // Positions follow id order, so the least position is the least id.
  std::vector<ElemId> reps;
  std::vector<Pos> class_of(t.size());
  std::vector<Pos> rep_index(t.size(), 0);
  for (Pos x = 0; x < t.size(); ++x) {
    Pos root = uf.find(x);
    if (root == x) {
      rep_index[x] = static_cast<Pos>(reps.size());
      reps.push_back(t[x]);
    }
    class_of[x] = rep_index[root];
  }
  Coequalizer out;
  out.quotient_set = FinSet::from_sorted(std::move(reps));
  out.quotient = FinFun(t, out.quotient_set, std::move(class_of));
  return out;
}

FunctionStream::FunctionStream(FinSet s, FinSet t)
    : s_(std::move(s)), t_(std::move(t)), current_(s_.size(), 0) {
  if (t_.empty() && !s_.empty()) done_ = true;
}

std::optional<FinFun> FunctionStream::next() {
  if (done_) return std::nullopt;
  if (started_) {
    // odometer step, last position fastest
    std::size_t i = current_.size();
    for (;;) {
      if (i == 0) {
        done_ = true;
        return std::nullopt;
      }
      --i;
      if (++current_[i] < t_.size()) break;
      current_[i] = 0;
    }
  }
  started_ = true;
  return FinFun(s_, t_, current_);
}

FunctionStream all_functions(FinSet s, FinSet t) {
  return FunctionStream(std::move(s), std::move(t));
}

}  // namespace lfp
