#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lfp/error.hpp"

namespace lfp {

/// Position of an element inside a FinSet (its rank in ElemId order).
using Pos = std::uint32_t;

/// Opaque element identifier. Ordering follows allocation order.
struct ElemId {
  std::uint64_t value = 0;
  friend constexpr auto operator<=>(ElemId, ElemId) = default;
};

/// Owner of the fresh-id counter. Every construction that needs new elements
/// (coproducts, products, colimits, parsing) allocates through one workspace,
/// so re-running a computation in a fresh workspace reproduces the same ids.
///
/// A workspace must not be shared between threads while allocating.
class Workspace {
 public:
  Workspace() = default;
  Workspace(const Workspace&) = delete;
  Workspace& operator=(const Workspace&) = delete;

  ElemId fresh() { return ElemId{next_++}; }
  ElemId fresh(std::string label);
  /// Fresh id whose display label is taken from `origin`.
  ElemId fresh_like(ElemId origin);

  void set_label(ElemId id, std::string label);
  /// Display label, following copy chains; empty when none was recorded.
  std::string label(ElemId id) const;

  std::uint64_t allocated() const noexcept { return next_ - 1; }

 private:
  std::uint64_t next_ = 1;
  std::unordered_map<std::uint64_t, std::string> labels_;
  std::unordered_map<std::uint64_t, std::uint64_t> origins_;
};

/// Duplicate-free finite set of ids, iterated in ElemId order. Storage is
/// shared and immutable, so copies are cheap.
class FinSet {
 public:
  FinSet();
  /// Sorts the ids; throws ValidationError on duplicates.
  explicit FinSet(std::vector<ElemId> elements);
  /// Trusted constructor: `elements` must already be strictly increasing.
  static FinSet from_sorted(std::vector<ElemId> elements);

  std::size_t size() const noexcept { return elems_->size(); }
  bool empty() const noexcept { return elems_->empty(); }
  ElemId operator[](std::size_t i) const { return (*elems_)[i]; }
  std::optional<Pos> index_of(ElemId id) const;
  bool contains(ElemId id) const { return index_of(id).has_value(); }
  std::span<const ElemId> elements() const noexcept { return *elems_; }
  auto begin() const noexcept { return elems_->begin(); }
  auto end() const noexcept { return elems_->end(); }

  bool shares_storage_with(const FinSet& other) const noexcept {
    return elems_ == other.elems_;
  }

  friend bool operator==(const FinSet& a, const FinSet& b);

 private:
  std::shared_ptr<const std::vector<ElemId>> elems_;
};

/// Total function between finite sets, stored as the image position of every
/// domain element.
class FinFun {
 public:
  FinFun() = default;
  /// Throws ValidationError when sizes disagree or a position is out of range.
  FinFun(FinSet domain, FinSet codomain, std::vector<Pos> images);
  static FinFun from_graph(FinSet domain, FinSet codomain,
                           const std::map<ElemId, ElemId>& graph);

  const FinSet& domain() const noexcept { return dom_; }
  const FinSet& codomain() const noexcept { return cod_; }

  /// Image of a domain element; throws BoundaryMismatch outside the domain.
  ElemId operator()(ElemId x) const;
  Pos at(Pos x) const { return (*images_)[x]; }
  std::span<const Pos> images() const noexcept { return *images_; }

  friend bool operator==(const FinFun& a, const FinFun& b);

 private:
  FinSet dom_;
  FinSet cod_;
  std::shared_ptr<const std::vector<Pos>> images_ =
      std::make_shared<const std::vector<Pos>>();
};

FinFun identity(const FinSet& s);
/// `g` after `f`: x ↦ g(f(x)). Throws BoundaryMismatch unless cod f = dom g.
FinFun compose(const FinFun& f, const FinFun& g);

bool is_injective(const FinFun& f);
bool is_surjective(const FinFun& f);
bool is_bijection(const FinFun& f);

struct Coproduct {
  FinSet sum;
  std::vector<FinFun> injections;
};

/// Fresh copies of every part, allocated in (part, element) order.
Coproduct coproduct(Workspace& ws, std::span<const FinSet> parts);

/// The map out of a coproduct induced by one leg per part. Throws
/// BoundaryMismatch when the legs do not share a codomain or do not match the
/// parts.
FinFun copair(const Coproduct& c, std::span<const FinFun> legs);

struct Coequalizer {
  FinSet quotient_set;
  FinFun quotient;
};

/// Quotient of the common codomain by the least equivalence relation with
/// f(s) ~ g(s); each class is represented by its least id.
Coequalizer coequalizer(const FinFun& f, const FinFun& g);

/// Lazy enumeration of every function s → t in lexicographic order of the
/// image tuple (first domain element most significant).
class FunctionStream {
 public:
  FunctionStream(FinSet s, FinSet t);
  std::optional<FinFun> next();

 private:
  FinSet s_;
  FinSet t_;
  std::vector<Pos> current_;
  bool done_ = false;
  bool started_ = false;
};

FunctionStream all_functions(FinSet s, FinSet t);

}  // namespace lfp

template <>
struct std::hash<lfp::ElemId> {
  std::size_t operator()(lfp::ElemId id) const noexcept {
    return std::hash<std::uint64_t>{}(id.value);
  }
};
