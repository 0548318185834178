#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lfp/error.hpp"
#include "lfp/finbase.hpp"
#include "lfp/fincat.hpp"

namespace lfp {

/// Finite presheaf X over a finite base: a set X(c) per object and, for every
/// f: c -> c', the action X(f): X(c') -> X(c). Cheap to copy.
class Presheaf {
 public:
  Presheaf();
  /// Checks boundaries only; functoriality is validate_presheaf's job.
  /// Throws BoundaryMismatch when an action does not run X(tgt f) -> X(src f).
  Presheaf(FinCat base, std::vector<FinSet> sets, std::vector<FinFun> actions);
  /// Derives the action of every morphism from the actions of generators,
  /// using the base's factorizations. Throws ValidationError when a generator
  /// is missing.
  static Presheaf from_generators(FinCat base, std::vector<FinSet> sets,
                                  const std::map<Pos, FinFun>& generator_actions);

  const FinCat& base() const noexcept;
  const FinSet& at(Pos c) const;
  const FinFun& action(Pos f) const;
  std::size_t size_at(Pos c) const { return at(c).size(); }
  std::vector<std::size_t> sizes() const;
  std::size_t total_size() const;

  bool shares_storage_with(const Presheaf& other) const noexcept {
    return impl_ == other.impl_;
  }
  const void* identity_key() const noexcept { return impl_.get(); }

 public:
  struct Impl;

 private:
  std::shared_ptr<const Impl> impl_;
};

/// Equal bases, equal element sets and equal actions.
bool same_presheaf(const Presheaf& a, const Presheaf& b);

Presheaf empty_presheaf(const FinCat& base);
/// One fresh element per object.
Presheaf terminal_presheaf(Workspace& ws, const FinCat& base);

/// Natural family of functions X(c) -> Y(c).
class PsMorphism {
 public:
  PsMorphism() = default;
  /// Checks boundaries only; naturality is validate_morphism's job.
  PsMorphism(Presheaf source, Presheaf target, std::vector<FinFun> components);
  static PsMorphism identity(const Presheaf& x);

  const Presheaf& source() const noexcept { return source_; }
  const Presheaf& target() const noexcept { return target_; }
  const FinFun& at(Pos c) const { return components_.at(c); }
  const std::vector<FinFun>& components() const noexcept { return components_; }

  friend bool operator==(const PsMorphism& a, const PsMorphism& b);

 private:
  Presheaf source_;
  Presheaf target_;
  std::vector<FinFun> components_;
};

/// `g` after `f`. Throws BoundaryMismatch unless target(f) is source(g).
PsMorphism compose(const PsMorphism& f, const PsMorphism& g);

std::vector<Violation> validate_presheaf(const Presheaf& x);
std::vector<Violation> validate_morphism(const PsMorphism& m);
bool is_iso(const PsMorphism& m);

struct PresheafModel {
  FinCat base;
  std::vector<PsMorphism> conditions;
  std::vector<std::string> condition_names;
};

std::vector<Violation> validate_model(const PresheafModel& model);

/// Partial assignment used to constrain enumeration: fixed[c][x] pins the
/// image of the x-th element of X(c).
using PinnedImages = std::vector<std::vector<std::optional<Pos>>>;

/// Lazy enumeration of natural transformations X -> Y. Elements are assigned
/// one at a time, objects with most incoming morphisms first, and every
/// assignment propagates along all actions, so partial families that break a
/// naturality square are cut immediately.
class NatTransStream {
 public:
  /// Throws BaseMismatch when X and Y live over different bases.
  NatTransStream(Presheaf x, Presheaf y, const PinnedImages& pinned = {});
  /// A stream over X -> Y that yields nothing.
  static NatTransStream exhausted(Presheaf x, Presheaf y);
  std::optional<PsMorphism> next();

 private:
  bool assign(Pos c, Pos x, Pos v);
  void undo_to(std::size_t mark);
  PsMorphism emit() const;

  Presheaf x_, y_;
  std::vector<std::pair<Pos, Pos>> order_;
  std::vector<std::vector<Pos>> value_;
  std::vector<std::pair<Pos, Pos>> trail_;
  struct Decision {
    std::size_t var;
    Pos value;
    std::size_t mark;
  };
  std::vector<Decision> stack_;
  bool ok_ = true;
  bool started_ = false;
  bool done_ = false;
};

NatTransStream enumerate_nat_trans(const Presheaf& x, const Presheaf& y);
std::size_t count_nat_trans(const Presheaf& x, const Presheaf& y);

/// Morphisms h: cod(g) -> x with h∘g = f, lazily.
NatTransStream extensions(const PsMorphism& g, const PsMorphism& f, const Presheaf& x);
/// At most `limit` extensions, materialized.
std::vector<PsMorphism> list_extensions(const PsMorphism& g, const PsMorphism& f,
                                        std::size_t limit = static_cast<std::size_t>(-1));

struct Diagram {
  FinCat base;
  FinCat shape;
  std::vector<Presheaf> nodes;
  /// One edge per shape morphism, identities included.
  std::vector<PsMorphism> edges;
};

/// Fills identity edges and composites from the shape's factorizations.
Diagram make_diagram(FinCat base, FinCat shape, std::vector<Presheaf> nodes,
                     const std::map<Pos, PsMorphism>& generator_edges);
std::vector<Violation> validate_diagram(const Diagram& d);

struct ColimitResult {
  Presheaf value;
  std::vector<PsMorphism> coprojections;
};

/// Pointwise coequalizer of the two canonical maps out of the coproduct of
/// edge sources into the coproduct of nodes. Each class gets one fresh id,
/// labelled like its least member.
ColimitResult colimit(Workspace& ws, const Diagram& d);

struct PushoutResult {
  Presheaf value;
  PsMorphism from_f_target;
  PsMorphism from_g_target;
};
PushoutResult pushout(Workspace& ws, const PsMorphism& f, const PsMorphism& g);

struct CoequalizerResult {
  Presheaf value;
  PsMorphism quotient;
};
CoequalizerResult coequalizer_ps(Workspace& ws, const PsMorphism& h, const PsMorphism& h2);

/// The mediating morphism colim -> target determined by the legs. Throws
/// NotACocone when the legs do not commute with the diagram.
PsMorphism factor_cocone(const Diagram& d, const ColimitResult& colim,
                         const std::vector<PsMorphism>& legs, const Presheaf& target);

struct ProductResult {
  Presheaf value;
  PsMorphism first;
  PsMorphism second;
};
/// Elements of X(c) × Y(c) in lexicographic position order.
ProductResult product(Workspace& ws, const Presheaf& x, const Presheaf& y);

struct TensorResult {
  Presheaf value;
  std::vector<PsMorphism> coprojections;
};
/// n disjoint copies of x; copy k occupies positions [k·|x(c)|, (k+1)·|x(c)|).
TensorResult tensor(Workspace& ws, const Presheaf& x, std::size_t n);

/// Binary coproduct as a two-node discrete colimit.
ColimitResult coproduct(Workspace& ws, const Presheaf& x, const Presheaf& y);

struct OrthogonalityResult {
  bool orthogonal = true;
  /// A map f: A -> x with zero or at least two liftings along g.
  std::optional<PsMorphism> witness;
  std::size_t liftings = 0;
};

/// Decides x ⊥ g: every f: A -> x extends uniquely along g: A -> B.
OrthogonalityResult check_orthogonal(const Presheaf& x, const PsMorphism& g);

}  // namespace lfp
