#pragma once

#include <optional>
#include <vector>

#include "lfp/presheaf.hpp"

namespace lfp {

/// Functor F: C -> psh(D) given by finite data. F(f): F(c) -> F(c') for
/// f: c -> c' (covariant).
struct KanModel {
  FinCat source;
  FinCat target;
  std::vector<Presheaf> objects;
  std::vector<PsMorphism> morphisms;
};

std::vector<Violation> validate_kan_model(const KanModel& f);

/// Fills in the images of composites from generator images, F(f;g) = F(g)∘F(f).
KanModel kan_model_from_generators(FinCat source, FinCat target, std::vector<Presheaf> objects,
                                   const std::map<Pos, PsMorphism>& generator_images);

/// c ↦ y(c), f ↦ post-composition with f.
KanModel yoneda_kan_model(const FinCat& c);

/// Where a colimit element came from: the copy of F(c) indexed by the x-th
/// element of X(c), element u of F(c)(d).
struct LanProvenance {
  Pos c;
  Pos x;
  Pos u;
};

/// Lan F (X) together with the bookkeeping that realizes the coprojections
/// p^c: F(c) ⊗ X(c) -> Lan F (X).
class LanResult {
 public:
  LanResult() = default;

  const Presheaf& value() const noexcept { return value_; }
  /// Class of (c, x, u) at target object d.
  Pos class_of(Pos d, Pos c, Pos x, Pos u) const;
  /// Least generator of the class `cls` at d.
  LanProvenance provenance(Pos d, Pos cls) const;
  /// p^c as a morphism out of `tensor` = tensor(F(c), |X(c)|).
  PsMorphism coprojection(const Presheaf& tensor, Pos c) const;

 private:
  friend LanResult lan_apply(Workspace&, const KanModel&, const Presheaf&);
  Presheaf value_;
  std::vector<std::size_t> x_sizes_;
  // offset_[d][c]: first slot of the block F(c)(d) × X(c); slot order within a
  // block is (x, u) with u fastest
  std::vector<std::vector<Pos>> offset_;
  std::vector<std::vector<Pos>> fc_size_;
  std::vector<std::vector<Pos>> class_;
  std::vector<std::vector<Pos>> rep_;
};

/// The coend ∫^c F(c) ⊗ X(c): per object of D, the coequalizer of
/// (f, u, x) ↦ (c', x, F(f)(u)) and (f, u, x) ↦ (c, X(f)(x), u) over all
/// f: c -> c'. Throws BaseMismatch unless x lives over F's source.
LanResult lan_apply(Workspace& ws, const KanModel& f, const Presheaf& x);

/// Lan F (m), pushing the least generator of every class through m.
PsMorphism lan_map(const KanModel& f, const LanResult& from, const LanResult& to,
                   const PsMorphism& m);
PsMorphism lan_map(Workspace& ws, const KanModel& f, const PsMorphism& m);

/// F(d) = y(d) × b, or y(d) × y(c) when b is absent. Morphism images are
/// y(f) × id.
KanModel product_kan_model(Workspace& ws, const PresheafModel& model, Pos c,
                           const std::optional<Presheaf>& b = std::nullopt);

}  // namespace lfp
