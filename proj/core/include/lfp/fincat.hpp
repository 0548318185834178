#pragma once

#include <array>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lfp/error.hpp"
#include "lfp/finbase.hpp"

namespace lfp {

class Presheaf;

struct CatPresentation {
  struct Arrow {
    std::string name;
    std::string source;
    std::string target;
  };
  /// Either a non-empty arrow sequence in diagrammatic order or, when
  /// `arrows` is empty, the identity at `identity_at`.
  struct Path {
    std::vector<std::string> arrows;
    std::string identity_at;
  };
  std::vector<std::string> objects;
  std::vector<Arrow> arrows;
  std::vector<std::pair<Path, Path>> relations;
};

/// A finite category with precomputed composition. Composition is written in
/// diagrammatic order: comp(f, g) is defined when tgt(f) = src(g) and denotes
/// "f then g".
///
/// FinCat is a cheap handle onto immutable shared data. Objects and morphisms
/// are addressed either by ElemId or by their position in objects() /
/// morphisms(); the position-based accessors are the fast path.
class FinCat {
 public:
  /// Raw tables. Composites are listed as {f, g, f;g}.
  struct Table {
    std::vector<std::string> objects;
    std::vector<std::string> morphisms;
    std::vector<Pos> src;
    std::vector<Pos> tgt;
    std::vector<Pos> id;
    std::vector<std::array<Pos, 3>> comp;
    /// Optional generator path for every morphism (empty for identities).
    /// When absent every non-identity morphism counts as a generator.
    std::vector<std::vector<Pos>> factorization;
  };

  /// The empty category.
  FinCat();

  /// Builds the handle without checking the category axioms (see
  /// validate_category). Throws ValidationError when the table is malformed:
  /// indices out of range, duplicate names, a composable pair listed twice or
  /// not at all.
  static FinCat from_table(Workspace& ws, Table table);
  /// Category freely generated by `arrows` on `n` objects, where no two
  /// arrows are composable (spans, parallel pairs, discrete shapes).
  static FinCat shape(Workspace& ws, std::size_t n,
                      const std::vector<std::pair<Pos, Pos>>& arrows);
  static FinCat terminal(Workspace& ws);

  const FinSet& objects() const noexcept;
  const FinSet& morphisms() const noexcept;
  std::size_t object_count() const noexcept { return objects().size(); }
  std::size_t morphism_count() const noexcept { return morphisms().size(); }

  Pos src(Pos f) const;
  Pos tgt(Pos f) const;
  Pos id(Pos c) const;
  bool is_identity(Pos f) const { return id(src(f)) == f; }
  /// Throws BoundaryMismatch unless tgt(f) = src(g).
  Pos comp(Pos f, Pos g) const;

  /// Morphisms with the given source / target, in position order.
  std::span<const Pos> out_of(Pos c) const;
  std::span<const Pos> into(Pos c) const;
  /// Generator path of f (diagrammatic), empty for identities.
  std::span<const Pos> factorization(Pos f) const;
  bool is_generator(Pos f) const;
  std::vector<Pos> generators() const;

  const std::string& object_name(Pos c) const;
  const std::string& morphism_name(Pos f) const;
  std::optional<Pos> find_object(std::string_view name) const;
  std::optional<Pos> find_morphism(std::string_view name) const;

  /// Throws UnknownObject for ids outside objects().
  Pos object_pos(ElemId obj) const;
  Pos morphism_pos(ElemId f) const;

  FinFun src_fun() const;
  FinFun tgt_fun() const;
  FinFun id_fun() const;
  ElemId comp(ElemId f, ElemId g) const;

  /// Recovers the raw tables (used by serialization and equality).
  Table table() const;

  /// The presentation this category was completed from, if any.
  const CatPresentation* presentation() const noexcept;
  std::size_t presentation_bound() const noexcept;

  /// Same data, either shared or structurally equal tables with equal names.
  friend bool operator==(const FinCat& a, const FinCat& b);
  friend FinCat from_presentation(Workspace& ws, const CatPresentation& p,
                                  std::size_t max_path_len);

  const void* identity_key() const noexcept { return impl_.get(); }

 public:
  struct Impl;

 private:
  explicit FinCat(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

/// Empty iff identities, boundaries, unit laws and associativity hold.
std::vector<Violation> validate_category(const FinCat& c);


/// Completes a presentation by enumerating generator paths up to
/// max_path_len + 1 and closing the relations under whiskering. Every path of
/// length max_path_len + 1 must be equal to a shorter one, otherwise
/// BoundExceeded is thrown. Morphisms are named after the shortlex-least path
/// of their class ("a;b", or "1_x" for identities).
FinCat from_presentation(Workspace& ws, const CatPresentation& p,
                         std::size_t max_path_len);

FinSet hom_set(const FinCat& c, ElemId a, ElemId b);
std::vector<Pos> hom_positions(const FinCat& c, Pos a, Pos b);

/// The representable presheaf C(-, obj). Its elements are the morphism ids.
Presheaf yoneda(const FinCat& c, ElemId obj);
Presheaf yoneda(const FinCat& c, Pos obj);

}  // namespace lfp
