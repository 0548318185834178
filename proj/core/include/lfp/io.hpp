#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "lfp/criterion.hpp"
#include "lfp/kan.hpp"
#include "lfp/reflection.hpp"

namespace lfp {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kFormatVersion = "1.0.0";

enum class DocKind { Presentation, Category, Presheaf, Morphism, Model, KanModel, Trace };
std::string_view to_string(DocKind k) noexcept;
std::optional<DocKind> parse_doc_kind(std::string_view s) noexcept;

/// Document-level names of values, kept so that serializing a loaded value
/// reproduces the document it came from.
class NameRegistry {
 public:
  void name_presheaf(const Presheaf& x, std::string name);
  const std::string* presheaf_name(const Presheaf& x) const;
  void set_category_ref(const FinCat& c, Json ref);
  const Json* category_ref(const FinCat& c) const;

 private:
  std::map<const void*, std::pair<Presheaf, std::string>> presheaves_;
  std::map<const void*, std::pair<FinCat, Json>> categories_;
};

/// Parses workspace documents. Element and object names are interned into the
/// workspace in document order; includes resolve relative to the including
/// file and are loaded once. Every loaded structure is validated, so errors
/// surface as ParseError (malformed document) or ValidationError (forwarded
/// violations).
class Loader {
 public:
  explicit Loader(Workspace& ws) : ws_(ws) {}

  Json read_document(const std::filesystem::path& file);
  DocKind kind_of(const std::filesystem::path& file);

  FinCat load_category(const std::filesystem::path& file);
  Presheaf load_presheaf(const std::filesystem::path& file);
  PsMorphism load_morphism(const std::filesystem::path& file);
  PresheafModel load_model(const std::filesystem::path& file);
  KanModel load_kan_model(const std::filesystem::path& file);
  /// Rebuilds every step against the configuration it was recorded on.
  Trace load_trace(const std::filesystem::path& file);

  FinCat category_from(const Json& ref, const std::filesystem::path& dir);
  FinCat presentation_from(const Json& payload);
  FinCat table_from(const Json& payload);
  Presheaf presheaf_from(const Json& payload, const std::filesystem::path& dir);
  PsMorphism morphism_from(const Json& payload, const std::filesystem::path& dir);
  PresheafModel model_from(const Json& payload, const std::filesystem::path& dir);
  KanModel kan_model_from(const Json& payload, const std::filesystem::path& dir);
  Trace trace_from(const Json& payload, const std::filesystem::path& dir);
  /// A configuration body ({presheaves, source, target, components}) over the
  /// model's base.
  GameConfig config_from(const PresheafModel& model, const Json& body);
  /// Witness given as positions per object.
  PsMorphism witness_from(const Json& images, const Presheaf& source, const Presheaf& target);

  NameRegistry& names() noexcept { return names_; }
  Workspace& workspace() noexcept { return ws_; }

 private:
  struct Scope;
  Presheaf presheaf_body(const FinCat& base, const Json& body, const std::string& where);
  Presheaf resolve(const Scope& scope, const Json& ref, const std::string& where);
  PsMorphism morphism_body(const Scope& scope, const Json& body, const std::string& where);

  Workspace& ws_;
  NameRegistry names_;
  std::map<std::string, FinCat> categories_;
  std::map<std::string, PresheafModel> models_;
  std::map<const void*, std::map<std::string, Presheaf>> model_presheaves_;
  std::vector<std::string> include_stack_;
};

/// Serializes values to canonical documents. Element names come from the
/// workspace labels; clashes inside one set are disambiguated with "#k".
class Writer {
 public:
  explicit Writer(const Workspace& ws, const NameRegistry* names = nullptr,
                  bool inline_categories = false)
      : ws_(ws), names_(names), inline_(inline_categories) {}

  static Json envelope(DocKind kind, Json payload);

  std::vector<std::string> element_names(const FinSet& s) const;

  Json category_ref(const FinCat& c) const;
  Json presentation_payload(const CatPresentation& p, std::size_t bound) const;
  Json table_payload(const FinCat& c) const;
  Json presheaf_body(const Presheaf& x) const;
  Json presheaf_payload(const Presheaf& x) const;
  Json morphism_payload(const PsMorphism& m) const;
  Json model_payload(const PresheafModel& model) const;
  Json kan_payload(const KanModel& f) const;
  Json config_body(const GameConfig& cfg) const;
  Json witness(const PsMorphism& w) const;
  Json trace_payload(const Trace& t) const;

 private:
  struct Naming;
  Json presheaf_ref(Naming& naming, const Presheaf& x, const std::string& fallback) const;
  Json morphism_components(const PsMorphism& m) const;

  const Workspace& ws_;
  const NameRegistry* names_;
  bool inline_;
};

/// Two-space indented JSON with a trailing newline.
std::string dump(const Json& doc);
void write_file(const std::filesystem::path& file, const Json& doc);

/// Loads `file` into a fresh workspace and serializes it again.
Json canonical_document(const std::filesystem::path& file);

/// Machine-readable reports (see schema/report.schema.json).
Json report_json(const CriterionReport& r, const FinCat& target, std::string_view command);
Json closure_json(const ClosureReport& r, const FinCat& base);
Json verdict_json(const ConditionVerdict& v, const FinCat& target);
Json sizes_json(const Presheaf& x);

}  // namespace lfp
