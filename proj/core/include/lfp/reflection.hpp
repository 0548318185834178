#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lfp/presheaf.hpp"

namespace lfp {

enum class MoveKind { DomE, DomU, CodE, CodU };

std::string_view to_string(MoveKind k) noexcept;
std::optional<MoveKind> parse_move_kind(std::string_view s) noexcept;

/// A position of the game: m: X -> Y over model.base.
struct GameConfig {
  PresheafModel model;
  PsMorphism m;

  const Presheaf& domain() const noexcept { return m.source(); }
  const Presheaf& codomain() const noexcept { return m.target(); }
};

/// Witnesses per kind, for the condition g: A -> B:
///   DomE  {f: A -> X, h: B -> Y}   with h∘g = m∘f
///   DomU  {h, h': B -> X}          with h ≠ h', h∘g = h'∘g, m∘h = m∘h'
///   CodE  {f: A -> Y}
///   CodU  {h, h': B -> Y}          with h ≠ h', h∘g = h'∘g
struct Move {
  MoveKind kind = MoveKind::DomE;
  std::size_t condition = 0;
  std::vector<PsMorphism> witnesses;
};

/// Hex FNV-1a hash of the configuration in positional canonical form.
std::string digest(const GameConfig& cfg);
/// Stable move identifier: configuration digest, kind, condition and the
/// witness tables.
std::string move_id(const GameConfig& cfg, const Move& mv);

/// Empty iff the witnesses fit cfg and satisfy the side conditions of the kind.
std::vector<Violation> check_move(const GameConfig& cfg, const Move& mv);

/// True when the f of a DomE / CodE move already extends along g, so the move
/// can only add a redundant copy of B.
bool is_redundant_existential(const GameConfig& cfg, const Move& mv);

struct MoveQuery {
  std::optional<MoveKind> kind;
  std::optional<std::size_t> condition;
  /// Drop DomE / CodE moves whose f already extends along g.
  bool productive_only = false;
};

/// Lazy, deterministic move enumeration: kinds in the order DomE, DomU, CodE,
/// CodU (or only the requested kind), conditions in index order, then the
/// order of natural-transformation enumeration.
class MoveStream {
 public:
  MoveStream(GameConfig cfg, MoveQuery query);
  std::optional<Move> next();

 private:
  bool open_phase();
  void expand(const PsMorphism& f);

  GameConfig cfg_;
  MoveQuery query_;
  std::vector<std::pair<MoveKind, std::size_t>> phases_;
  std::size_t phase_ = 0;
  std::optional<NatTransStream> outer_;
  std::deque<Move> pending_;
};

MoveStream enumerate_moves(const GameConfig& cfg, MoveQuery query = {});

struct AppliedMove {
  GameConfig config;
  PsMorphism domain_map;    // X -> X'
  PsMorphism codomain_map;  // Y -> Y'
};

/// Throws StaleMove when check_move reports a problem.
AppliedMove apply_move_detailed(Workspace& ws, const GameConfig& cfg, const Move& mv);
GameConfig apply_move(Workspace& ws, const GameConfig& cfg, const Move& mv);

/// Moves the witnesses of `mv` along the connecting maps of moves applied
/// since it was enumerated.
Move transport(const Move& mv, const PsMorphism& domain_map, const PsMorphism& codomain_map);

struct TraceStep {
  Move move;
  std::string digest;
};

struct Trace {
  GameConfig initial;
  std::vector<TraceStep> steps;
};

struct ReplayResult {
  bool ok = true;
  GameConfig final_config;
  std::size_t steps_replayed = 0;
  std::string message;
};

/// The same move with its witnesses retargeted, position for position, at the
/// X and Y of cfg. Throws StaleMove when they do not fit.
Move rebase(const Move& mv, const GameConfig& cfg);

/// Re-applies every step and compares digests.
ReplayResult replay(Workspace& ws, const Trace& trace);

/// The instances of the reflection step: maps f: A -> X with no extension
/// along g, and unordered pairs h ≠ h' of extensions of a common f.
struct JSets {
  struct Existence {
    std::size_t condition;
    PsMorphism f;
  };
  struct Uniqueness {
    std::size_t condition;
    PsMorphism h;
    PsMorphism h2;
  };
  std::vector<Existence> existence;
  std::vector<Uniqueness> uniqueness;
  bool empty() const noexcept { return existence.empty() && uniqueness.empty(); }
};

JSets compute_j_sets(const Presheaf& x, const PresheafModel& model);

struct SaturationResult {
  Presheaf value;
  PsMorphism step;
  std::size_t existence_instances = 0;
  std::size_t uniqueness_instances = 0;
};

/// One colimit handling every J-instance at once: a pushout of g along each
/// existence instance and a coequalizer of each uniqueness pair.
SaturationResult saturation_step(Workspace& ws, const Presheaf& x, const PresheafModel& model);
SaturationResult saturate(Workspace& ws, const Presheaf& x, const PresheafModel& model,
                          const JSets& j);

enum class ReflectStatus { Converged, BudgetExhausted };
std::string_view to_string(ReflectStatus s) noexcept;

struct ReflectOutcome {
  ReflectStatus status = ReflectStatus::Converged;
  Presheaf result;
  PsMorphism unit;
  std::size_t steps_used = 0;
};

ReflectOutcome reflect(Workspace& ws, const Presheaf& x, const PresheafModel& model,
                       std::size_t max_steps);

enum class Strategy { Greedy, Exhaustive };
enum class Schedule { CodomainFirst, Interleaved };
std::string_view to_string(Strategy s) noexcept;
std::optional<Strategy> parse_strategy(std::string_view s) noexcept;

struct PlayOptions {
  Strategy strategy = Strategy::Greedy;
  std::size_t budget = 100;
  /// Greedy only: kinds tried in each round, in order.
  std::vector<MoveKind> kinds{MoveKind::DomU, MoveKind::CodU, MoveKind::DomE, MoveKind::CodE};
  std::optional<std::size_t> condition;
  Schedule schedule = Schedule::CodomainFirst;
};

enum class PlayStatus { Won, Inconclusive };
std::string_view to_string(PlayStatus s) noexcept;

struct PlayOutcome {
  PlayStatus status = PlayStatus::Inconclusive;
  Trace trace;
  GameConfig final_config;
  std::size_t rounds = 0;
  /// Both endpoints ended orthogonal to every condition, so final_config.m is
  /// the reflected morphism.
  bool reflected = false;
};

/// Greedy: each round enumerates the moves of every kind in `kinds` (DomE and
/// CodE restricted to productive ones) and applies them one after another,
/// transporting witnesses and skipping those that became no-ops. A round that
/// applies nothing ends the play.
///
/// Exhaustive: saturates the codomain with CodE / CodU rounds, then the domain
/// with DomE / DomU rounds (or alternates, with Schedule::Interleaved).
PlayOutcome auto_play(Workspace& ws, const GameConfig& cfg, const PlayOptions& options);

}  // namespace lfp
