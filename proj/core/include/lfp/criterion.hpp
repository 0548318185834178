#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lfp/kan.hpp"
#include "lfp/reflection.hpp"

namespace lfp {

enum class VerdictStatus { IsoAlready, WonByGame, DecidedNotIso, Inconclusive };
std::string_view to_string(VerdictStatus s) noexcept;

struct ConditionVerdict {
  std::size_t condition_index = 0;
  std::string condition_name;
  /// Lan F (g)
  PsMorphism lan_image;
  VerdictStatus status = VerdictStatus::Inconclusive;
  /// Present for WonByGame, Inconclusive and game-decided DecidedNotIso.
  std::optional<Trace> trace;
  std::size_t rounds = 0;
  std::vector<std::size_t> source_sizes;
  std::vector<std::size_t> target_sizes;
};

enum class Summary { CriterionHolds, CriterionFails, Inconclusive };
std::string_view to_string(Summary s) noexcept;
/// One-line reading of a summary. A failing criterion is only a failure of a
/// sufficient condition and is worded accordingly.
std::string_view describe(Summary s) noexcept;
/// Exit status used by the command line: 0, 2 or 3.
int exit_code(Summary s) noexcept;

struct CriterionReport {
  std::vector<ConditionVerdict> verdicts;
  Summary summary = Summary::Inconclusive;
};

/// For every g in source.conditions: IsoAlready when Lan F (g) is an
/// isomorphism, DecidedNotIso when it is not and the target has no
/// conditions, otherwise the outcome of auto_play over the target. A game
/// only yields DecidedNotIso under the exhaustive strategy, once both ends are
/// reflected. Throws BaseMismatch when F does not run between the two bases.
CriterionReport check_left_adjoint(Workspace& ws, const KanModel& f, const PresheafModel& source,
                                   const PresheafModel& target, const PlayOptions& options = {});

struct ClosureReport {
  /// Indexed by object of the base.
  std::vector<CriterionReport> per_object;
  Summary summary = Summary::Inconclusive;
};

/// Runs check_left_adjoint on y(c) × y(-) for every object c.
ClosureReport check_cartesian_closed(Workspace& ws, const PresheafModel& model,
                                     const PlayOptions& options = {});

Summary combine(const std::vector<Summary>& parts);

}  // namespace lfp
