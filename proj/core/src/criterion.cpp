#include "lfp/criterion.hpp"

namespace lfp {

std::string_view to_string(VerdictStatus s) noexcept {
  switch (s) {
    case VerdictStatus::IsoAlready: return "IsoAlready";
    case VerdictStatus::WonByGame: return "WonByGame";
    case VerdictStatus::DecidedNotIso: return "DecidedNotIso";
    case VerdictStatus::Inconclusive: return "Inconclusive";
  }
  return "?";
}

std::string_view to_string(Summary s) noexcept {
  switch (s) {
    case Summary::CriterionHolds: return "CriterionHolds";
    case Summary::CriterionFails: return "CriterionFails";
    case Summary::Inconclusive: return "Inconclusive";
  }
  return "?";
}

std::string_view describe(Summary s) noexcept {
  switch (s) {
    case Summary::CriterionHolds:
      return "every condition is sent to an isomorphism: the functor is a left adjoint";
    case Summary::CriterionFails:
      return "some condition is not sent to an isomorphism: the sufficient criterion does not "
             "apply (this does not show that the functor is not a left adjoint)";
    case Summary::Inconclusive:
      return "the game did not settle every condition within the budget";
  }
  return "";
}

int exit_code(Summary s) noexcept {
  switch (s) {
    case Summary::CriterionHolds: return 0;
    case Summary::CriterionFails: return 2;
    case Summary::Inconclusive: return 3;
  }
  return 3;
}

Summary combine(const std::vector<Summary>& parts) {
  bool all_hold = true;
  for (Summary s : parts) {
    if (s == Summary::CriterionFails) return Summary::CriterionFails;
    if (s != Summary::CriterionHolds) all_hold = false;
  }
  return all_hold ? Summary::CriterionHolds : Summary::Inconclusive;
}

CriterionReport check_left_adjoint(Workspace& ws, const KanModel& f, const PresheafModel& source,
                                   const PresheafModel& target, const PlayOptions& options) {
  if (!(f.source == source.base))
    throw Error(ErrorCode::BaseMismatch, "kan model source differs from the source model base");
  if (!(f.target == target.base))
    throw Error(ErrorCode::BaseMismatch, "kan model target differs from the target model base");
  CriterionReport report;
  std::vector<Summary> parts;
  for (std::size_t i = 0; i < source.conditions.size(); ++i) {
    ConditionVerdict v;
    v.condition_index = i;
    v.condition_name = i < source.condition_names.size() ? source.condition_names[i]
                                                         : "g" + std::to_string(i);
    v.lan_image = lan_map(ws, f, source.conditions[i]);
    v.source_sizes = v.lan_image.source().sizes();
    v.target_sizes = v.lan_image.target().sizes();
    if (is_iso(v.lan_image)) {
      v.status = VerdictStatus::IsoAlready;
    } else if (target.conditions.empty()) {
      v.status = VerdictStatus::DecidedNotIso;
    } else {
      PlayOutcome play = auto_play(ws, GameConfig{target, v.lan_image}, options);
      v.rounds = play.rounds;
      if (play.status == PlayStatus::Won)
        v.status = VerdictStatus::WonByGame;
      else if (options.strategy == Strategy::Exhaustive && play.reflected)
        v.status = VerdictStatus::DecidedNotIso;
      else
        v.status = VerdictStatus::Inconclusive;
      v.trace = std::move(play.trace);
    }
    switch (v.status) {
      case VerdictStatus::IsoAlready:
      case VerdictStatus::WonByGame: parts.push_back(Summary::CriterionHolds); break;
      case VerdictStatus::DecidedNotIso: parts.push_back(Summary::CriterionFails); break;
      case VerdictStatus::Inconclusive: parts.push_back(Summary::Inconclusive); break;
    }
    report.verdicts.push_back(std::move(v));
  }
  report.summary = combine(parts);
  return report;
}

ClosureReport check_cartesian_closed(Workspace& ws, const PresheafModel& model,
                                     const PlayOptions& options) {
  ClosureReport out;
  std::vector<Summary> parts;
  for (Pos c = 0; c < model.base.object_count(); ++c) {
    KanModel f = product_kan_model(ws, model, c);
    out.per_object.push_back(check_left_adjoint(ws, f, model, model, options));
    parts.push_back(out.per_object.back().summary);
  }
  out.summary = combine(parts);
  return out;
}

}  // namespace lfp
