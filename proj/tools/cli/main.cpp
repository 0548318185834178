#include <CLI11.hpp>

#include <iomanip>
#include <iostream>

#include "lfp/service.hpp"

namespace fs = std::filesystem;
using namespace lfp;

namespace {

struct Common {
  bool json = false;
};

void print_json(const Json& j) { std::cout << dump(j); }

std::string sizes_text(const Presheaf& x) {
  std::ostringstream out;
  const FinCat& c = x.base();
  for (Pos o = 0; o < c.object_count(); ++o)
    out << (o ? " " : "") << c.object_name(o) << ":" << x.at(o).size();
  return out.str();
}

PlayOptions play_options(const std::string& strategy, const std::string& schedule,
                         std::size_t budget) {
  PlayOptions opt;
  opt.strategy = *parse_strategy(strategy);
  opt.schedule = schedule == "interleaved" ? Schedule::Interleaved : Schedule::CodomainFirst;
  opt.budget = budget;
  return opt;
}

void print_verdicts(const CriterionReport& r, const FinCat& target) {
  std::cout << std::left << std::setw(12) << "condition" << std::setw(16) << "status"
            << std::setw(8) << "rounds" << std::setw(8) << "moves"
            << "sizes (source/target)\n";
  for (const auto& v : r.verdicts) {
    std::ostringstream sizes;
    for (Pos o = 0; o < target.object_count(); ++o)
      sizes << (o ? " " : "") << target.object_name(o) << ":" << v.source_sizes[o] << "/"
            << v.target_sizes[o];
    std::cout << std::setw(12) << v.condition_name << std::setw(16) << to_string(v.status)
              << std::setw(8) << v.rounds << std::setw(8) << (v.trace ? v.trace->steps.size() : 0)
              << sizes.str() << "\n";
  }
}

void save_traces(const Workspace& ws, const NameRegistry& names, const CriterionReport& r,
                 const fs::path& dir, const std::string& prefix) {
  fs::create_directories(dir);
  Writer wr(ws, &names, true);
  for (const auto& v : r.verdicts)
    if (v.trace && v.status == VerdictStatus::WonByGame)
      write_file(dir / (prefix + v.condition_name + ".trace"),
                 Writer::envelope(DocKind::Trace, wr.trace_payload(*v.trace)));
}

int cmd_validate(const fs::path& file, const Common& c) {
  Workspace ws;
  Loader l(ws);
  DocKind kind = l.kind_of(file);
  Json details = Json::object();
  std::string text;
  switch (kind) {
    case DocKind::Presentation:
    case DocKind::Category: {
      FinCat cat = l.load_category(file);
      details["objects"] = cat.object_count();
      details["morphisms"] = cat.morphism_count();
      text = std::to_string(cat.object_count()) + " objects, " +
             std::to_string(cat.morphism_count()) + " morphisms";
      break;
    }
    case DocKind::Presheaf: {
      Presheaf x = l.load_presheaf(file);
      details["sizes"] = sizes_json(x);
      text = "sizes " + sizes_text(x);
      break;
    }
    case DocKind::Morphism: {
      PsMorphism m = l.load_morphism(file);
      details["source"] = sizes_json(m.source());
      details["target"] = sizes_json(m.target());
      details["iso"] = is_iso(m);
      text = sizes_text(m.source()) + " -> " + sizes_text(m.target()) +
             (is_iso(m) ? " (iso)" : "");
      break;
    }
    case DocKind::Model: {
      PresheafModel m = l.load_model(file);
      details["objects"] = m.base.object_count();
      details["morphisms"] = m.base.morphism_count();
      details["conditions"] = m.condition_names;
      text = std::to_string(m.base.object_count()) + " objects, " +
             std::to_string(m.base.morphism_count()) + " morphisms, " +
             std::to_string(m.conditions.size()) + " conditions";
      break;
    }
    case DocKind::KanModel: {
      KanModel k = l.load_kan_model(file);
      details["source_objects"] = k.source.object_count();
      details["target_objects"] = k.target.object_count();
      text = std::to_string(k.source.object_count()) + " source objects over " +
             std::to_string(k.target.object_count()) + " target objects";
      break;
    }
    case DocKind::Trace: {
      Trace t = l.load_trace(file);
      details["steps"] = t.steps.size();
      text = std::to_string(t.steps.size()) + " steps";
      break;
    }
  }
  if (c.json)
    print_json(Json{{"command", "validate"}, {"kind", std::string(to_string(kind))},
                    {"ok", true}, {"details", details}, {"exit_code", 0}});
  else
    std::cout << "ok: " << to_string(kind) << ", " << text << "\n";
  return 0;
}

int cmd_lan(const fs::path& kan, const fs::path& input, const std::string& output,
            const Common& c) {
  Workspace ws;
  Loader l(ws);
  KanModel f = l.load_kan_model(kan);
  Writer wr(ws, &l.names());
  Json report{{"command", "lan"}};
  Json doc;
  if (l.kind_of(input) == DocKind::Morphism) {
    PsMorphism m = l.load_morphism(input);
    PsMorphism out = lan_map(ws, f, m);
    report["input"] = "morphism";
    report["source"] = sizes_json(out.source());
    report["target"] = sizes_json(out.target());
    report["iso"] = is_iso(out);
    doc = Writer::envelope(DocKind::Morphism, wr.morphism_payload(out));
    if (!c.json)
      std::cout << "source " << sizes_text(out.source()) << "\ntarget " << sizes_text(out.target())
                << "\niso " << (is_iso(out) ? "yes" : "no") << "\n";
  } else {
    Presheaf x = l.load_presheaf(input);
    LanResult out = lan_apply(ws, f, x);
    report["input"] = "presheaf";
    report["sizes"] = sizes_json(out.value());
    doc = Writer::envelope(DocKind::Presheaf, wr.presheaf_payload(out.value()));
    if (!c.json) std::cout << "sizes " << sizes_text(out.value()) << "\n";
  }
  report["exit_code"] = 0;
  if (!output.empty()) write_file(output, doc);
  if (c.json) {
    report["document"] = doc;
    print_json(report);
  }
  return 0;
}

int cmd_reflect(const fs::path& model_file, const fs::path& input, std::size_t max_steps,
                const std::string& output, const Common& c) {
  Workspace ws;
  Loader l(ws);
  PresheafModel model = l.load_model(model_file);
  Presheaf x = l.load_presheaf(input);
  ReflectOutcome r = reflect(ws, x, model, max_steps);
  const int code = r.status == ReflectStatus::Converged ? 0 : 3;
  if (!output.empty())
    write_file(output, Writer::envelope(DocKind::Presheaf, Writer(ws, &l.names()).presheaf_payload(r.result)));
  if (c.json) {
    print_json(Json{{"command", "reflect"},
                    {"status", std::string(to_string(r.status))},
                    {"steps", r.steps_used},
                    {"sizes", sizes_json(r.result)},
                    {"exit_code", code}});
  } else {
    std::cout << to_string(r.status) << " after " << r.steps_used << " steps\nsizes "
              << sizes_text(r.result) << "\n";
  }
  return code;
}

int cmd_check_la(const fs::path& kan, const fs::path& src, const fs::path& tgt,
                 const PlayOptions& opt, const std::string& trace_dir, const Common& c) {
  Workspace ws;
  Loader l(ws);
  KanModel f = l.load_kan_model(kan);
  PresheafModel source = l.load_model(src);
  PresheafModel target = l.load_model(tgt);
  CriterionReport r = check_left_adjoint(ws, f, source, target, opt);
  if (!trace_dir.empty()) save_traces(ws, l.names(), r, trace_dir, "");
  const int code = exit_code(r.summary);
  if (c.json) {
    print_json(report_json(r, target.base, "check-la"));
  } else {
    print_verdicts(r, target.base);
    std::cout << "summary: " << to_string(r.summary) << "\n" << describe(r.summary) << "\n";
  }
  return code;
}

int cmd_check_cc(const fs::path& model_file, const PlayOptions& opt, const std::string& trace_dir,
                 const Common& c) {
  Workspace ws;
  Loader l(ws);
  PresheafModel model = l.load_model(model_file);
  ClosureReport r = check_cartesian_closed(ws, model, opt);
  if (!trace_dir.empty())
    for (Pos o = 0; o < r.per_object.size(); ++o)
      save_traces(ws, l.names(), r.per_object[o], trace_dir, model.base.object_name(o) + "_");
  const int code = exit_code(r.summary);
  if (c.json) {
    print_json(closure_json(r, model.base));
  } else {
    for (Pos o = 0; o < r.per_object.size(); ++o) {
      std::cout << "y(" << model.base.object_name(o) << ") x -: "
                << to_string(r.per_object[o].summary) << "\n";
      print_verdicts(r.per_object[o], model.base);
    }
    std::cout << "summary: " << to_string(r.summary) << "\n" << describe(r.summary) << "\n";
  }
  return code;
}

int cmd_replay(const fs::path& file, const Common& c) {
  Workspace ws;
  Loader l(ws);
  Trace t = l.load_trace(file);
  ReplayResult r = replay(ws, t);
  const bool won = r.ok && is_iso(r.final_config.m);
  const std::string final_digest = digest(r.final_config);
  const int code = r.ok ? 0 : 1;
  if (c.json) {
    print_json(Json{{"command", "replay"},
                    {"ok", r.ok},
                    {"steps", r.steps_replayed},
                    {"status", won ? "Won" : "Open"},
                    {"final_digest", final_digest},
                    {"message", r.message},
                    {"exit_code", code}});
  } else {
    std::cout << (r.ok ? "replayed " : "replay failed after ") << r.steps_replayed << " steps\n";
    if (!r.message.empty()) std::cout << r.message << "\n";
    std::cout << "digest " << final_digest << "\nstatus " << (won ? "Won" : "Open") << "\n";
  }
  return code;
}

int serve(SessionService& svc, const std::string& host, int port,
          const std::optional<std::string>& session) {
  HttpServer server(svc);
  int bound = server.bind(host, port);
  if (bound < 0) {
    std::cerr << "error: cannot bind " << host << ":" << port << "\n";
    return 1;
  }
  std::cout << "listening on http://" << host << ":" << bound << "\n";
  if (session) std::cout << "session http://" << host << ":" << bound << "/sessions/" << *session << "\n";
  std::cout.flush();
  return server.listen() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Workbench for presheaf models, left Kan extensions and the game of reflection"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_flag("--json", common.json, "Print a machine-readable report");

  std::string file, kan, input, model, source, target, config, trace, output, trace_dir;
  std::string strategy = "greedy", schedule = "codomain-first", host = "127.0.0.1", root = ".";
  std::size_t budget = 100, max_steps = 100;
  int port = 8080;
  auto strategies = CLI::IsMember({"greedy", "exhaustive"});
  auto schedules = CLI::IsMember({"codomain-first", "interleaved"});

  auto* validate = app.add_subcommand("validate", "Load and validate a document");
  validate->add_option("file", file)->required()->check(CLI::ExistingFile);

  auto* lan = app.add_subcommand("lan", "Left Kan extension of a presheaf or morphism");
  lan->add_option("--kan", kan)->required()->check(CLI::ExistingFile);
  lan->add_option("--input", input)->required()->check(CLI::ExistingFile);
  lan->add_option("--output", output, "Write the result document here");

  auto* refl = app.add_subcommand("reflect", "Bounded reflection of a presheaf into a model");
  refl->add_option("--model", model)->required()->check(CLI::ExistingFile);
  refl->add_option("--input", input)->required()->check(CLI::ExistingFile);
  refl->add_option("--max-steps", max_steps);
  refl->add_option("--output", output, "Write the reflected presheaf here");

  auto* la = app.add_subcommand("check-la", "Left-adjointness criterion");
  la->add_option("--kan", kan)->required()->check(CLI::ExistingFile);
  la->add_option("--source", source)->required()->check(CLI::ExistingFile);
  la->add_option("--target", target)->required()->check(CLI::ExistingFile);
  la->add_option("--strategy", strategy)->check(strategies);
  la->add_option("--schedule", schedule)->check(schedules);
  la->add_option("--budget", budget);
  la->add_option("--trace-dir", trace_dir, "Save the traces of won games here");

  auto* cc = app.add_subcommand("check-cc", "Cartesian-closure criterion");
  cc->add_option("--model", model)->required()->check(CLI::ExistingFile);
  cc->add_option("--strategy", strategy)->check(strategies);
  cc->add_option("--schedule", schedule)->check(schedules);
  cc->add_option("--budget", budget);
  cc->add_option("--trace-dir", trace_dir, "Save the traces of won games here");

  auto* play = app.add_subcommand("play", "Start a game session and serve it over HTTP");
  play->add_option("--model", model)->required()->check(CLI::ExistingFile);
  play->add_option("--config", config)->required()->check(CLI::ExistingFile);
  play->add_option("--host", host);
  play->add_option("--port", port);

  auto* rep = app.add_subcommand("replay", "Replay a trace and check its digests");
  rep->add_option("--trace", trace)->required()->check(CLI::ExistingFile);

  auto* srv = app.add_subcommand("serve", "Serve the session API");
  srv->add_option("--host", host);
  srv->add_option("--port", port);
  srv->add_option("--root", root, "Directory that model_path / config_path resolve against");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  const char* command = app.get_subcommands().front()->get_name().c_str();
  try {
    if (*validate) return cmd_validate(file, common);
    if (*lan) return cmd_lan(kan, input, output, common);
    if (*refl) return cmd_reflect(model, input, max_steps, output, common);
    if (*la)
      return cmd_check_la(kan, source, target, play_options(strategy, schedule, budget), trace_dir,
                          common);
    if (*cc) return cmd_check_cc(model, play_options(strategy, schedule, budget), trace_dir, common);
    if (*rep) return cmd_replay(trace, common);
    if (*play) {
      SessionService svc(".");
      Json state = svc.create(Json{{"model_path", fs::absolute(model).string()},
                                   {"config_path", fs::absolute(config).string()}});
      return serve(svc, host, port, state["session"].get<std::string>());
    }
    if (*srv) {
      SessionService svc(root);
      return serve(svc, host, port, std::nullopt);
    }
  } catch (const Error& e) {
    if (common.json)
      print_json(Json{{"command", command},
                      {"error", {{"code", std::string(to_string(e.code()))}, {"message", e.what()}}},
                      {"exit_code", 1}});
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    if (common.json)
      print_json(Json{{"command", command},
                      {"error", {{"code", "Internal"}, {"message", e.what()}}},
                      {"exit_code", 1}});
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
