#include <CLI11.hpp>

#include <iostream>

#include "lfp/io.hpp"

namespace fs = std::filesystem;
using namespace lfp;

namespace {

// The ×2 endofunctor of Cat as a Kan model, the four game configurations it
// induces, and a saved three-move game on g_lu.
void generate(const fs::path& dir) {
  Workspace ws;
  Loader l(ws);
  PresheafModel cat = l.load_model(dir / "cat.model");
  Presheaf two = l.load_presheaf(dir / "two.presheaf");
  Writer w(ws, &l.names());

  KanModel times2 = product_kan_model(ws, cat, 0, two);
  write_file(dir / "times2.kan", Writer::envelope(DocKind::KanModel, w.kan_payload(times2)));

  for (std::size_t i = 0; i < cat.conditions.size(); ++i) {
    PsMorphism m = lan_map(ws, times2, cat.conditions[i]);
    const std::string name = "times2_" + cat.condition_names[i] + ".config";
    write_file(dir / name, Writer::envelope(DocKind::Morphism, w.morphism_payload(m)));
    std::cout << "wrote " << name << "\n";
    if (cat.condition_names[i] != "g_lu") continue;
    PlayOptions opt;
    opt.kinds = {MoveKind::DomE};
    opt.condition = i;
    PlayOutcome out = auto_play(ws, GameConfig{cat, m}, opt);
    if (out.status != PlayStatus::Won) throw Error(ErrorCode::ValidationError, "g_lu game not won");
    write_file(dir / "times2_g_lu.trace", Writer::envelope(DocKind::Trace, w.trace_payload(out.trace)));
    std::cout << "wrote times2_g_lu.trace (" << out.trace.steps.size() << " moves)\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regenerates generated fixtures and rewrites documents in canonical form"};
  std::string dir = "fixtures";
  std::vector<std::string> files;
  app.add_option("--dir", dir, "Fixture directory")->check(CLI::ExistingDirectory);
  app.add_option("--canonicalize", files, "Rewrite these documents in canonical form");
  CLI11_PARSE(app, argc, argv);
  try {
    if (files.empty()) {
      generate(dir);
    } else {
      for (const auto& f : files) {
        Json doc = canonical_document(f);
        write_file(f, doc);
        std::cout << "rewrote " << f << "\n";
      }
    }
  } catch (const Error& e) {
    std::cerr << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
    return 1;
  }
  return 0;
}
