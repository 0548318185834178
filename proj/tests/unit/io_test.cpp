#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "gen.hpp"
#include "lfp/io.hpp"

using namespace lfp;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = LFP_FIXTURE_DIR;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("lfp_io_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  fs::path write(const std::string& name, const std::string& text) const {
    std::ofstream(path / name) << text;
    return path / name;
  }
};

ErrorCode load_error(const fs::path& file) {
  Workspace ws;
  Loader loader(ws);
  try {
    switch (loader.kind_of(file)) {
      case DocKind::Presheaf: loader.load_presheaf(file); break;
      case DocKind::Model: loader.load_model(file); break;
      default: loader.load_category(file); break;
    }
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("document loaded without error");
  return ErrorCode::ParseError;
}

}  // namespace

TEST_CASE("every fixture is already canonical") {
  std::size_t n = 0;
  for (const auto& entry : fs::directory_iterator(kFixtures)) {
    if (!entry.is_regular_file()) continue;
    CAPTURE(entry.path().filename().string());
    CHECK(dump(canonical_document(entry.path())) == slurp(entry.path()));
    ++n;
  }
  CHECK(n >= 12);
}

TEST_CASE("random presheaves survive a write and reload") {
  Workspace ws;
  Loader loader(ws);
  PresheafModel cat = loader.load_model(kFixtures / "cat.model");
  gen::Rng rng(51);
  TempDir dir;
  fs::copy_file(kFixtures / "cat.presentation", dir.path / "cat.presentation");
  Json ref = {{"include", "cat.presentation"}};
  for (int i = 0; i < 10; ++i) {
    Presheaf x = gen::presheaf(ws, rng, cat.base, 3);
    NameRegistry names;
    names.set_category_ref(x.base(), ref);
    Writer w(ws, &names);
    fs::path file = dir.path / "x.presheaf";
    write_file(file, Writer::envelope(DocKind::Presheaf, w.presheaf_payload(x)));
    Workspace ws2;
    Loader back(ws2);
    Presheaf y = back.load_presheaf(file);
    CHECK(y.sizes() == x.sizes());
    for (Pos f = 0; f < cat.base.morphism_count(); ++f)
      CHECK(std::vector<Pos>(y.action(f).images().begin(), y.action(f).images().end()) ==
            std::vector<Pos>(x.action(f).images().begin(), x.action(f).images().end()));
    CHECK(dump(canonical_document(file)) == slurp(file));
  }
}

TEST_CASE("malformed documents are rejected with the right code") {
  TempDir dir;
  dir.write("cat.presentation", slurp(kFixtures / "cat.presentation"));
  CHECK(load_error(dir.write("a.presentation", "{ not json")) == ErrorCode::ParseError);
  CHECK(load_error(dir.write("b.presentation",
                             R"({"format_version":"2.0.0","kind":"presentation","payload":{}})")) ==
        ErrorCode::ParseError);
  CHECK(load_error(dir.write("c.presheaf", R"({"format_version":"1.0.0","kind":"presheaf","payload":
    {"base":{"include":"cat.presentation"},"sets":{"o":["a"]},"actions":{}}})")) ==
        ErrorCode::ParseError);
  CHECK(load_error(dir.write("d.presheaf", R"({"format_version":"1.0.0","kind":"presheaf","payload":
    {"base":{"include":"cat.presentation"},"sets":{"o":["a","b"],"m":["e"],"p":[]},
     "actions":{"src":{"e":"a"},"tgt":{"e":"a"},"id":{"a":"e","b":"e"},"l":{},"r":{},"comp":{}}}})")) ==
        ErrorCode::ValidationError);
  dir.write("e.model", R"({"format_version":"1.0.0","kind":"model","payload":
    {"base":{"include":"f.model"},"presheaves":{},"conditions":[]}})");
  CHECK(load_error(dir.write("f.model", R"({"format_version":"1.0.0","kind":"model","payload":
    {"base":{"include":"e.model"},"presheaves":{},"conditions":[]}})")) ==
        ErrorCode::ParseError);
}

TEST_CASE("a well formed presheaf document loads") {
  TempDir dir;
  dir.write("cat.presentation", slurp(kFixtures / "cat.presentation"));
  fs::path file = dir.write("ok.presheaf", R"({"format_version":"1.0.0","kind":"presheaf","payload":
    {"base":{"include":"cat.presentation"},"sets":{"o":["a"],"m":["e"],"p":[]},
     "actions":{"src":{"e":"a"},"tgt":{"e":"a"},"id":{"a":"e"},"l":{},"r":{},"comp":{}}}})");
  Workspace ws;
  Loader loader(ws);
  Presheaf x = loader.load_presheaf(file);
  CHECK(x.sizes() == std::vector<std::size_t>{1, 1, 0});
}
