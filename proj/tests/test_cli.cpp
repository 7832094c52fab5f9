#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "forage/cli.hpp"
#include "forage/config.hpp"
#include "forage/io.hpp"

using namespace forage;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::main(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("forage_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

void spit(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

const char* kSmall =
    "dt: 0.1\n"
    "world_width: 20\n"
    "world_height: 20\n"
    "max_agents: 16\n"
    "initial_agents: 12\n"
    "max_resources: 8\n"
    "n_neurons: 5\n"
    "n_rays: 4\n"
    "reproduce_threshold: 10.5\n"
    "n_steps: 30\n"
    "seed: 3\n";

}  // namespace

TEST_CASE("run writes the documented artifacts") {
  const auto dir = scratch("run");
  spit(dir / "s.cfg", kSmall);
  const auto r = invoke({"run", "-c", (dir / "s.cfg").string(), "--steps", "20", "--seed", "7",
                         "-o", (dir / "out").string(), "--record-every", "5", "--frame-every",
                         "10"});
  REQUIRE(r.code == cli::kOk);
  for (auto name : {"manifest.json", "config.yaml", "records.csv", "final.ckpt",
                    "frames/frame_000000.csv", "frames/frame_000002.csv"})
    CHECK(fs::exists(dir / "out" / name));
  const SimConfig effective = load_config(dir / "out" / "config.yaml");
  CHECK(effective.seed == 7);
  CHECK(effective.n_steps == 20);
  const std::string records = slurp(dir / "out" / "records.csv");
  CHECK(records.rfind(std::string(io::kRecordHeader) + "\n", 0) == 0);
  CHECK(std::count(records.begin(), records.end(), '\n') == 5);
  const auto state = io::load_checkpoint(dir / "out" / "final.ckpt", effective);
  CHECK(state.step == 20);
  CHECK(slurp(dir / "out" / "manifest.json").find("\"seed\": 7") != std::string::npos);
}

TEST_CASE("shipped example configs load") {
  for (auto name : {"paper_1000x300.cfg", "fig1_600x600.cfg"}) {
    const auto path = fs::path(FORAGE_SOURCE_DIR) / "configs" / name;
    CHECK_NOTHROW(load_config(path));
    CHECK(invoke({"validate", "-c", path.string()}).code == cli::kOk);
  }
}

TEST_CASE("missing config exits 1 without creating the output dir") {
  const auto dir = scratch("missing");
  const auto r = invoke({"run", "-c", (dir / "nope.cfg").string(), "-o", (dir / "out").string()});
  CHECK(r.code == cli::kInvalid);
  CHECK_FALSE(fs::exists(dir / "out"));
  CHECK_FALSE(r.err.empty());
}

TEST_CASE("invalid alpha exits 1 naming alpha") {
  const auto dir = scratch("alpha");
  spit(dir / "a.cfg", "alpha: -1\n");
  const auto r = invoke({"validate", "-c", (dir / "a.cfg").string()});
  CHECK(r.code == cli::kInvalid);
  CHECK(r.err.find("alpha") != std::string::npos);
}

TEST_CASE("bad arguments exit 1") {
  CHECK(invoke({}).code == cli::kInvalid);
  CHECK(invoke({"fly"}).code == cli::kInvalid);
  CHECK(invoke({"run"}).code == cli::kInvalid);
  CHECK(invoke({"run", "-c", "x.cfg", "--steps", "many"}).code == cli::kInvalid);
}

TEST_CASE("validate echoes every field") {
  const auto dir = scratch("validate");
  spit(dir / "s.cfg", kSmall);
  const auto r = invoke({"validate", "-c", (dir / "s.cfg").string()});
  REQUIRE(r.code == cli::kOk);
  for (auto key : config_keys()) CHECK(r.out.find(std::string(key) + ":") != std::string::npos);
  CHECK(parse_config(r.out) == load_config(dir / "s.cfg"));
}

TEST_CASE("repeated runs write byte-identical records") {
  const auto dir = scratch("repeat");
  spit(dir / "s.cfg", kSmall);
  for (auto out : {"a", "b"})
    REQUIRE(invoke({"run", "-c", (dir / "s.cfg").string(), "-o", (dir / out).string(),
                    "--record-every", "1", "--threads", out == std::string("a") ? "1" : "3"})
                .code == cli::kOk);
  CHECK(slurp(dir / "a" / "records.csv") == slurp(dir / "b" / "records.csv"));
  CHECK(slurp(dir / "a" / "final.ckpt") == slurp(dir / "b" / "final.ckpt"));
}

TEST_CASE("resume continues from a checkpoint") {
  const auto dir = scratch("resume");
  spit(dir / "s.cfg", kSmall);
  const auto cfg = (dir / "s.cfg").string();
  REQUIRE(invoke({"run", "-c", cfg, "--steps", "30", "-o", (dir / "full").string()}).code == 0);
  REQUIRE(invoke({"run", "-c", cfg, "--steps", "12", "-o", (dir / "a").string()}).code == 0);
  REQUIRE(invoke({"run", "-c", cfg, "--steps", "18", "-o", (dir / "b").string(), "--resume",
                  (dir / "a" / "final.ckpt").string()})
              .code == 0);
  CHECK(slurp(dir / "full" / "final.ckpt") == slurp(dir / "b" / "final.ckpt"));
  const auto corrupt = dir / "bad.ckpt";
  spit(corrupt, "garbage");
  CHECK(invoke({"run", "-c", cfg, "-o", (dir / "c").string(), "--resume", corrupt.string()}).code ==
        cli::kRuntime);
}

TEST_CASE("bench prints a report") {
  const auto dir = scratch("bench");
  spit(dir / "s.cfg", kSmall);
  const auto r = invoke({"bench", "-c", (dir / "s.cfg").string(), "--steps", "5", "--warmup", "1"});
  CHECK(r.code == cli::kOk);
  CHECK(r.out.find("agent_steps_per_second") != std::string::npos);
  CHECK(r.out.find("valid: true") != std::string::npos);
}

TEST_CASE("render converts frames and reports malformed ones") {
  const auto dir = scratch("render");
  spit(dir / "s.cfg", kSmall);
  const auto cfg = (dir / "s.cfg").string();
  REQUIRE(invoke({"run", "-c", cfg, "--steps", "4", "--frame-every", "2", "-o",
                  (dir / "out").string()})
              .code == 0);
  const auto r = invoke({"render", "-c", cfg, "--frames", (dir / "out" / "frames").string(), "-o",
                         (dir / "img").string(), "--size", "64"});
  CHECK(r.code == cli::kOk);
  CHECK(fs::exists(dir / "img" / "frame_000002.ppm"));
  CHECK(fs::file_size(dir / "img" / "frame_000000.ppm") == 13 + 64 * 64 * 3);

  spit(dir / "bad.csv", std::string(io::kFrameHeader) + "\nagent,1,2\n");
  const auto bad = invoke({"render", "-c", cfg, "--frames", (dir / "bad.csv").string(), "-o",
                           (dir / "img2").string()});
  CHECK(bad.code == cli::kRuntime);
  CHECK(bad.err.find("bad.csv:2") != std::string::npos);
}

TEST_CASE("train writes a fitness history") {
  const auto dir = scratch("train");
  spit(dir / "s.cfg", std::string(kSmall) + "es_pop_size: 4\nes_generations: 3\n");
  const auto r = invoke({"train", "-c", (dir / "s.cfg").string(), "--eval-steps", "3", "-o",
                         (dir / "out").string()});
  REQUIRE(r.code == cli::kOk);
  const std::string hist = slurp(dir / "out" / "es_history.csv");
  CHECK(std::count(hist.begin(), hist.end(), '\n') == 4);
}

TEST_CASE("validate agrees with the loader on 500 fuzzed configs") {
  const auto dir = scratch("fuzz");
  const std::string base = to_text(parse_config(kSmall));
  std::vector<std::string> lines;
  {
    std::istringstream in(base);
    for (std::string l; std::getline(in, l);) lines.push_back(l);
  }
  const std::vector<std::string> junk = {"-1", "0", "1e309", "abc", "[1, 2]", "", "2.5",
                                         "reflective", "strict", "{a: 1}", "0.999", "7",
                                         "[[0, 0, 0, 0]]", "[[1, 2, 3, 4]]", "nan"};
  std::mt19937_64 rng(50);
  int accepted = 0;
  for (int i = 0; i < 500; ++i) {
    auto mutated = lines;
    const int edits = 1 + rng() % 3;
    for (int e = 0; e < edits; ++e) {
      auto& line = mutated[rng() % mutated.size()];
      switch (rng() % 4) {
        case 0: line = line.substr(0, line.find(':') + 1) + " " + junk[rng() % junk.size()]; break;
        case 1: line.clear(); break;
        case 2: line = "unknown_key_" + std::to_string(rng() % 3) + ": 1"; break;
        default: line.insert(rng() % (line.size() + 1), 1, "x:[{ #"[rng() % 6]); break;
      }
    }
    std::string text;
    for (const auto& l : mutated) text += l + "\n";
    const auto path = dir / "f.cfg";
    spit(path, text);
    bool loads = true;
    try {
      load_config(path);
    } catch (const ConfigError&) {
      loads = false;
    }
    const auto r = invoke({"validate", "-c", path.string()});
    CAPTURE(text);
    CHECK(r.code == (loads ? cli::kOk : cli::kInvalid));
    accepted += loads;
  }
  CHECK(accepted > 0);
  CHECK(accepted < 500);
}
