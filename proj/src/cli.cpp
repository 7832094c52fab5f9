#include "forage/cli.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "forage/config.hpp"
#include "forage/engine.hpp"
#include "forage/evolution.hpp"
#include "forage/io.hpp"
#include "forage/policy.hpp"
#include "forage/render.hpp"

namespace forage::cli {
namespace fs = std::filesystem;

namespace {

constexpr const char* kVersion = "0.1.0";

struct Invocation {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> steps;
  std::string out_dir = "forage_out";
  std::uint64_t record_every = 10;
  std::uint64_t frame_every = 0;
  unsigned threads = Executor::default_threads();
  std::string resume;
  // bench
  std::uint64_t warmup = 10;
  // render
  std::string frames;
  int size = 1024;
  // train
  std::uint64_t eval_steps = 50;
};

/// Invalid user input: reported with exit status 1.
struct InvalidInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

SimConfig effective_config(const Invocation& inv) {
  SimConfig c;
  try {
    c = load_config(inv.config_path);
    if (inv.seed) c.seed = *inv.seed;
    if (inv.steps) c.n_steps = *inv.steps;
    validate(c);
  } catch (const ConfigError& e) {
    throw InvalidInput(e.what());
  }
  return c;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
}

int cmd_validate(const Invocation& inv, std::ostream& out) {
  const SimConfig c = effective_config(inv);
  out << to_text(c);
  return kOk;
}

int cmd_run(const Invocation& inv, std::ostream& out) {
  const SimConfig config = effective_config(inv);
  Engine engine(config, {inv.threads, false, nullptr});

  SimState state;
  if (!inv.resume.empty()) {
    state = io::load_checkpoint(inv.resume, config);
    state.world = make_world(config);
  } else {
    state = engine.initial_state();
  }
  const std::uint64_t start_step = state.step;

  const fs::path dir(inv.out_dir);
  fs::create_directories(dir);
  if (inv.frame_every > 0) fs::create_directories(dir / "frames");

  nlohmann::ordered_json manifest;
  manifest["program"] = "forage";
  manifest["version"] = kVersion;
  manifest["checkpoint_version"] = io::kCheckpointVersion;
  manifest["kernels"] = std::string(engine.kernels().name);
  manifest["seed"] = config.seed;
  manifest["config_hash"] = fmt::format("{:016x}", config_hash(config));
  manifest["start_step"] = start_step;
  manifest["steps"] = config.n_steps;
  manifest["record_every"] = inv.record_every;
  manifest["frame_every"] = inv.frame_every;
  manifest["resumed_from"] = nullptr;
  if (!inv.resume.empty()) manifest["resumed_from"] = inv.resume;
  manifest["files"] = {{"config", "config.yaml"},
                       {"records", "records.csv"},
                       {"frames", inv.frame_every > 0 ? "frames/" : ""},
                       {"checkpoint", "final.ckpt"}};
  manifest["config"] = to_text(config);
  write_text(dir / "manifest.json", manifest.dump(2) + "\n");
  write_text(dir / "config.yaml", to_text(config));

  io::RecordWriter records(dir / "records.csv");
  RunSinks sinks;
  sinks.record_every = inv.record_every;
  sinks.on_record = [&](const StepRecord& r) { records.write(r); };
  sinks.frame_every = inv.frame_every;
  sinks.on_frame = [&](const SimState& s, std::uint64_t index) {
    io::write_frame(dir / "frames", s, index);
  };

  const auto t0 = std::chrono::steady_clock::now();
  state = engine.run(std::move(state), config.n_steps, sinks);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  io::save_checkpoint(dir / "final.ckpt", state, config);

  const StepRecord last = summarize(state);
  out << fmt::format("ran steps {}..{} in {:.3f} s ({} kernels, {} threads)\n", start_step,
                     state.step, secs, engine.kernels().name, engine.threads());
  out << fmt::format("agents {} resources {} births {} deaths {} total_resource {}\n", last.agents,
                     last.resources, state.stats.births, state.stats.deaths, last.total_resource);
  out << fmt::format("output: {}\n", dir.string());
  return kOk;
}

int cmd_bench(const Invocation& inv, std::ostream& out) {
  const SimConfig config = effective_config(inv);
  Engine engine(config, {inv.threads, false, nullptr});
  const std::uint64_t steps = inv.steps.value_or(1000);
  const BenchReport r = engine.bench(steps, inv.warmup);
  out << fmt::format("kernels: {}\n", r.kernels);
  out << fmt::format("threads: {}\n", r.threads);
  out << fmt::format("warmup_steps: {}\n", r.warmup_steps);
  out << fmt::format("measured_steps: {}\n", r.measured_steps);
  out << fmt::format("valid: {}\n", r.valid);
  out << fmt::format("seconds: {:.6f}\n", r.seconds);
  out << fmt::format("steps_per_second: {:.3f}\n", r.steps_per_second);
  out << fmt::format("agent_steps_per_second: {:.1f}\n", r.agent_steps_per_second);
  out << fmt::format("extrapolated_minutes_1e6_steps: {:.2f}\n", r.extrapolated_seconds_1e6 / 60.0);
  return kOk;
}

int cmd_render(const Invocation& inv, std::ostream& out) {
  const SimConfig config = effective_config(inv);
  std::vector<fs::path> inputs;
  const fs::path src(inv.frames);
  if (fs::is_directory(src)) {
    for (const auto& entry : fs::directory_iterator(src))
      if (entry.path().extension() == ".csv") inputs.push_back(entry.path());
    std::ranges::sort(inputs);
  } else if (fs::exists(src)) {
    inputs.push_back(src);
  } else {
    throw InvalidInput(fmt::format("frames not found: '{}'", inv.frames));
  }
  if (inv.size < 1) throw InvalidInput("--size must be >= 1");

  const fs::path dir(inv.out_dir);
  fs::create_directories(dir);
  render::RenderOptions options;
  options.size = inv.size;
  for (const auto& path : inputs) {
    const io::Frame frame = io::read_frame(path);
    render::RenderStats stats;
    const auto image = render::render_frame(frame, config.world_width, config.world_height, options, &stats);
    const fs::path target = dir / path.filename().replace_extension(".ppm");
    render::write_ppm(target, image);
    out << fmt::format("{}: {} agents, {} resources\n", target.string(), stats.agents_drawn,
                       stats.resources_drawn);
  }
  return kOk;
}

int cmd_train(const Invocation& inv, std::ostream& out) {
  const SimConfig config = effective_config(inv);
  Engine engine(config, {inv.threads, false, nullptr});
  const PolicyLayout layout = policy_layout(config);
  CounterRng rng(config.seed, Stream::policy_init, 0, 0);
  const auto initial = policy_init(rng, layout, config.policy_gain, config.policy_tau);

  const EsResult result = es_train(
      [&](std::span<const double> p) { return scenario_fitness(engine, p, inv.eval_steps); },
      initial, es_config(config), config.seed);

  const fs::path dir(inv.out_dir);
  fs::create_directories(dir);
  write_text(dir / "es_history.csv", io::es_history_text(result));
  std::string params;
  for (double v : result.best_params) params += fmt::format("{}\n", v);
  write_text(dir / "best_params.txt", params);
  out << fmt::format("best fitness {} after {} generations\n", result.best_fitness,
                     result.mean_fitness.size());
  return kOk;
}

}  // namespace

int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"forage: multi-agent foraging simulator"};
  app.require_subcommand(1);
  Invocation inv;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-c,--config", inv.config_path, "Scenario config file")->required();
    sub->add_option("--seed", inv.seed, "Override the config seed");
    sub->add_option("--threads", inv.threads, "Worker threads (default: FORAGE_THREADS or 1)")
        ->check(CLI::PositiveNumber);
  };

  auto* run = app.add_subcommand("run", "Run a scenario and write records, frames and a checkpoint");
  add_common(run);
  run->add_option("--steps", inv.steps, "Override n_steps");
  run->add_option("-o,--out", inv.out_dir, "Output directory");
  run->add_option("--record-every", inv.record_every, "Step record cadence (0 disables)");
  run->add_option("--frame-every", inv.frame_every, "Snapshot frame cadence (0 disables)");
  run->add_option("--resume", inv.resume, "Continue from a checkpoint");

  auto* bench = app.add_subcommand("bench", "Measure step throughput");
  add_common(bench);
  bench->add_option("--steps", inv.steps, "Measured steps (default 1000)");
  bench->add_option("--warmup", inv.warmup, "Untimed warmup steps");

  auto* val = app.add_subcommand("validate", "Check a config and print the effective values");
  add_common(val);

  auto* rend = app.add_subcommand("render", "Render snapshot frames to PPM images");
  add_common(rend);
  rend->add_option("--frames", inv.frames, "Frame file or directory")->required();
  rend->add_option("-o,--out", inv.out_dir, "Output directory");
  rend->add_option("--size", inv.size, "Canvas size in pixels");

  auto* train = app.add_subcommand("train", "Tune a shared policy with evolution strategies");
  add_common(train);
  train->add_option("--eval-steps", inv.eval_steps, "Steps per fitness evaluation");
  train->add_option("-o,--out", inv.out_dir, "Output directory");

  std::vector<const char*> argv{"forage"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInvalid;
  }

  try {
    if (run->parsed()) return cmd_run(inv, out);
    if (bench->parsed()) return cmd_bench(inv, out);
    if (val->parsed()) return cmd_validate(inv, out);
    if (rend->parsed()) return cmd_render(inv, out);
    if (train->parsed()) return cmd_train(inv, out);
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntime;
  }
  return kInvalid;
}

}  // namespace forage::cli
