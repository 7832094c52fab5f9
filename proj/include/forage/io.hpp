#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "forage/config.hpp"
#include "forage/engine.hpp"
#include "forage/evolution.hpp"

namespace forage::io {

// ---- step records -------------------------------------------------------

inline constexpr const char* kRecordHeader =
    "step,agents,resources,mean_energy,min_energy,max_energy,total_resource,births,deaths";

/// One CSV row (no trailing newline). Numbers use the shortest round-trip form.
std::string record_row(const StepRecord& r);

class RecordWriter {
 public:
  explicit RecordWriter(const std::filesystem::path& path);
  void write(const StepRecord& r);

 private:
  std::ofstream out_;
};

// ---- snapshot frames ----------------------------------------------------

inline constexpr const char* kFrameHeader = "kind,id,x,y,vx,vy,value";

/// Active agents (kind "agent", id = uid, value = energy) followed by active
/// resources (kind "resource", id = slot, vx = vy = 0, value = s).
std::string frame_text(const SimState& state);

/// frame_000042.csv
std::string frame_filename(std::uint64_t index);

void write_frame(const std::filesystem::path& dir, const SimState& state, std::uint64_t index);

struct FrameAgent {
  std::uint64_t uid;
  double x, y, vx, vy, energy;
};
struct FrameResource {
  std::uint64_t slot;
  double x, y, value;
};
struct Frame {
  std::vector<FrameAgent> agents;
  std::vector<FrameResource> resources;
};

class FrameParseError : public std::runtime_error {
 public:
  FrameParseError(std::string file, std::size_t line, const std::string& what);
  const std::string& file() const noexcept { return file_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string file_;
  std::size_t line_;
};

Frame parse_frame(const std::string& text, const std::string& name = "<frame>");
Frame read_frame(const std::filesystem::path& path);

// ---- checkpoints --------------------------------------------------------

inline constexpr char kCheckpointMagic[8] = {'F', 'O', 'R', 'G', 'C', 'K', 'P', 'T'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Little-endian binary dump; layout in docs/formats.md.
std::string checkpoint_bytes(const SimState& state, const SimConfig& config);
SimState parse_checkpoint(const std::string& bytes, const SimConfig& config);

void save_checkpoint(const std::filesystem::path& path, const SimState& state,
                     const SimConfig& config);
SimState load_checkpoint(const std::filesystem::path& path, const SimConfig& config);

// ---- evolution strategies history --------------------------------------

inline constexpr const char* kEsHeader = "generation,mean_fitness,best_fitness";

std::string es_history_text(const EsResult& result);

}  // namespace forage::io
