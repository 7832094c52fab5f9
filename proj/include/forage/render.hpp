#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "forage/io.hpp"

namespace forage::render {

using Rgb = std::array<std::uint8_t, 3>;

inline constexpr Rgb kBackground{255, 255, 255};
inline constexpr Rgb kResource{220, 30, 30};
inline constexpr Rgb kAgent{30, 60, 220};

struct Image {
  Image(int width, int height) : width(width), height(height), rgb(3 * width * height, 255) {}

  Rgb at(int x, int y) const;
  void set(int x, int y, Rgb c);

  int width;
  int height;
  std::vector<std::uint8_t> rgb;
};

struct RenderOptions {
  int size = 1024;                 // square canvas, pixels
  int agent_radius = 3;            // pixels
  int tick_length = 9;             // pixels, from the agent center
  double max_resource_radius = 6;  // pixels, for the largest value in the frame
};

struct RenderStats {
  std::size_t agents_drawn = 0;
  std::size_t resources_drawn = 0;
};

struct Pixel {
  int x;
  int y;
  friend bool operator==(const Pixel&, const Pixel&) = default;
};

/// World (x, y) in [0, W] x [0, H], y up, to pixel (col, row), row 0 at the
/// top: col = floor(x / W * size), row = floor((1 - y / H) * size), both
/// clamped to [0, size - 1].
Pixel world_to_pixel(double x, double y, double world_width, double world_height, int size);

/// Resources are red disks with radius proportional to their value (the
/// largest value in the frame gets max_resource_radius); agents are blue
/// disks with a tick along the velocity direction. Resources are drawn
/// first.
Image render_frame(const io::Frame& frame, double world_width, double world_height,
                   const RenderOptions& options = {}, RenderStats* stats = nullptr);

/// Binary PPM (P6).
void write_ppm(const std::filesystem::path& path, const Image& image);

}  // namespace forage::render
