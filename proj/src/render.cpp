#include "forage/render.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>

namespace forage::render {

Rgb Image::at(int x, int y) const {
  const std::size_t i = 3 * (static_cast<std::size_t>(y) * width + x);
  return {rgb[i], rgb[i + 1], rgb[i + 2]};
}

void Image::set(int x, int y, Rgb c) {
  if (x < 0 || y < 0 || x >= width || y >= height) return;
  const std::size_t i = 3 * (static_cast<std::size_t>(y) * width + x);
  rgb[i] = c[0];
  rgb[i + 1] = c[1];
  rgb[i + 2] = c[2];
}

Pixel world_to_pixel(double x, double y, double world_width, double world_height, int size) {
  auto to_index = [size](double t) {
    const double v = std::floor(t * size);
    return static_cast<int>(std::clamp(v, 0.0, static_cast<double>(size - 1)));
  };
  return {to_index(x / world_width), to_index(1.0 - y / world_height)};
}

namespace {

void disk(Image& img, Pixel c, double radius, Rgb color) {
  const int r = static_cast<int>(std::ceil(radius));
  const double r2 = radius * radius;
  img.set(c.x, c.y, color);
  for (int dy = -r; dy <= r; ++dy)
    for (int dx = -r; dx <= r; ++dx)
      if (dx * dx + dy * dy <= r2) img.set(c.x + dx, c.y + dy, color);
}

void line(Image& img, Pixel a, Pixel b, Rgb color) {
  // Bresenham
  int x0 = a.x, y0 = a.y;
  const int dx = std::abs(b.x - x0), sx = x0 < b.x ? 1 : -1;
  const int dy = -std::abs(b.y - y0), sy = y0 < b.y ? 1 : -1;
  int err = dx + dy;
  while (true) {
    img.set(x0, y0, color);
    if (x0 == b.x && y0 == b.y) break;
    const int e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      x0 += sx;
    }
    if (e2 <= dx) {
      err += dx;
      y0 += sy;
    }
  }
}

}  // namespace

Image render_frame(const io::Frame& frame, double world_width, double world_height,
                   const RenderOptions& options, RenderStats* stats) {
  Image img(options.size, options.size);
  RenderStats counted;

  double max_value = 0.0;
  for (const auto& r : frame.resources) max_value = std::max(max_value, r.value);
  for (const auto& r : frame.resources) {
    const Pixel c = world_to_pixel(r.x, r.y, world_width, world_height, options.size);
    const double radius = max_value > 0.0 ? options.max_resource_radius * r.value / max_value : 0.0;
    disk(img, c, radius, kResource);
    ++counted.resources_drawn;
  }

  for (const auto& a : frame.agents) {
    const Pixel c = world_to_pixel(a.x, a.y, world_width, world_height, options.size);
    disk(img, c, options.agent_radius, kAgent);
    const double speed = std::hypot(a.vx, a.vy);
    if (speed > 0.0) {
      // Screen rows grow downward, so the y component flips.
      const Pixel tip{c.x + static_cast<int>(std::lround(options.tick_length * a.vx / speed)),
                      c.y - static_cast<int>(std::lround(options.tick_length * a.vy / speed))};
      line(img, c, tip, kAgent);
    }
    ++counted.agents_drawn;
  }
  if (stats) *stats = counted;
  return img;
}

void write_ppm(const std::filesystem::path& path, const Image& image) {
  std::ofstream out(path, std::ios::binary);
  out << "P6\n" << image.width << ' ' << image.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.rgb.data()),
            static_cast<std::streamsize>(image.rgb.size()));
  if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
}

}  // namespace forage::render
