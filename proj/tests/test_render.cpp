#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "forage/render.hpp"

using namespace forage;
using namespace forage::render;

TEST_CASE("world to pixel map") {
  CHECK(world_to_pixel(50, 50, 100, 100, 1024) == Pixel{512, 512});
  CHECK(world_to_pixel(0, 0, 100, 100, 1024) == Pixel{0, 1023});
  CHECK(world_to_pixel(100, 100, 100, 100, 1024) == Pixel{1023, 0});
  CHECK(world_to_pixel(25, 75, 100, 100, 8) == Pixel{2, 2});
}

TEST_CASE("empty frame renders blank") {
  RenderStats stats;
  const Image img = render_frame({}, 100, 100, {}, &stats);
  CHECK(img.width == 1024);
  CHECK(img.height == 1024);
  CHECK(std::ranges::all_of(img.rgb, [](std::uint8_t v) { return v == 255; }));
  CHECK(stats.agents_drawn == 0);
}

TEST_CASE("centered agent with a rightward tick") {
  io::Frame f;
  f.agents.push_back({1, 50, 50, 1, 0, 5});
  const Image img = render_frame(f, 100, 100);
  CHECK(img.at(512, 512) == kAgent);
  for (int k = 1; k <= 9; ++k) CHECK(img.at(512 + k, 512) == kAgent);
  CHECK(img.at(512 + 10, 512) == kBackground);
  CHECK(img.at(512 - 5, 512) == kBackground);
  CHECK(img.at(512, 512 - 5) == kBackground);
  CHECK(img.at(512, 512 + 5) == kBackground);
}

TEST_CASE("upward velocity ticks toward row zero") {
  io::Frame f;
  f.agents.push_back({1, 50, 50, 0, 2, 5});
  const Image img = render_frame(f, 100, 100);
  CHECK(img.at(512, 512 - 8) == kAgent);
  CHECK(img.at(512, 512 + 8) == kBackground);
}

TEST_CASE("resource radius scales with value and agents draw on top") {
  io::Frame f;
  f.resources.push_back({0, 25, 50, 10.0});
  f.resources.push_back({1, 75, 50, 5.0});
  f.agents.push_back({1, 25, 50, 0, 0, 1});
  const Image img = render_frame(f, 100, 100);
  const Pixel big = world_to_pixel(25, 50, 100, 100, 1024);
  const Pixel small = world_to_pixel(75, 50, 100, 100, 1024);
  CHECK(img.at(big.x, big.y) == kAgent);
  CHECK(img.at(big.x + 5, big.y) == kResource);
  CHECK(img.at(small.x + 2, small.y) == kResource);
  CHECK(img.at(small.x + 5, small.y) == kBackground);
}

TEST_CASE("600 agents and 600 resources are all drawn") {
  io::Frame f;
  for (int i = 0; i < 600; ++i) {
    f.agents.push_back({std::uint64_t(i + 1), (i * 7 % 100) + 0.5, (i * 13 % 100) + 0.5, 1, 1, 1});
    f.resources.push_back({std::uint64_t(i), (i * 11 % 100) + 0.25, (i * 3 % 100) + 0.25, 1.0 + i});
  }
  RenderStats stats;
  render_frame(f, 100, 100, {}, &stats);
  CHECK(stats.agents_drawn + stats.resources_drawn == 1200);
}

TEST_CASE("ppm output") {
  const auto path = std::filesystem::temp_directory_path() / "forage_render_test.ppm";
  Image img(3, 2);
  img.set(0, 0, kAgent);
  write_ppm(path, img);
  std::ifstream in(path, std::ios::binary);
  const std::string data((std::istreambuf_iterator<char>(in)), {});
  CHECK(data.substr(0, 11) == "P6\n3 2\n255\n");
  CHECK(data.size() == 11 + 18);
  CHECK(static_cast<std::uint8_t>(data[11 + 2]) == kAgent[2]);
}
