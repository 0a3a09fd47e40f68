#include <doctest.h>

#include <regex>

#include "antdyn/errors.hpp"
#include "antdyn/render.hpp"
#include "oracles.hpp"

using namespace antdyn;

namespace {

int count_of(const std::string& s, const std::string& needle) {
  int n = 0;
  for (std::size_t p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("frame schedule") {
  for (int horizon : {1, 7, 300}) {
    for (int stride : {1, 2, 3, 10, 299, 300, 1000}) {
      int frames = 0;
      for (int step = 0; step <= horizon; ++step) frames += frame_due(step, horizon, stride);
      CHECK(frames == (horizon + stride - 1) / stride + 1);
    }
  }
  CHECK(frame_filename(7) == "frame_00007.png");
  CHECK_THROWS_AS((RenderSpec{"x", 0, 512}).validate(), ConfigError);
  CHECK_THROWS_AS((RenderSpec{"x", 1, 0}).validate(), ConfigError);
}

TEST_CASE("trails SVG") {
  const RecordingMeta meta;
  const std::vector<Point> agent{{640, 640}, {650, 640}, {660, 650}};
  const std::vector<Point> target{{640, 640}, {650, 645}, {661, 651}};
  const std::string svg = trails_svg(meta, agent, target);
  CHECK(count_of(svg, "<polyline") == 2);
  CHECK(count_of(svg, "<circle") == 1);
  const std::regex pts("points=\"([^\"]*)\"");
  std::vector<std::string> lists;
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), pts); it != std::sregex_iterator(); ++it) {
    lists.push_back((*it)[1]);
  }
  REQUIRE(lists.size() == 2);
  CHECK(count_of(lists[0], ",") == 3);
  CHECK(count_of(lists[1], ",") == 3);
  // y is flipped about the image height.
  CHECK(lists[1] == "640,640 650,640 660,630");
  CHECK(svg.find("#dc1e1e") < svg.find("#8cbeff"));
}

TEST_CASE("frames") {
  const RecordingMeta meta;
  const std::vector<Point> ants{{500, 500}, {700, 900}};
  const std::vector<Point> trail{{640, 640}, {700, 640}};
  FrameScene scene{meta, {700, 640, 10, 0.0, 0}, {710, 650}, ants, trail, trail, 100.0};
  const Image img = render_frame(scene, 256);
  CHECK(img.width() == 256);
  CHECK(img.height() == 256);
  CHECK(img.at(0, 0) == palette::kBackground);
  CHECK(img.at(128, 20) == palette::kArena);
  // Agent at (700, 640) maps to column 140, row 128.
  CHECK(img.at(140, 128) == palette::kAgent);
  // The ant at y = 900 lands in the upper half after the flip.
  CHECK(img.at(140, 76) == palette::kAnt);

  const auto dir = oracle::scratch_dir("render");
  img.write_png(dir / "a.png");
  render_frame(scene, 256).write_png(dir / "b.png");
  const std::string a = oracle::read_file(dir / "a.png");
  CHECK(a.substr(1, 3) == "PNG");
  CHECK(a == oracle::read_file(dir / "b.png"));
  CHECK_THROWS_AS(img.write_png(dir / "no" / "such" / "dir.png"), DataError);
}
