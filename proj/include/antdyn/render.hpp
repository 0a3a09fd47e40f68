#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "antdyn/arena.hpp"
#include "antdyn/recording.hpp"
#include "antdyn/sensing.hpp"

namespace antdyn {

/// Offline rendering options. Palette is fixed: agent blue, agent trail light
/// blue, target and its trail red, replayed ants grey.
struct RenderSpec {
  std::filesystem::path output_dir;
  int frame_stride = 1;
  int image_size = 512;  // PNG side length in pixels

  void validate() const;
};

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

namespace palette {
inline constexpr Rgb kBackground{255, 255, 255};
inline constexpr Rgb kArena{246, 242, 234};
inline constexpr Rgb kArenaEdge{90, 90, 90};
inline constexpr Rgb kAnt{128, 128, 128};
inline constexpr Rgb kTarget{220, 30, 30};
inline constexpr Rgb kAgent{30, 60, 220};
inline constexpr Rgb kAgentTrail{140, 190, 255};
}  // namespace palette

/// Row-major RGB8 image.
class Image {
 public:
  Image(int width, int height, Rgb fill);

  int width() const { return width_; }
  int height() const { return height_; }
  Rgb at(int x, int y) const;
  void set(int x, int y, Rgb c);  // ignores out-of-bounds writes

  void fill_disc(double cx, double cy, double radius, Rgb c);
  void draw_circle(double cx, double cy, double radius, Rgb c);
  void draw_line(double x0, double y0, double x1, double y1, Rgb c);

  void write_png(const std::filesystem::path& path) const;

 private:
  int width_;
  int height_;
  std::vector<std::uint8_t> pixels_;
};

struct FrameScene {
  RecordingMeta meta;
  AgentState agent;
  Point target;
  std::span<const Point> ants;
  std::span<const Point> agent_trail;
  std::span<const Point> target_trail;
  double vision_radius = 0.0;  // 0 hides the vision circle
};

/// Draws one frame; screen y is flipped relative to the simulation frame.
Image render_frame(const FrameScene& scene, int image_size);

/// True for steps 0, stride, 2*stride, ... and the final step, giving
/// ceil(horizon / stride) + 1 frames per episode.
bool frame_due(int step, int horizon, int stride);

std::string frame_filename(int index);  // frame_%05d.png

/// SVG document with the arena outline and exactly two polylines: the
/// target trail (red) and the agent trail (light blue).
std::string trails_svg(const RecordingMeta& meta, std::span<const Point> agent_trail,
                       std::span<const Point> target_trail);

}  // namespace antdyn
