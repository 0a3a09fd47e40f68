#include "antdyn/render.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <numbers>

#include <png.h>

#include "antdyn/errors.hpp"

namespace antdyn {

void RenderSpec::validate() const {
  if (frame_stride < 1) throw ConfigError("frame_stride must be >= 1");
  if (image_size < 16) throw ConfigError("image_size must be >= 16");
}

Image::Image(int width, int height, Rgb fill)
    : width_(width), height_(height), pixels_(static_cast<std::size_t>(width) * height * 3) {
  for (std::size_t i = 0; i < pixels_.size(); i += 3) {
    pixels_[i] = fill.r;
    pixels_[i + 1] = fill.g;
    pixels_[i + 2] = fill.b;
  }
}

Rgb Image::at(int x, int y) const {
  const std::size_t i = (static_cast<std::size_t>(y) * width_ + x) * 3;
  return {pixels_[i], pixels_[i + 1], pixels_[i + 2]};
}

void Image::set(int x, int y, Rgb c) {
  if (x < 0 || y < 0 || x >= width_ || y >= height_) return;
  const std::size_t i = (static_cast<std::size_t>(y) * width_ + x) * 3;
  pixels_[i] = c.r;
  pixels_[i + 1] = c.g;
  pixels_[i + 2] = c.b;
}

void Image::fill_disc(double cx, double cy, double radius, Rgb c) {
  const int y0 = static_cast<int>(std::floor(cy - radius));
  const int y1 = static_cast<int>(std::ceil(cy + radius));
  const int x0 = static_cast<int>(std::floor(cx - radius));
  const int x1 = static_cast<int>(std::ceil(cx + radius));
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      const double dx = x + 0.5 - cx;
      const double dy = y + 0.5 - cy;
      if (dx * dx + dy * dy <= radius * radius) set(x, y, c);
    }
  }
}

void Image::draw_circle(double cx, double cy, double radius, Rgb c) {
  const int n = std::max(16, static_cast<int>(2.0 * std::numbers::pi * radius * 2.0));
  for (int i = 0; i < n; ++i) {
    const double a = 2.0 * std::numbers::pi * i / n;
    set(static_cast<int>(std::floor(cx + radius * std::cos(a))), static_cast<int>(std::floor(cy + radius * std::sin(a))),
        c);
  }
}

void Image::draw_line(double x0, double y0, double x1, double y1, Rgb c) {
  const int n = std::max(1, static_cast<int>(std::ceil(std::max(std::abs(x1 - x0), std::abs(y1 - y0)))));
  for (int i = 0; i <= n; ++i) {
    const double t = static_cast<double>(i) / n;
    set(static_cast<int>(std::floor(x0 + (x1 - x0) * t)), static_cast<int>(std::floor(y0 + (y1 - y0) * t)), c);
  }
}

void Image::write_png(const std::filesystem::path& path) const {
  std::FILE* fp = std::fopen(path.string().c_str(), "wb");
  if (!fp) throw DataError("cannot write " + path.string());
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info || setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
    throw DataError("libpng failed writing " + path.string());
  }
  png_init_io(png, fp);
  png_set_IHDR(png, info, static_cast<png_uint_32>(width_), static_cast<png_uint_32>(height_), 8, PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < height_; ++y) {
    png_write_row(png, pixels_.data() + static_cast<std::size_t>(y) * width_ * 3);
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  std::fclose(fp);
}

Image render_frame(const FrameScene& scene, int image_size) {
  const double res = scene.meta.resolution_px;
  const double k = image_size / res;
  auto sx = [&](double x) { return x * k; };
  auto sy = [&](double y) { return (res - y) * k; };

  Image img(image_size, image_size, palette::kBackground);
  const double c = scene.meta.center_px();
  img.fill_disc(sx(c), sy(c), scene.meta.radius_px() * k, palette::kArena);
  img.draw_circle(sx(c), sy(c), scene.meta.radius_px() * k - 0.5, palette::kArenaEdge);

  const double ant_r = std::max(1.5, 6.0 * k);
  for (const Point& p : scene.ants) img.fill_disc(sx(p.x), sy(p.y), ant_r, palette::kAnt);

  auto polyline = [&](std::span<const Point> pts, Rgb col) {
    for (std::size_t i = 1; i < pts.size(); ++i) {
      img.draw_line(sx(pts[i - 1].x), sy(pts[i - 1].y), sx(pts[i].x), sy(pts[i].y), col);
    }
  };
  polyline(scene.target_trail, palette::kTarget);
  polyline(scene.agent_trail, palette::kAgentTrail);

  img.fill_disc(sx(scene.target.x), sy(scene.target.y), ant_r, palette::kTarget);
  if (scene.vision_radius > 0.0) {
    img.draw_circle(sx(scene.agent.x), sy(scene.agent.y), scene.vision_radius * k, palette::kAgent);
  }
  img.fill_disc(sx(scene.agent.x), sy(scene.agent.y), ant_r, palette::kAgent);
  const double hx = scene.agent.x + 2.5 * ant_r / k * std::cos(scene.agent.theta);
  const double hy = scene.agent.y + 2.5 * ant_r / k * std::sin(scene.agent.theta);
  img.draw_line(sx(scene.agent.x), sy(scene.agent.y), sx(hx), sy(hy), palette::kAgent);
  return img;
}

bool frame_due(int step, int horizon, int stride) { return step % stride == 0 || step == horizon; }

std::string frame_filename(int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "frame_%05d.png", index);
  return buf;
}

std::string trails_svg(const RecordingMeta& meta, std::span<const Point> agent_trail,
                       std::span<const Point> target_trail) {
  const double res = meta.resolution_px;
  auto num = [](double v) {
    char buf[64];
    return std::string(buf, std::to_chars(buf, buf + sizeof(buf), v).ptr);
  };
  auto points = [&](std::span<const Point> pts) {
    std::string s;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i) s += ' ';
      s += num(pts[i].x) + "," + num(res - pts[i].y);
    }
    return s;
  };
  const std::string r = num(res);
  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<!-- Screen coordinates: y is flipped (screen_y = " + r +
         " - y) relative to the counter-clockwise simulation frame. -->\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + r + "\" height=\"" + r + "\" viewBox=\"0 0 " + r +
         " " + r + "\">\n";
  svg += "  <circle cx=\"" + num(meta.center_px()) + "\" cy=\"" + num(res - meta.center_px()) + "\" r=\"" +
         num(meta.radius_px()) + "\" fill=\"#f6f2ea\" stroke=\"#5a5a5a\"/>\n";
  svg += "  <polyline id=\"target\" fill=\"none\" stroke=\"#dc1e1e\" stroke-width=\"2\" points=\"" +
         points(target_trail) + "\"/>\n";
  svg += "  <polyline id=\"agent\" fill=\"none\" stroke=\"#8cbeff\" stroke-width=\"2\" points=\"" +
         points(agent_trail) + "\"/>\n";
  svg += "</svg>\n";
  return svg;
}

}  // namespace antdyn
