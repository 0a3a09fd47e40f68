#include "antdyn/recording.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <string_view>

#include <json.hpp>

#include "antdyn/errors.hpp"

namespace antdyn {

namespace {

constexpr double kDiscTolerancePx = 1e-9;
constexpr std::string_view kCsvHeader = "ant_id,t_sec,x_px,y_px";

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string describe_point(double x, double y) {
  return "(" + format_double(x) + ", " + format_double(y) + ")";
}

template <typename T>
bool parse_field(std::string_view field, T& out) {
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto res = std::from_chars(first, last, out);
  return res.ec == std::errc() && res.ptr == last;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DataError("cannot open " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

void RecordingMeta::validate() const {
  if (!(std::isfinite(arena_diameter_mm) && arena_diameter_mm > 0.0)) {
    throw DataError("arena_diameter_mm must be positive, got " + format_double(arena_diameter_mm));
  }
  if (resolution_px < 2) {
    throw DataError("resolution_px must be at least 2, got " + std::to_string(resolution_px));
  }
  if (!(std::isfinite(sample_rate_hz) && sample_rate_hz > 0.0)) {
    throw DataError("sample_rate_hz must be positive, got " + format_double(sample_rate_hz));
  }
}

bool RecordingMeta::contains(double x, double y) const {
  const double c = center_px();
  return std::hypot(x - c, y - c) <= radius_px() + kDiscTolerancePx;
}

ColonyRecording::ColonyRecording(std::map<AntId, Series> ants, RecordingMeta meta)
    : ants_(std::move(ants)), meta_(meta) {
  meta_.validate();
  if (ants_.empty()) {
    throw DataError("recording contains no ants");
  }
  for (const auto& [id, series] : ants_) {
    const std::string who = "ant " + std::to_string(id);
    if (series.size() < 2) {
      throw DataError(who + ": needs at least 2 samples, has " + std::to_string(series.size()));
    }
    for (std::size_t i = 0; i < series.size(); ++i) {
      const Sample& s = series[i];
      if (!std::isfinite(s.t) || !std::isfinite(s.x) || !std::isfinite(s.y)) {
        throw DataError(who + ", sample " + std::to_string(i) + ": non-finite value");
      }
      if (!meta_.contains(s.x, s.y)) {
        throw DataError(who + ", sample " + std::to_string(i) + ": position " +
                        describe_point(s.x, s.y) + " outside arena disc");
      }
      if (i > 0 && !(series[i - 1].t < s.t)) {
        throw DataError(who + ", sample " + std::to_string(i) + ": timestamp " +
                        format_double(s.t) + " not after " + format_double(series[i - 1].t));
      }
    }
  }
}

const Series& ColonyRecording::series(AntId id) const {
  auto it = ants_.find(id);
  if (it == ants_.end()) {
    throw DataError("no ant with id " + std::to_string(id));
  }
  return it->second;
}

std::size_t ColonyRecording::sample_count() const {
  std::size_t n = 0;
  for (const auto& [id, series] : ants_) n += series.size();
  return n;
}

void SyntheticParams::validate() const {
  if (n_ants < 1) throw ConfigError("n_ants must be >= 1");
  if (!(std::isfinite(duration_s) && duration_s > 0.0)) throw ConfigError("duration_s must be > 0");
  if (!(std::isfinite(sample_rate_hz) && sample_rate_hz > 0.0)) {
    throw ConfigError("sample_rate_hz must be > 0");
  }
  if (std::llround(duration_s * sample_rate_hz) < 1) {
    throw ConfigError("duration_s * sample_rate_hz must give at least 2 samples");
  }
  if (!(std::isfinite(noise_px) && noise_px >= 0.0)) throw ConfigError("noise_px must be >= 0");
  if (!(cluster_pull >= 0.0 && cluster_pull <= 1.0)) throw ConfigError("cluster_pull must be in [0, 1]");
  if (!(std::isfinite(arena_diameter_mm) && arena_diameter_mm > 0.0)) {
    throw ConfigError("arena_diameter_mm must be > 0");
  }
  if (resolution_px < 2) throw ConfigError("resolution_px must be >= 2");
}

BundlePaths bundle_paths(const std::filesystem::path& base) {
  std::filesystem::path stem = base;
  if (stem.extension() == ".csv") stem.replace_extension();
  BundlePaths p;
  p.csv = stem;
  p.csv += ".csv";
  p.meta = stem;
  p.meta += ".meta.json";
  return p;
}

ColonyRecording load_recording(const std::filesystem::path& base) {
  const BundlePaths paths = bundle_paths(base);

  RecordingMeta meta;
  {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(read_file(paths.meta));
    } catch (const nlohmann::json::exception& e) {
      throw DataError(paths.meta.string() + ": " + e.what());
    }
    for (const char* key : {"arena_diameter_mm", "resolution_px", "sample_rate_hz"}) {
      if (!j.contains(key)) {
        throw DataError(paths.meta.string() + ": missing metadata field '" + key + "'");
      }
      if (!j[key].is_number()) {
        throw DataError(paths.meta.string() + ": metadata field '" + key + "' is not a number");
      }
    }
    if (!j["resolution_px"].is_number_integer()) {
      throw DataError(paths.meta.string() + ": resolution_px must be an integer");
    }
    meta.arena_diameter_mm = j["arena_diameter_mm"].get<double>();
    meta.resolution_px = j["resolution_px"].get<int>();
    meta.sample_rate_hz = j["sample_rate_hz"].get<double>();
    try {
      meta.validate();
    } catch (const DataError& e) {
      throw DataError(paths.meta.string() + ": " + e.what());
    }
  }

  struct Row {
    std::size_t line;
    Sample sample;
  };
  std::map<AntId, std::vector<Row>> rows;

  const std::string text = read_file(paths.csv);
  std::string_view rest(text);
  std::size_t line_no = 0;
  bool seen_header = false;
  while (!rest.empty()) {
    const auto nl = rest.find('\n');
    std::string_view line = rest.substr(0, nl);
    rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;

    const std::string where = paths.csv.string() + ", row " + std::to_string(line_no);
    if (!seen_header) {
      if (line != kCsvHeader) {
        throw DataError(where + ": expected header '" + std::string(kCsvHeader) + "'");
      }
      seen_header = true;
      continue;
    }

    if (std::count(line.begin(), line.end(), ',') != 3) {
      throw DataError(where + ": expected 4 fields");
    }
    std::string_view fields[4];
    std::string_view cur = line;
    for (auto& field : fields) {
      const auto comma = cur.find(',');
      field = cur.substr(0, comma);
      cur = comma == std::string_view::npos ? std::string_view{} : cur.substr(comma + 1);
    }

    AntId id = 0;
    Sample s;
    if (!parse_field(fields[0], id)) {
      throw DataError(where + ": ant_id '" + std::string(fields[0]) + "' is not a non-negative integer");
    }
    if (!parse_field(fields[1], s.t) || !parse_field(fields[2], s.x) || !parse_field(fields[3], s.y) ||
        !std::isfinite(s.t) || !std::isfinite(s.x) || !std::isfinite(s.y)) {
      throw DataError(where + " (ant " + std::to_string(id) + "): values must be finite decimals");
    }
    if (!meta.contains(s.x, s.y)) {
      throw DataError(where + " (ant " + std::to_string(id) + "): position " + describe_point(s.x, s.y) +
                      " outside arena disc of radius " + format_double(meta.radius_px()) + " px");
    }
    rows[id].push_back({line_no, s});
  }
  if (!seen_header) {
    throw DataError(paths.csv.string() + ": empty file");
  }

  std::map<AntId, Series> ants;
  for (auto& [id, list] : rows) {
    std::stable_sort(list.begin(), list.end(),
                     [](const Row& a, const Row& b) { return a.sample.t < b.sample.t; });
    for (std::size_t i = 1; i < list.size(); ++i) {
      if (!(list[i - 1].sample.t < list[i].sample.t)) {
        throw DataError(paths.csv.string() + ", row " + std::to_string(list[i].line) + " (ant " +
                        std::to_string(id) + "): duplicate timestamp " + format_double(list[i].sample.t) +
                        " (also on row " + std::to_string(list[i - 1].line) + ")");
      }
    }
    Series series;
    series.reserve(list.size());
    for (const Row& r : list) series.push_back(r.sample);
    ants.emplace(id, std::move(series));
  }
  try {
    return ColonyRecording(std::move(ants), meta);
  } catch (const DataError& e) {
    throw DataError(paths.csv.string() + ": " + e.what());
  }
}

void write_recording(const ColonyRecording& recording, const std::filesystem::path& base) {
  const BundlePaths paths = bundle_paths(base);
  if (paths.csv.has_parent_path()) {
    std::filesystem::create_directories(paths.csv.parent_path());
  }

  std::string out;
  out.reserve(recording.sample_count() * 40);
  out += kCsvHeader;
  out += '\n';
  for (const auto& [id, series] : recording.ants()) {
    const std::string prefix = std::to_string(id) + ",";
    for (const Sample& s : series) {
      out += prefix;
      out += format_double(s.t);
      out += ',';
      out += format_double(s.x);
      out += ',';
      out += format_double(s.y);
      out += '\n';
    }
  }
  {
    std::ofstream f(paths.csv, std::ios::binary);
    if (!f) throw DataError("cannot write " + paths.csv.string());
    f << out;
  }

  const RecordingMeta& m = recording.meta();
  nlohmann::ordered_json j;
  j["arena_diameter_mm"] = m.arena_diameter_mm;
  j["resolution_px"] = m.resolution_px;
  j["sample_rate_hz"] = m.sample_rate_hz;
  std::ofstream f(paths.meta, std::ios::binary);
  if (!f) throw DataError("cannot write " + paths.meta.string());
  f << j.dump(2) << '\n';
}

Sample interpolate(const Series& series, double t) {
  if (t <= series.front().t) return {t, series.front().x, series.front().y};
  if (t >= series.back().t) return {t, series.back().x, series.back().y};
  auto hi = std::upper_bound(series.begin(), series.end(), t,
                             [](double v, const Sample& s) { return v < s.t; });
  auto lo = hi - 1;
  const double w = (t - lo->t) / (hi->t - lo->t);
  return {t, lo->x + (hi->x - lo->x) * w, lo->y + (hi->y - lo->y) * w};
}

ColonyRecording resample(const ColonyRecording& recording, double dt) {
  if (!(std::isfinite(dt) && dt > 0.0)) {
    throw ConfigError("resample: dt must be positive, got " + format_double(dt));
  }
  std::map<AntId, Series> out;
  for (const auto& [id, series] : recording.ants()) {
    const double t0 = series.front().t;
    const double tn = series.back().t;
    const auto last_k = static_cast<std::size_t>(std::floor((tn - t0) / dt + 1e-9));

    Series grid;
    grid.reserve(last_k + 2);
    std::size_t cursor = 0;
    for (std::size_t k = 0; k <= last_k; ++k) {
      const double t = t0 + static_cast<double>(k) * dt;
      if (t >= tn) break;
      while (cursor + 1 < series.size() && series[cursor + 1].t <= t) ++cursor;
      const Sample& a = series[cursor];
      if (a.t == t) {
        grid.push_back(a);
        continue;
      }
      const Sample& b = series[cursor + 1];
      const double w = (t - a.t) / (b.t - a.t);
      grid.push_back({t, a.x + (b.x - a.x) * w, a.y + (b.y - a.y) * w});
    }
    // The final grid point may land within rounding of the end point; the
    // original end point replaces it so the series end is preserved exactly.
    if (!grid.empty() && tn - grid.back().t <= 1e-9 * dt) grid.pop_back();
    if (grid.empty()) grid.push_back(series.front());
    grid.push_back(series.back());
    out.emplace(id, std::move(grid));
  }
  RecordingMeta meta = recording.meta();
  meta.sample_rate_hz = 1.0 / dt;
  return ColonyRecording(std::move(out), meta);
}

TargetSelection select_target(const ColonyRecording& recording, double t_lim, double d_min,
                              std::mt19937_64& rng) {
  if (!(std::isfinite(t_lim) && t_lim > 0.0)) throw ConfigError("t_lim must be positive");
  if (!(std::isfinite(d_min) && d_min >= 0.0)) throw ConfigError("d_min must be non-negative");
  const double rate = recording.meta().sample_rate_hz;
  const double steps_real = t_lim * rate;
  const auto steps = static_cast<std::size_t>(std::llround(steps_real));
  if (steps < 1 || std::abs(steps_real - static_cast<double>(steps)) > 1e-6) {
    throw ConfigError("t_lim " + format_double(t_lim) + " s is not a whole number of samples at " +
                      format_double(rate) + " Hz");
  }
  const double time_tol = 1e-6 / rate;

  auto is_window = [&](const Series& s, std::size_t i) {
    return std::abs((s[i + steps].t - s[i].t) - t_lim) <= time_tol;
  };
  auto displacement = [&](const Series& s, std::size_t i) {
    return std::hypot(s[i + steps].x - s[i].x, s[i + steps].y - s[i].y);
  };

  std::uint64_t count = 0;
  double best = 0.0;
  for (const auto& [id, s] : recording.ants()) {
    for (std::size_t i = 0; i + steps < s.size(); ++i) {
      if (!is_window(s, i)) continue;
      const double d = displacement(s, i);
      best = std::max(best, d);
      if (d >= d_min) ++count;
    }
  }
  if (count == 0) {
    throw DataError("no target window of " + format_double(t_lim) + " s moves at least " +
                    format_double(d_min) + " px (maximum displacement found: " + format_double(best) +
                    " px)");
  }

  std::uniform_int_distribution<std::uint64_t> pick(0, count - 1);
  std::uint64_t k = pick(rng);
  for (const auto& [id, s] : recording.ants()) {
    for (std::size_t i = 0; i + steps < s.size(); ++i) {
      if (!is_window(s, i) || displacement(s, i) < d_min) continue;
      if (k-- == 0) {
        TargetSelection sel;
        sel.ant_id = id;
        sel.start_time = s[i].t;
        sel.trail.assign(s.begin() + static_cast<std::ptrdiff_t>(i),
                         s.begin() + static_cast<std::ptrdiff_t>(i + steps + 1));
        return sel;
      }
    }
  }
  throw ContractViolation("select_target: candidate enumeration mismatch");
}

ColonyRecording gen_synthetic(const SyntheticParams& params, std::mt19937_64& rng) {
  params.validate();
  RecordingMeta meta{params.arena_diameter_mm, params.resolution_px, params.sample_rate_hz};
  const double c = meta.center_px();
  const double r = meta.radius_px();
  const double inner = r - std::min(1.0, 0.01 * r);
  constexpr double kPersistence = 0.8;
  // cluster_pull = 1 closes 10% of the gap to the centroid per second.
  const double pull = params.cluster_pull * 0.1 / params.sample_rate_hz;
  const auto n_samples = static_cast<std::size_t>(std::llround(params.duration_s * params.sample_rate_hz)) + 1;

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto point_in_disc = [&](double radius) {
    const double rho = radius * std::sqrt(unit(rng));
    const double ang = 2.0 * std::numbers::pi * unit(rng);
    return std::pair{c + rho * std::cos(ang), c + rho * std::sin(ang)};
  };

  const auto [cx, cy] = point_in_disc(0.4 * r);
  std::map<AntId, Series> ants;
  for (int a = 0; a < params.n_ants; ++a) {
    auto [x, y] = point_in_disc(0.85 * r);
    double vx = 0.0;
    double vy = 0.0;
    Series series;
    series.reserve(n_samples);
    for (std::size_t k = 0; k < n_samples; ++k) {
      series.push_back({static_cast<double>(k) / params.sample_rate_hz, x, y});
      vx = kPersistence * vx + params.noise_px * gauss(rng);
      vy = kPersistence * vy + params.noise_px * gauss(rng);
      x += vx + pull * (cx - x);
      y += vy + pull * (cy - y);
      const double d = std::hypot(x - c, y - c);
      if (d > inner) {
        x = c + (x - c) * inner / d;
        y = c + (y - c) * inner / d;
        vx = 0.0;
        vy = 0.0;
      }
    }
    ants.emplace(static_cast<AntId>(a), std::move(series));
  }
  return ColonyRecording(std::move(ants), meta);
}

}  // namespace antdyn
