#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <random>
#include <vector>

namespace antdyn {

using AntId = std::uint64_t;

/// Arena metadata carried alongside every recording.
struct RecordingMeta {
  double arena_diameter_mm = 100.0;
  int resolution_px = 1280;
  double sample_rate_hz = 10.0;

  /// Throws DataError when any field is out of range.
  void validate() const;

  double center_px() const { return resolution_px / 2.0; }
  double radius_px() const { return resolution_px / 2.0; }
  bool contains(double x, double y) const;

  friend bool operator==(const RecordingMeta&, const RecordingMeta&) = default;
};

struct Sample {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Sample&, const Sample&) = default;
};

using Series = std::vector<Sample>;

/// Time-indexed positions of every tracked ant. Immutable once built; the
/// constructor enforces all invariants (strictly increasing time, at least
/// two samples per ant, every position inside the arena disc).
class ColonyRecording {
 public:
  ColonyRecording(std::map<AntId, Series> ants, RecordingMeta meta);

  const std::map<AntId, Series>& ants() const { return ants_; }
  const RecordingMeta& meta() const { return meta_; }
  const Series& series(AntId id) const;
  std::size_t sample_count() const;

  friend bool operator==(const ColonyRecording&, const ColonyRecording&) = default;

 private:
  std::map<AntId, Series> ants_;
  RecordingMeta meta_;
};

/// A target ant's trail window, sampled at the environment time step.
struct TargetSelection {
  AntId ant_id = 0;
  double start_time = 0.0;
  Series trail;  // steps + 1 samples

  friend bool operator==(const TargetSelection&, const TargetSelection&) = default;
};

struct SyntheticParams {
  int n_ants = 20;
  double duration_s = 300.0;
  double sample_rate_hz = 10.0;
  double noise_px = 1.5;     // per-sample std of the velocity kick
  double cluster_pull = 0.3;  // 0 = free walk, 1 = strongest pull to the cluster centroid
  double arena_diameter_mm = 100.0;
  int resolution_px = 1280;

  void validate() const;
};

/// Bundle paths: `<base>.csv` and `<base>.meta.json`. A trailing `.csv` on
/// `base` is stripped.
struct BundlePaths {
  std::filesystem::path csv;
  std::filesystem::path meta;
};
BundlePaths bundle_paths(const std::filesystem::path& base);

/// Loads and validates a recording bundle. Throws DataError naming the
/// offending row or ant.
ColonyRecording load_recording(const std::filesystem::path& base);

/// Writes `<base>.csv` and `<base>.meta.json`. Doubles are written in their
/// shortest round-trip form.
void write_recording(const ColonyRecording& recording, const std::filesystem::path& base);

/// Re-grids every series to uniform spacing `dt` by linear interpolation.
/// Each series keeps its first and last sample; the result's sample rate is 1/dt.
ColonyRecording resample(const ColonyRecording& recording, double dt);

/// Picks uniformly among all (ant, start) windows of `t_lim` seconds whose
/// net displacement is at least `d_min`. The recording must already be on a
/// uniform grid matching its metadata sample rate (see resample).
TargetSelection select_target(const ColonyRecording& recording, double t_lim, double d_min,
                              std::mt19937_64& rng);

/// Correlated random walks drifting toward a shared cluster centroid.
ColonyRecording gen_synthetic(const SyntheticParams& params, std::mt19937_64& rng);

/// Linear interpolation of a series at time t, clamped to its end points.
Sample interpolate(const Series& series, double t);

}  // namespace antdyn
