#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "antdyn/env.hpp"
#include "antdyn/errors.hpp"
#include "antdyn/evolution.hpp"
#include "antdyn/recording.hpp"

namespace py = pybind11;
using namespace antdyn;

namespace {

Point to_point(const std::pair<double, double>& p) { return {p.first, p.second}; }

std::vector<Point> to_points(const std::vector<std::pair<double, double>>& pts) {
  std::vector<Point> out;
  out.reserve(pts.size());
  for (const auto& p : pts) out.push_back(to_point(p));
  return out;
}

py::list from_points(const std::vector<Point>& pts) {
  py::list out;
  for (const Point& p : pts) out.append(py::make_tuple(p.x, p.y));
  return out;
}

RewardConfig reward_config(const std::string& mode, double kappa) {
  RewardConfig c{reward_mode_from_string(mode), kappa};
  c.validate();
  return c;
}

Action checked_action(long long index) {
  const auto a = action_from_index(index);
  if (!a) throw py::value_error("action " + std::to_string(index) + " outside valid range 0..3");
  return *a;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Ant trail replication environment core";

  py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ContractViolation>(m, "ContractViolation", PyExc_RuntimeError);

  m.attr("OBS_SIZE") = kObservationSize;
  m.attr("ACTIONS") = py::make_tuple("forward", "backward", "turn-left", "turn-right");

  m.def(
      "trail_area_step",
      [](std::pair<double, double> pa_prev, std::pair<double, double> pa_cur, std::pair<double, double> pt_prev,
         std::pair<double, double> pt_cur) {
        return trail_area_step(to_point(pa_prev), to_point(pa_cur), to_point(pt_prev), to_point(pt_cur));
      },
      py::arg("pa_prev"), py::arg("pa_cur"), py::arg("pt_prev"), py::arg("pt_cur"));
  m.def(
      "step_penalty", [](double area, const std::string& mode, double kappa) {
        return step_penalty(area, reward_config(mode, kappa));
      },
      py::arg("area"), py::arg("mode") = "monotone", py::arg("kappa") = 0.01);
  m.def(
      "episode_reward",
      [](const std::vector<std::pair<double, double>>& agent, const std::vector<std::pair<double, double>>& target,
         const std::string& mode, double kappa) {
        return episode_reward(to_points(agent), to_points(target), reward_config(mode, kappa));
      },
      py::arg("agent_trail"), py::arg("target_trail"), py::arg("mode") = "monotone", py::arg("kappa") = 0.01);
  m.def(
      "segment_index", [](double bearing) { return std::string(to_string(segment_index(bearing))); },
      py::arg("relative_bearing"));
  m.def(
      "px_of_mm",
      [](double mm, double diameter_mm, int resolution_px) {
        return px_of_mm(mm, RecordingMeta{diameter_mm, resolution_px, 10.0});
      },
      py::arg("value_mm"), py::arg("arena_diameter_mm") = 100.0, py::arg("resolution_px") = 1280);

  m.def(
      "gen_synthetic",
      [](const std::string& path, int n_ants, double duration_s, double sample_rate_hz, double noise_px,
         double cluster_pull, std::uint64_t seed) {
        SyntheticParams p;
        p.n_ants = n_ants;
        p.duration_s = duration_s;
        p.sample_rate_hz = sample_rate_hz;
        p.noise_px = noise_px;
        p.cluster_pull = cluster_pull;
        std::mt19937_64 rng(seed);
        write_recording(gen_synthetic(p, rng), path);
      },
      "Write a synthetic recording bundle to <path>.csv / <path>.meta.json", py::arg("path"),
      py::arg("n_ants") = 20, py::arg("duration_s") = 300.0, py::arg("sample_rate_hz") = 10.0,
      py::arg("noise_px") = 1.5, py::arg("cluster_pull") = 0.3, py::arg("seed") = 0);
  m.def(
      "load_recording",
      [](const std::string& path) {
        const ColonyRecording rec = load_recording(path);
        py::dict ants;
        for (const auto& [id, series] : rec.ants()) {
          py::list rows;
          for (const Sample& s : series) rows.append(py::make_tuple(s.t, s.x, s.y));
          ants[py::int_(id)] = rows;
        }
        return ants;
      },
      "Validated recording as {ant_id: [(t, x, y), ...]}", py::arg("path"));

  py::class_<Environment>(m, "Environment")
      .def(py::init([](const std::string& config_json) { return environment_from_json(config_json); }),
           py::arg("config_json"))
      .def(
          "reset",
          [](Environment& env, std::optional<std::uint64_t> seed) {
            const Observation o = seed ? env.reset(*seed) : env.reset();
            return py::make_tuple(std::vector<double>(o.begin(), o.end()), env.last_info());
          },
          py::arg("seed") = py::none())
      .def(
          "step",
          [](Environment& env, long long action) {
            const StepResult r = env.step(checked_action(action));
            return py::make_tuple(std::vector<double>(r.observation.begin(), r.observation.end()), r.reward,
                                  r.terminated, r.truncated, r.info);
          },
          py::arg("action"))
      .def("teleport_step",
           [](Environment& env) {
             const StepResult r = env.teleport_step();
             return py::make_tuple(std::vector<double>(r.observation.begin(), r.observation.end()), r.reward,
                                   r.terminated, r.truncated, r.info);
           })
      .def_property_readonly("horizon", &Environment::horizon)
      .def_property_readonly("truncated", &Environment::truncated)
      .def_property_readonly("cumulative_reward", [](const Environment& e) { return e.state().cumulative_reward; })
      .def_property_readonly("step_index", [](const Environment& e) { return e.state().step_index; })
      .def_property_readonly("target_ant_id", [](const Environment& e) { return e.state().target.ant_id; })
      .def_property_readonly("start_time", [](const Environment& e) { return e.state().target.start_time; })
      .def_property_readonly("agent_trail", [](const Environment& e) { return from_points(e.state().agent_trail); })
      .def_property_readonly("target_trail",
                             [](const Environment& e) { return from_points(e.state().target_trail); });

  m.def(
      "forward_pass",
      [](const std::string& genome_json, const std::vector<double>& observation) {
        if (observation.size() != kObservationSize) {
          throw py::value_error("observation must have " + std::to_string(kObservationSize) + " entries");
        }
        Observation o{};
        std::copy(observation.begin(), observation.end(), o.begin());
        const ActionScores s = forward_pass(genome_from_json(genome_json), o);
        return std::vector<double>(s.begin(), s.end());
      },
      py::arg("genome_json"), py::arg("observation"));
  m.def("minimal_genome", [] { return genome_to_json(Genome::minimal()); });
  m.def(
      "evolve",
      [](const std::string& config_json, const std::string& data, int population_size, int generations,
         std::uint64_t seed, int threads) {
        const ColonyRecording rec = load_recording(data);
        const EnvConfig env_config = parse_env_config(config_json, rec.meta());
        EvolutionConfig evo;
        evo.population_size = population_size;
        evo.generations = generations;
        evo.seed = seed;
        evo.threads = threads;
        EvolutionResult res;
        {
          py::gil_scoped_release release;
          res = evolve(evo, env_config, rec);
        }
        py::list history;
        for (const GenerationStats& g : res.history) {
          history.append(py::make_tuple(g.generation, g.best, g.mean, g.worst));
        }
        return py::make_tuple(genome_to_json(res.best), res.best_fitness, history);
      },
      "Returns (best genome JSON, best fitness, [(generation, best, mean, worst), ...])", py::arg("config_json"),
      py::arg("data"), py::arg("population_size") = 32, py::arg("generations") = 50, py::arg("seed") = 0,
      py::arg("threads") = 1);
}
