#include "antdyn/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>

#include <CLI11.hpp>
#include <json.hpp>

#include "antdyn/env.hpp"
#include "antdyn/errors.hpp"
#include "antdyn/evolution.hpp"
#include "antdyn/recording.hpp"
#include "antdyn/render.hpp"

namespace antdyn::cli {

namespace {

namespace fs = std::filesystem;

struct CommonOptions {
  std::string data;
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string output;
};

struct EpisodeOptions {
  std::string policy = "random";
  std::string render_dir;
  int frame_stride = 1;
  int image_size = 512;
};

struct Summary {
  double episode_reward = 0.0;
  int steps = 0;
  AntId target_ant_id = 0;
  double start_time = 0.0;
};

EnvConfig resolve_config(const CommonOptions& o, const ColonyRecording& rec) {
  if (o.config.empty()) {
    EnvConfig c;
    c.meta = rec.meta();
    c.validate();
    return c;
  }
  return load_env_config(o.config, rec.meta());
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot write " + path.string());
  f << text;
}

std::string summary_json(const Summary& s) {
  nlohmann::ordered_json j;
  j["episode_reward"] = s.episode_reward;
  j["steps"] = s.steps;
  j["target_ant_id"] = s.target_ant_id;
  j["start_time"] = s.start_time;
  return j.dump(2) + "\n";
}

Summary run_episode_cli(const CommonOptions& common, const EpisodeOptions& opts, std::ostream& out) {
  const ColonyRecording rec = load_recording(common.data);
  const EnvConfig config = resolve_config(common, rec);
  Environment env(config, rec);
  const std::uint64_t seed = common.seed.value_or(config.seed);

  enum class Kind { Random, Replay, Genome } kind;
  std::optional<Policy> network;
  if (opts.policy == "random") {
    kind = Kind::Random;
  } else if (opts.policy == "replay") {
    kind = Kind::Replay;
  } else if (opts.policy.rfind("genome:", 0) == 0) {
    kind = Kind::Genome;
    network.emplace(load_genome(opts.policy.substr(7)));
  } else {
    throw ConfigError("unknown policy '" + opts.policy + "' (expected random, replay or genome:<path>)");
  }

  std::optional<RenderSpec> render;
  if (!opts.render_dir.empty()) {
    render = RenderSpec{opts.render_dir, opts.frame_stride, opts.image_size};
    render->validate();
    fs::create_directories(render->output_dir);
  }
  int frame = 0;
  auto emit_frame = [&]() {
    if (!render || !frame_due(env.state().step_index, env.horizon(), render->frame_stride)) return;
    const auto ants = env.visible_ants();
    const EpisodeState& st = env.state();
    FrameScene scene{rec.meta(),    st.agent,       st.target_trail.back(), ants,
                     st.agent_trail, st.target_trail, config.vision.radius};
    render_frame(scene, render->image_size).write_png(render->output_dir / frame_filename(frame++));
  };

  std::mt19937_64 action_rng(seed ^ 0x5851f42d4c957f2dULL);
  std::uniform_int_distribution<int> pick(0, static_cast<int>(kActionCount) - 1);

  Observation obs = env.reset(seed);
  emit_frame();
  while (!env.truncated()) {
    StepResult r;
    switch (kind) {
      case Kind::Random:
        r = env.step(static_cast<Action>(pick(action_rng)));
        break;
      case Kind::Replay:
        r = env.teleport_step();
        break;
      case Kind::Genome:
        r = env.step(network->act(obs));
        break;
    }
    obs = r.observation;
    emit_frame();
  }

  const EpisodeState& st = env.state();
  if (render) {
    write_text(render->output_dir / "trails.svg", trails_svg(rec.meta(), st.agent_trail, st.target_trail));
    out << "wrote " << frame << " frames and trails.svg to " << render->output_dir.string() << "\n";
  }
  Summary s{st.cumulative_reward, st.step_index, st.target.ant_id, st.target.start_time};
  if (kind == Kind::Replay && config.reward.mode == RewardMode::Monotone && std::abs(s.episode_reward) > 1e-9) {
    throw ContractViolation("replay oracle: expected zero episode reward, got " + std::to_string(s.episode_reward));
  }
  return s;
}

void add_common(CLI::App* cmd, CommonOptions& o, bool need_output) {
  cmd->add_option("--data", o.data, "Recording bundle (<base>.csv + <base>.meta.json)")->required();
  cmd->add_option("--config", o.config, "EnvConfig JSON file");
  cmd->add_option("--seed", o.seed, "Episode / master seed");
  auto* opt = cmd->add_option("-o,--output", o.output, "Output path");
  if (need_output) opt->required();
}

void add_episode(CLI::App* cmd, EpisodeOptions& e, bool with_policy) {
  if (with_policy) cmd->add_option("--policy", e.policy, "random | replay | genome:<path>");
  cmd->add_option("--frame-stride", e.frame_stride, "Steps per emitted frame")->check(CLI::PositiveNumber);
  cmd->add_option("--image-size", e.image_size, "PNG side length")->check(CLI::Range(16, 8192));
}

}  // namespace

int execute(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ant trail replication environment tools", "antdyn"};
  app.require_subcommand(1);

  // gen-synth
  SyntheticParams synth;
  std::uint64_t synth_seed = 0;
  std::string synth_out;
  auto* gen = app.add_subcommand("gen-synth", "Generate a synthetic colony recording bundle");
  gen->add_option("--ants", synth.n_ants, "Number of ants");
  gen->add_option("--seconds", synth.duration_s, "Duration in seconds");
  gen->add_option("--rate", synth.sample_rate_hz, "Sample rate in Hz");
  gen->add_option("--noise", synth.noise_px, "Velocity noise, px per sample");
  gen->add_option("--pull", synth.cluster_pull, "Cluster pull in [0, 1]");
  gen->add_option("--resolution", synth.resolution_px, "Arena image side in px");
  gen->add_option("--diameter", synth.arena_diameter_mm, "Arena diameter in mm");
  gen->add_option("--seed", synth_seed, "RNG seed");
  gen->add_option("-o,--output", synth_out, "Bundle base path")->required();

  // validate
  std::string validate_data;
  auto* val = app.add_subcommand("validate", "Load and validate a recording bundle");
  val->add_option("--data", validate_data, "Recording bundle")->required();

  // simulate / replay-check / render
  CommonOptions sim_common, replay_common, render_common;
  EpisodeOptions sim_opts, replay_opts, render_opts;
  auto* sim = app.add_subcommand("simulate", "Run one episode and report its reward");
  add_common(sim, sim_common, false);
  add_episode(sim, sim_opts, true);
  sim->add_option("--render", sim_opts.render_dir, "Directory for PNG frames and trails.svg");

  auto* replay = app.add_subcommand("replay-check", "Run the replay oracle (simulate --policy replay)");
  add_common(replay, replay_common, false);
  add_episode(replay, replay_opts, false);
  replay->add_option("--render", replay_opts.render_dir, "Directory for PNG frames and trails.svg");

  auto* rend = app.add_subcommand("render", "Run one episode and write PNG frames plus trails.svg");
  add_common(rend, render_common, true);
  add_episode(rend, render_opts, true);

  // evolve
  CommonOptions evo_common;
  EvolutionConfig evo;
  auto* ev = app.add_subcommand("evolve", "Evolve a policy network; writes best_genome.json and history.csv");
  add_common(ev, evo_common, true);
  ev->add_option("--pop", evo.population_size, "Population size");
  ev->add_option("--generations", evo.generations, "Generations");
  ev->add_option("--elitism", evo.elitism_count, "Elite genomes copied unchanged");
  ev->add_option("--tournament", evo.tournament_size, "Tournament size");
  ev->add_option("--episodes", evo.episodes_per_eval, "Episodes per fitness evaluation");
  ev->add_option("--threads", evo.threads, "Parallel fitness evaluations");
  ev->add_flag("--fixed-seeds", evo.fixed_eval_seeds, "Reuse one evaluation seed list for every generation");
  ev->add_option("--perturb-rate", evo.rates.perturb_weight, "Per-edge weight perturbation probability");
  ev->add_option("--add-edge-rate", evo.rates.add_edge, "Add-edge probability");
  ev->add_option("--add-node-rate", evo.rates.add_node, "Add-node probability");
  ev->add_option("--activation-rate", evo.rates.change_activation, "Change-activation probability");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kConfigError;
  }

  try {
    if (gen->parsed()) {
      std::mt19937_64 rng(synth_seed);
      const ColonyRecording rec = gen_synthetic(synth, rng);
      write_recording(rec, synth_out);
      const BundlePaths p = bundle_paths(synth_out);
      out << "wrote " << p.csv.string() << " and " << p.meta.string() << " (" << rec.ants().size() << " ants, "
          << rec.sample_count() << " samples)\n";
    } else if (val->parsed()) {
      const ColonyRecording rec = load_recording(validate_data);
      double t0 = rec.ants().begin()->second.front().t;
      double t1 = t0;
      for (const auto& [id, s] : rec.ants()) {
        t0 = std::min(t0, s.front().t);
        t1 = std::max(t1, s.back().t);
      }
      out << "ok: " << rec.ants().size() << " ants, " << rec.sample_count() << " samples, " << t0 << " s to " << t1
          << " s\n";
    } else if (sim->parsed() || replay->parsed() || rend->parsed()) {
      CommonOptions& common = sim->parsed() ? sim_common : replay->parsed() ? replay_common : render_common;
      EpisodeOptions& opts = sim->parsed() ? sim_opts : replay->parsed() ? replay_opts : render_opts;
      if (replay->parsed()) opts.policy = "replay";
      if (rend->parsed()) opts.render_dir = common.output;
      const Summary s = run_episode_cli(common, opts, out);
      const std::string json = summary_json(s);
      if (!common.output.empty() && !rend->parsed()) write_text(common.output, json);
      if (rend->parsed()) write_text(fs::path(common.output) / "summary.json", json);
      out << json;
    } else if (ev->parsed()) {
      const ColonyRecording rec = load_recording(evo_common.data);
      const EnvConfig config = resolve_config(evo_common, rec);
      evo.seed = evo_common.seed.value_or(config.seed);
      const EvolutionResult res = evolve(evo, config, rec);
      const fs::path dir = evo_common.output;
      save_genome(res.best, dir / "best_genome.json");
      write_history_csv(res.history, dir / "history.csv");
      for (const GenerationStats& g : res.history) {
        out << "generation " << g.generation << ": best " << g.best << " mean " << g.mean << " worst " << g.worst
            << "\n";
      }
      out << "best fitness " << res.best_fitness << "; wrote " << (dir / "best_genome.json").string() << "\n";
    }
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return kDataError;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const fs::filesystem_error& e) {
    err << "data error: " << e.what() << "\n";
    return kDataError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternalError;
  }
  return kOk;
}

}  // namespace antdyn::cli
