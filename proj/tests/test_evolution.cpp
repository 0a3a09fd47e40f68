#include <doctest.h>

#include <cmath>
#include <random>

#include "antdyn/errors.hpp"
#include "antdyn/evolution.hpp"
#include "oracles.hpp"

using namespace antdyn;

namespace {

Observation random_observation(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Observation o{};
  for (double& v : o) v = u(rng);
  return o;
}

const ColonyRecording& line() {
  static const ColonyRecording rec = oracle::straight_line_recording(200, 30, 10, 2);
  return rec;
}

EvolutionConfig small_config(std::uint64_t seed) {
  EvolutionConfig c;
  c.population_size = 8;
  c.generations = 4;
  c.episodes_per_eval = 1;
  c.seed = seed;
  return c;
}

}  // namespace

TEST_CASE("minimal genome") {
  const Genome g = Genome::minimal();
  CHECK(g.nodes.size() == 17);
  CHECK(g.edges.empty());
  CHECK(g.is_valid());
  CHECK(g.next_id() == 17);
  for (NodeId i = 0; i < 13; ++i) CHECK(g.find(i)->role == NodeRole::Input);
  for (NodeId i = 13; i < 17; ++i) CHECK(g.find(i)->role == NodeRole::Output);
  std::mt19937_64 rng(0);
  const ActionScores s = forward_pass(g, random_observation(rng));
  for (double v : s) CHECK(v == 0.0);
  CHECK(argmax_action(s) == Action::Forward);
}

TEST_CASE("single identity path") {
  Genome g = Genome::minimal();
  g.edges.push_back({3, 15, 2.0, true});  // theta -> turn-left
  Observation o{};
  o[3] = 0.25;
  const ActionScores s = forward_pass(g, o);
  CHECK(s[2] == 0.5);
  CHECK(argmax_action(s) == Action::TurnLeft);
  g.edges[0].enabled = false;
  CHECK(forward_pass(g, o)[2] == 0.0);
}

TEST_CASE("activations") {
  CHECK(activate(Activation::Identity, -2.0) == -2.0);
  CHECK(activate(Activation::Relu, -2.0) == 0.0);
  CHECK(activate(Activation::Relu, 2.0) == 2.0);
  CHECK(activate(Activation::Sigmoid, 0.0) == 0.5);
  CHECK(activate(Activation::Tanh, 0.5) == std::tanh(0.5));
  CHECK(activate(Activation::Sin, 0.5) == std::sin(0.5));
  CHECK(activate(Activation::Gauss, 0.0) == 1.0);
  CHECK(activate(Activation::Gauss, 1.0) == doctest::Approx(std::exp(-0.5)));
}

TEST_CASE("argmax ties and shift invariance") {
  CHECK(argmax_action({1, 1, 1, 1}) == Action::Forward);
  CHECK(argmax_action({0, 2, 2, 1}) == Action::Backward);
  CHECK(argmax_action({0, 1, 2, 2}) == Action::TurnLeft);
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  std::uniform_int_distribution<int> small(-3, 3);
  for (int i = 0; i < 5000; ++i) {
    // Integer-valued scores keep ties exact under the shift.
    ActionScores s{};
    for (double& v : s) v = small(rng);
    const double c = std::round(u(rng));
    ActionScores shifted = s;
    for (double& v : shifted) v += c;
    CHECK(argmax_action(s) == argmax_action(shifted));
  }
}

TEST_CASE("mutation chains stay valid and evaluate like the recursive oracle") {
  std::mt19937_64 rng(1234);
  MutationRates heavy;
  heavy.add_edge = 0.5;
  heavy.add_node = 0.3;
  heavy.change_activation = 0.3;
  int chains = 0;
  for (int c = 0; c < 100; ++c) {
    Genome g = c % 2 ? Genome::minimal() : Genome::fully_connected(rng);
    for (int step = 0; step < 100; ++step) {
      g = mutate(g, heavy, rng);
      REQUIRE(g.is_valid());
    }
    for (int k = 0; k < 5; ++k) {
      const Observation o = random_observation(rng);
      const ActionScores fast = forward_pass(g, o);
      const ActionScores ref = oracle::recursive_forward(g, o);
      for (std::size_t j = 0; j < kOutputCount; ++j) CHECK(fast[j] == doctest::Approx(ref[j]).epsilon(1e-12));
      CHECK(forward_pass(g, o) == fast);
    }
    ++chains;
  }
  CHECK(chains == 100);
}

TEST_CASE("zero rates leave a genome unchanged") {
  std::mt19937_64 rng(9);
  const Genome g = Genome::fully_connected(rng);
  MutationRates none{0.0, 0.0, 0.0, 0.0, 0.5};
  CHECK(mutate(g, none, rng) == g);
}

TEST_CASE("add-node splits one edge") {
  Genome g = Genome::minimal();
  g.edges.push_back({0, 13, 0.7, true});
  MutationRates only_node{0.0, 0.0, 1.0, 0.0, 0.5};
  std::mt19937_64 rng(2);
  const Genome m = mutate(g, only_node, rng);
  REQUIRE(m.nodes.size() == 18);
  REQUIRE(m.edges.size() == 3);
  CHECK_FALSE(m.edges[0].enabled);
  const NodeId h = m.nodes.back().id;
  CHECK(m.nodes.back().role == NodeRole::Hidden);
  CHECK(m.edges[1] == Edge{0, h, 1.0, true});
  CHECK(m.edges[2] == Edge{h, 13, 0.7, true});
}

TEST_CASE("validate rejects broken genomes") {
  Genome g = Genome::minimal();
  g.edges.push_back({13, 14, 1.0, true});
  CHECK_THROWS_AS(g.validate(), DataError);  // from an output
  g = Genome::minimal();
  g.edges.push_back({0, 1, 1.0, true});
  CHECK_THROWS_AS(g.validate(), DataError);  // into an input
  g = Genome::minimal();
  g.nodes.push_back({20, NodeRole::Hidden, Activation::Tanh});
  g.nodes.push_back({21, NodeRole::Hidden, Activation::Tanh});
  g.edges = {{20, 21, 1.0, true}, {21, 20, 1.0, true}};
  CHECK_THROWS_AS(g.validate(), DataError);  // cycle
  g.edges[1].enabled = false;
  CHECK_NOTHROW(g.validate());
  g.edges.push_back({20, 21, 2.0, true});
  CHECK_THROWS_AS(g.validate(), DataError);  // duplicate pair
  g = Genome::minimal();
  g.edges.push_back({0, 13, std::nan(""), true});
  CHECK_THROWS_AS(g.validate(), DataError);
  g = Genome::minimal();
  g.nodes.pop_back();
  CHECK_THROWS_AS(g.validate(), DataError);
  g = Genome::minimal();
  g.edges.push_back({0, 99, 1.0, true});
  CHECK_THROWS_AS(g.validate(), DataError);
  g = Genome::minimal();
  g.nodes.push_back({5, NodeRole::Hidden, Activation::Tanh});
  CHECK_THROWS_AS(g.validate(), DataError);
}

TEST_CASE("genome JSON") {
  std::mt19937_64 rng(5);
  MutationRates heavy;
  heavy.add_node = 0.5;
  Genome g = Genome::fully_connected(rng);
  for (int i = 0; i < 30; ++i) g = mutate(g, heavy, rng);
  const std::string text = genome_to_json(g);
  CHECK(text.find("\"format_version\": 1") != std::string::npos);
  CHECK(genome_from_json(text) == g);
  const auto dir = oracle::scratch_dir("genome_json");
  save_genome(g, dir / "g.json");
  CHECK(load_genome(dir / "g.json") == g);

  CHECK_THROWS_AS(genome_from_json("{"), DataError);
  CHECK_THROWS_AS(genome_from_json(R"({"format_version": 2, "nodes": [], "edges": []})"), DataError);
  CHECK_THROWS_AS(genome_from_json(R"({"format_version": 1, "nodes": [], "edges": []})"), DataError);
  std::string bad = genome_to_json(Genome::minimal());
  bad.replace(bad.find("identity"), 8, "softplus");
  CHECK_THROWS_AS(genome_from_json(bad), DataError);
  CHECK_THROWS_AS(load_genome(dir / "missing.json"), DataError);
}

TEST_CASE("fitness is a mean episode reward") {
  EnvConfig env_cfg;
  Environment env(env_cfg, line());
  const Policy still(Genome::minimal());  // always forward
  const std::vector<std::uint64_t> seeds{1, 2, 3};
  const double f = evaluate_fitness(still, env, seeds);
  const double direct = run_episode(env, 1, [](const Observation&) { return Action::Forward; });
  CHECK(f == direct);  // the only window is the same for every seed
  CHECK(f <= 0.0);
  CHECK(f >= -300.0);
  CHECK(evaluate_fitness(Genome::minimal(), env_cfg, line(), seeds) == f);
  CHECK_THROWS_AS(evaluate_fitness(still, env, std::vector<std::uint64_t>{}), ContractViolation);
}

TEST_CASE("evolution is deterministic and independent of thread count") {
  const EnvConfig env_cfg;
  EvolutionConfig c = small_config(11);
  const EvolutionResult a = evolve(c, env_cfg, line());
  const EvolutionResult b = evolve(c, env_cfg, line());
  c.threads = 3;
  const EvolutionResult p = evolve(c, env_cfg, line());
  CHECK(a.history == b.history);
  CHECK(a.history == p.history);
  CHECK(a.best == p.best);
  CHECK(a.best_fitness == p.best_fitness);
  CHECK(a.history.size() == 4);
  for (const GenerationStats& s : a.history) {
    CHECK(s.best >= s.mean);
    CHECK(s.mean >= s.worst);
    CHECK(s.best <= 0.0);
    CHECK(s.worst >= -300.0);
  }
}

TEST_CASE("fixed evaluation seeds with elitism never lose the best") {
  const EnvConfig env_cfg;
  EvolutionConfig c = small_config(21);
  c.generations = 8;
  c.fixed_eval_seeds = true;
  const EvolutionResult r = evolve(c, env_cfg, line());
  for (std::size_t i = 1; i < r.history.size(); ++i) CHECK(r.history[i].best >= r.history[i - 1].best);
  CHECK(r.best_fitness == r.history.back().best);
  CHECK(evaluate_fitness(r.best, env_cfg, line(), std::vector<std::uint64_t>{1}) == r.best_fitness);
}

TEST_CASE("pure elitism is a fixed point") {
  const EnvConfig env_cfg;
  EvolutionConfig c = small_config(4);
  c.population_size = 4;
  c.elitism_count = 4;
  c.fixed_eval_seeds = true;
  std::mt19937_64 rng(8);
  const std::vector<Genome> init{Genome::fully_connected(rng), Genome::fully_connected(rng)};
  const EvolutionResult r = evolve(c, env_cfg, line(), init);
  for (const GenerationStats& s : r.history) CHECK(s == GenerationStats{s.generation, r.history[0].best, r.history[0].mean, r.history[0].worst});
  CHECK((r.best == init[0] || r.best == init[1]));
}

TEST_CASE("config validation") {
  EvolutionConfig c;
  c.elitism_count = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.population_size = 1;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.rates.add_edge = 1.5;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.threads = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("history CSV") {
  const std::vector<GenerationStats> h{{0, -10.5, -20.25, -30.0}, {1, -9.0, -15.0, -29.0}};
  const auto dir = oracle::scratch_dir("history");
  write_history_csv(h, dir / "history.csv");
  CHECK(oracle::read_file(dir / "history.csv") == "generation,best,mean,worst\n0,-10.5,-20.25,-30\n1,-9,-15,-29\n");
}
