#include "antdyn/evolution.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "antdyn/errors.hpp"

namespace antdyn {

namespace {

constexpr int kGenomeFormatVersion = 1;

std::string id_str(NodeId id) { return std::to_string(id); }

// Nodes reachable from `from` over every edge, enabled or not.
std::set<NodeId> descendants(const Genome& g, NodeId from) {
  std::multimap<NodeId, NodeId> out;
  for (const Edge& e : g.edges) out.emplace(e.src, e.dst);
  std::set<NodeId> seen;
  std::vector<NodeId> stack{from};
  while (!stack.empty()) {
    const NodeId n = stack.back();
    stack.pop_back();
    auto [lo, hi] = out.equal_range(n);
    for (auto it = lo; it != hi; ++it) {
      if (seen.insert(it->second).second) stack.push_back(it->second);
    }
  }
  return seen;
}

template <typename T>
const T& pick(const std::vector<T>& items, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> d(0, items.size() - 1);
  return items[d(rng)];
}

}  // namespace

std::string_view to_string(NodeRole r) {
  switch (r) {
    case NodeRole::Input:
      return "input";
    case NodeRole::Hidden:
      return "hidden";
    case NodeRole::Output:
      return "output";
  }
  return "?";
}

std::string_view to_string(Activation a) {
  switch (a) {
    case Activation::Identity:
      return "identity";
    case Activation::Tanh:
      return "tanh";
    case Activation::Sigmoid:
      return "sigmoid";
    case Activation::Relu:
      return "relu";
    case Activation::Sin:
      return "sin";
    case Activation::Gauss:
      return "gauss";
  }
  return "?";
}

double activate(Activation a, double x) {
  switch (a) {
    case Activation::Identity:
      return x;
    case Activation::Tanh:
      return std::tanh(x);
    case Activation::Sigmoid:
      return 1.0 / (1.0 + std::exp(-x));
    case Activation::Relu:
      return x > 0.0 ? x : 0.0;
    case Activation::Sin:
      return std::sin(x);
    case Activation::Gauss:
      return std::exp(-0.5 * x * x);
  }
  return x;
}

// ---------------------------------------------------------------- Genome

Genome Genome::minimal() {
  Genome g;
  for (NodeId i = 0; i < kInputCount; ++i) g.nodes.push_back({i, NodeRole::Input, Activation::Identity});
  for (NodeId i = 0; i < kOutputCount; ++i) {
    g.nodes.push_back({static_cast<NodeId>(kInputCount) + i, NodeRole::Output, Activation::Identity});
  }
  return g;
}

Genome Genome::fully_connected(std::mt19937_64& rng, double weight_sigma) {
  Genome g = minimal();
  std::normal_distribution<double> w(0.0, weight_sigma);
  for (NodeId o = 0; o < kOutputCount; ++o) {
    for (NodeId i = 0; i < kInputCount; ++i) {
      g.edges.push_back({i, static_cast<NodeId>(kInputCount) + o, w(rng), true});
    }
  }
  return g;
}

const Node* Genome::find(NodeId id) const {
  for (const Node& n : nodes) {
    if (n.id == id) return &n;
  }
  return nullptr;
}

NodeId Genome::next_id() const {
  NodeId m = 0;
  for (const Node& n : nodes) m = std::max(m, n.id);
  return nodes.empty() ? 0 : m + 1;
}

void Genome::validate() const {
  std::map<NodeId, NodeRole> roles;
  std::size_t n_in = 0;
  std::size_t n_out = 0;
  for (const Node& n : nodes) {
    if (!roles.emplace(n.id, n.role).second) throw DataError("genome: duplicate node id " + id_str(n.id));
    n_in += n.role == NodeRole::Input;
    n_out += n.role == NodeRole::Output;
  }
  if (n_in != kInputCount || n_out != kOutputCount) {
    throw DataError("genome: needs " + std::to_string(kInputCount) + " inputs and " +
                    std::to_string(kOutputCount) + " outputs, has " + std::to_string(n_in) + " and " +
                    std::to_string(n_out));
  }
  std::set<std::pair<NodeId, NodeId>> pairs;
  for (const Edge& e : edges) {
    const std::string which = "genome: edge " + id_str(e.src) + "->" + id_str(e.dst);
    auto s = roles.find(e.src);
    auto d = roles.find(e.dst);
    if (s == roles.end() || d == roles.end()) throw DataError(which + " references a missing node");
    if (d->second == NodeRole::Input) throw DataError(which + " ends at an input node");
    if (s->second == NodeRole::Output) throw DataError(which + " starts at an output node");
    if (e.src == e.dst) throw DataError(which + " is a self loop");
    if (!std::isfinite(e.weight)) throw DataError(which + " has a non-finite weight");
    if (!pairs.emplace(e.src, e.dst).second) throw DataError(which + " is duplicated");
  }

  // Kahn over enabled edges.
  std::map<NodeId, int> indegree;
  std::multimap<NodeId, NodeId> out;
  for (const Node& n : nodes) indegree[n.id] = 0;
  for (const Edge& e : edges) {
    if (!e.enabled) continue;
    ++indegree[e.dst];
    out.emplace(e.src, e.dst);
  }
  std::vector<NodeId> ready;
  for (const auto& [id, deg] : indegree) {
    if (deg == 0) ready.push_back(id);
  }
  std::size_t visited = 0;
  while (!ready.empty()) {
    const NodeId n = ready.back();
    ready.pop_back();
    ++visited;
    auto [lo, hi] = out.equal_range(n);
    for (auto it = lo; it != hi; ++it) {
      if (--indegree[it->second] == 0) ready.push_back(it->second);
    }
  }
  if (visited != nodes.size()) throw DataError("genome: enabled edges contain a cycle");
}

bool Genome::is_valid() const {
  try {
    validate();
    return true;
  } catch (const DataError&) {
    return false;
  }
}

// ---------------------------------------------------------------- Policy

Policy::Policy(const Genome& genome) {
  genome.validate();
  std::map<NodeId, std::size_t> slot;
  for (std::size_t i = 0; i < genome.nodes.size(); ++i) slot[genome.nodes[i].id] = i;
  slot_count_ = genome.nodes.size();

  std::size_t in = 0;
  std::size_t out = 0;
  for (std::size_t i = 0; i < genome.nodes.size(); ++i) {
    if (genome.nodes[i].role == NodeRole::Input) input_slots_[in++] = i;
    if (genome.nodes[i].role == NodeRole::Output) output_slots_[out++] = i;
  }

  std::vector<std::vector<std::pair<std::size_t, double>>> incoming(slot_count_);
  std::vector<std::vector<std::size_t>> outgoing(slot_count_);
  std::vector<int> indegree(slot_count_, 0);
  for (const Edge& e : genome.edges) {
    if (!e.enabled) continue;
    const std::size_t s = slot.at(e.src);
    const std::size_t d = slot.at(e.dst);
    incoming[d].emplace_back(s, e.weight);
    outgoing[s].push_back(d);
    ++indegree[d];
  }

  // Deterministic topological order: always take the lowest ready slot.
  std::set<std::size_t> ready;
  for (std::size_t i = 0; i < slot_count_; ++i) {
    if (indegree[i] == 0) ready.insert(i);
  }
  while (!ready.empty()) {
    const std::size_t i = *ready.begin();
    ready.erase(ready.begin());
    if (genome.nodes[i].role != NodeRole::Input) {
      plan_.push_back({i, genome.nodes[i].activation, std::move(incoming[i])});
    }
    for (std::size_t d : outgoing[i]) {
      if (--indegree[d] == 0) ready.insert(d);
    }
  }
}

ActionScores Policy::scores(const Observation& observation) const {
  std::vector<double> value(slot_count_, 0.0);
  for (std::size_t i = 0; i < kInputCount; ++i) value[input_slots_[i]] = observation[i];
  for (const Step& step : plan_) {
    double sum = 0.0;
    for (const auto& [src, w] : step.inputs) sum += w * value[src];
    value[step.slot] = activate(step.activation, sum);
  }
  ActionScores out{};
  for (std::size_t i = 0; i < kOutputCount; ++i) out[i] = value[output_slots_[i]];
  return out;
}

Action Policy::act(const Observation& observation) const { return argmax_action(scores(observation)); }

ActionScores forward_pass(const Genome& genome, const Observation& observation) {
  return Policy(genome).scores(observation);
}

Action argmax_action(const ActionScores& scores) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) best = i;
  }
  return static_cast<Action>(best);
}

// ---------------------------------------------------------------- mutation

void MutationRates::validate() const {
  for (double r : {perturb_weight, add_edge, add_node, change_activation}) {
    if (!(r >= 0.0 && r <= 1.0)) throw ConfigError("mutation rates must be in [0, 1]");
  }
  if (!(std::isfinite(weight_sigma) && weight_sigma >= 0.0)) throw ConfigError("weight_sigma must be >= 0");
}

namespace {

void add_edge(Genome& g, std::mt19937_64& rng) {
  std::set<std::pair<NodeId, NodeId>> existing;
  for (const Edge& e : g.edges) existing.emplace(e.src, e.dst);
  std::vector<std::pair<NodeId, NodeId>> candidates;
  for (const Node& dst : g.nodes) {
    if (dst.role == NodeRole::Input) continue;
    const std::set<NodeId> below = descendants(g, dst.id);
    for (const Node& src : g.nodes) {
      if (src.role == NodeRole::Output || src.id == dst.id) continue;
      if (existing.contains({src.id, dst.id}) || below.contains(src.id)) continue;
      candidates.emplace_back(src.id, dst.id);
    }
  }
  if (candidates.empty()) return;
  const auto [s, d] = pick(candidates, rng);
  std::normal_distribution<double> w(0.0, 1.0);
  g.edges.push_back({s, d, w(rng), true});
}

void add_node(Genome& g, std::mt19937_64& rng) {
  std::vector<std::size_t> enabled;
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    if (g.edges[i].enabled) enabled.push_back(i);
  }
  if (enabled.empty()) return;
  const std::size_t idx = pick(enabled, rng);
  const Activation act = pick(std::vector<Activation>(kAllActivations.begin(), kAllActivations.end()), rng);
  Edge& split = g.edges[idx];
  split.enabled = false;
  const Edge old = split;
  const NodeId id = g.next_id();
  g.nodes.push_back({id, NodeRole::Hidden, act});
  g.edges.push_back({old.src, id, 1.0, true});
  g.edges.push_back({id, old.dst, old.weight, true});
}

void change_activation(Genome& g, std::mt19937_64& rng) {
  std::vector<std::size_t> hidden;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    if (g.nodes[i].role == NodeRole::Hidden) hidden.push_back(i);
  }
  if (hidden.empty()) return;
  Node& n = g.nodes[pick(hidden, rng)];
  std::vector<Activation> others;
  for (Activation a : kAllActivations) {
    if (a != n.activation) others.push_back(a);
  }
  n.activation = pick(others, rng);
}

}  // namespace

Genome mutate(const Genome& genome, const MutationRates& rates, std::mt19937_64& rng) {
  Genome g = genome;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  if (rates.perturb_weight > 0.0) {
    std::normal_distribution<double> kick(0.0, rates.weight_sigma);
    for (Edge& e : g.edges) {
      if (unit(rng) < rates.perturb_weight) e.weight += kick(rng);
    }
  }
  if (unit(rng) < rates.add_edge) add_edge(g, rng);
  if (unit(rng) < rates.add_node) add_node(g, rng);
  if (unit(rng) < rates.change_activation) change_activation(g, rng);
  return g;
}

// ---------------------------------------------------------------- evaluation

void EvolutionConfig::validate() const {
  if (elitism_count < 1) throw ConfigError("elitism_count must be >= 1");
  if (population_size < elitism_count) throw ConfigError("population_size must be >= elitism_count");
  if (generations < 1) throw ConfigError("generations must be >= 1");
  if (tournament_size < 1) throw ConfigError("tournament_size must be >= 1");
  if (episodes_per_eval < 1) throw ConfigError("episodes_per_eval must be >= 1");
  if (threads < 1) throw ConfigError("threads must be >= 1");
  rates.validate();
}

double evaluate_fitness(const Policy& policy, Environment& env, std::span<const std::uint64_t> episode_seeds) {
  if (episode_seeds.empty()) throw ContractViolation("evaluate_fitness: no episode seeds");
  double total = 0.0;
  for (std::uint64_t seed : episode_seeds) {
    total += run_episode(env, seed, [&](const Observation& o) { return policy.act(o); });
  }
  return total / static_cast<double>(episode_seeds.size());
}

double evaluate_fitness(const Genome& genome, const EnvConfig& env_config, const ColonyRecording& recording,
                        std::span<const std::uint64_t> episode_seeds) {
  Environment env(env_config, recording);
  return evaluate_fitness(Policy(genome), env, episode_seeds);
}

namespace {

std::vector<double> evaluate_population(const std::vector<Genome>& population, const EnvConfig& env_config,
                                        const std::shared_ptr<const ColonyRecording>& world,
                                        const std::vector<std::uint64_t>& seeds, int threads) {
  std::vector<double> fitness(population.size(), 0.0);
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));

  auto worker = [&](std::size_t w) {
    try {
      Environment env(env_config, world);
      for (std::size_t i = next++; i < population.size(); i = next++) {
        fitness[i] = evaluate_fitness(Policy(population[i]), env, seeds);
      }
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };

  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w) pool.emplace_back(worker, static_cast<std::size_t>(w));
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return fitness;
}

std::vector<std::uint64_t> draw_seeds(std::mt19937_64& rng, int n) {
  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(n));
  for (auto& s : seeds) s = rng();
  return seeds;
}

}  // namespace

EvolutionResult evolve(const EvolutionConfig& config, const EnvConfig& env_config,
                       const ColonyRecording& recording, std::span<const Genome> initial) {
  config.validate();
  env_config.validate();
  const auto world = prepare_world(recording, env_config);
  const auto pop_size = static_cast<std::size_t>(config.population_size);

  std::mt19937_64 rng(config.seed);
  std::mt19937_64 seed_rng(config.seed ^ 0x9e3779b97f4a7c15ULL);

  std::vector<Genome> population;
  population.reserve(pop_size);
  for (std::size_t i = 0; i < pop_size; ++i) {
    if (initial.empty()) {
      population.push_back(Genome::fully_connected(rng));
    } else {
      initial[i % initial.size()].validate();
      population.push_back(initial[i % initial.size()]);
    }
  }

  std::vector<std::uint64_t> seeds = draw_seeds(seed_rng, config.episodes_per_eval);
  EvolutionResult result;
  bool have_best = false;

  for (int gen = 0; gen < config.generations; ++gen) {
    if (gen > 0 && !config.fixed_eval_seeds) seeds = draw_seeds(seed_rng, config.episodes_per_eval);
    const std::vector<double> fitness =
        evaluate_population(population, env_config, world, seeds, std::min<int>(config.threads, config.population_size));

    std::vector<std::size_t> order(pop_size);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return fitness[a] > fitness[b]; });

    GenerationStats stats;
    stats.generation = gen;
    stats.best = fitness[order.front()];
    stats.worst = fitness[order.back()];
    double sum = 0.0;
    for (double f : fitness) sum += f;
    stats.mean = sum / static_cast<double>(pop_size);
    result.history.push_back(stats);

    if (!have_best || stats.best > result.best_fitness) {
      result.best = population[order.front()];
      result.best_fitness = stats.best;
      have_best = true;
    }
    if (gen + 1 == config.generations) break;

    auto tournament = [&]() -> const Genome& {
      std::uniform_int_distribution<std::size_t> d(0, pop_size - 1);
      std::size_t winner = d(rng);
      for (int k = 1; k < config.tournament_size; ++k) {
        const std::size_t c = d(rng);
        if (fitness[c] > fitness[winner] || (fitness[c] == fitness[winner] && c < winner)) winner = c;
      }
      return population[winner];
    };

    std::vector<Genome> next;
    next.reserve(pop_size);
    for (int e = 0; e < config.elitism_count; ++e) next.push_back(population[order[static_cast<std::size_t>(e)]]);
    while (next.size() < pop_size) next.push_back(mutate(tournament(), config.rates, rng));
    population = std::move(next);
  }
  return result;
}

// ---------------------------------------------------------------- I/O

std::string genome_to_json(const Genome& genome) {
  nlohmann::ordered_json j;
  j["format_version"] = kGenomeFormatVersion;
  j["nodes"] = nlohmann::ordered_json::array();
  for (const Node& n : genome.nodes) {
    j["nodes"].push_back({{"id", n.id},
                          {"role", std::string(to_string(n.role))},
                          {"activation", std::string(to_string(n.activation))}});
  }
  j["edges"] = nlohmann::ordered_json::array();
  for (const Edge& e : genome.edges) {
    j["edges"].push_back({{"src", e.src}, {"dst", e.dst}, {"weight", e.weight}, {"enabled", e.enabled}});
  }
  return j.dump(2);
}

Genome genome_from_json(std::string_view text) {
  Genome g;
  try {
    const auto j = nlohmann::json::parse(text);
    if (j.at("format_version").get<int>() != kGenomeFormatVersion) {
      throw DataError("genome: unsupported format_version " + j.at("format_version").dump());
    }
    for (const auto& n : j.at("nodes")) {
      Node node;
      node.id = n.at("id").get<NodeId>();
      const auto role = n.at("role").get<std::string>();
      if (role == "input") {
        node.role = NodeRole::Input;
      } else if (role == "hidden") {
        node.role = NodeRole::Hidden;
      } else if (role == "output") {
        node.role = NodeRole::Output;
      } else {
        throw DataError("genome: unknown role '" + role + "'");
      }
      const auto act = n.at("activation").get<std::string>();
      auto it = std::find_if(kAllActivations.begin(), kAllActivations.end(),
                             [&](Activation a) { return to_string(a) == act; });
      if (it == kAllActivations.end()) throw DataError("genome: unknown activation '" + act + "'");
      node.activation = *it;
      g.nodes.push_back(node);
    }
    for (const auto& e : j.at("edges")) {
      g.edges.push_back({e.at("src").get<NodeId>(), e.at("dst").get<NodeId>(), e.at("weight").get<double>(),
                         e.at("enabled").get<bool>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("genome: ") + e.what());
  }
  g.validate();
  return g;
}

Genome load_genome(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open genome " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return genome_from_json(ss.str());
}

void save_genome(const Genome& genome, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot write " + path.string());
  f << genome_to_json(genome) << '\n';
}

void write_history_csv(std::span<const GenerationStats> history, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot write " + path.string());
  auto fmt = [](double v) {
    char buf[64];
    return std::string(buf, std::to_chars(buf, buf + sizeof(buf), v).ptr);
  };
  f << "generation,best,mean,worst\n";
  for (const GenerationStats& s : history) {
    f << s.generation << ',' << fmt(s.best) << ',' << fmt(s.mean) << ',' << fmt(s.worst) << '\n';
  }
}

}  // namespace antdyn
