#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "antdyn/env.hpp"

namespace antdyn {

enum class NodeRole : std::uint8_t { Input, Hidden, Output };
enum class Activation : std::uint8_t { Identity, Tanh, Sigmoid, Relu, Sin, Gauss };

inline constexpr std::array<Activation, 6> kAllActivations = {
    Activation::Identity, Activation::Tanh, Activation::Sigmoid,
    Activation::Relu,     Activation::Sin,  Activation::Gauss};

inline constexpr std::size_t kInputCount = kObservationSize;
inline constexpr std::size_t kOutputCount = kActionCount;

std::string_view to_string(NodeRole r);
std::string_view to_string(Activation a);
double activate(Activation a, double x);

using NodeId = std::uint32_t;

struct Node {
  NodeId id = 0;
  NodeRole role = NodeRole::Hidden;
  Activation activation = Activation::Identity;

  friend bool operator==(const Node&, const Node&) = default;
};

struct Edge {
  NodeId src = 0;
  NodeId dst = 0;
  double weight = 0.0;
  bool enabled = true;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Feed-forward policy network description. Input nodes take observation
/// entries and output nodes yield action scores, each in node-list order.
struct Genome {
  std::vector<Node> nodes;
  std::vector<Edge> edges;

  /// 13 inputs (ids 0..12) and 4 identity outputs (ids 13..16), no edges.
  static Genome minimal();
  /// minimal() plus every input->output edge with N(0, weight_sigma) weights.
  static Genome fully_connected(std::mt19937_64& rng, double weight_sigma = 1.0);

  /// Throws DataError describing the first broken invariant: arity, unique
  /// ids, edge endpoints and direction, duplicate pairs, cycles over enabled
  /// edges, non-finite weights.
  void validate() const;
  bool is_valid() const;
  NodeId next_id() const;
  const Node* find(NodeId id) const;

  friend bool operator==(const Genome&, const Genome&) = default;
};

using ActionScores = std::array<double, kOutputCount>;

/// A validated genome compiled into a topological evaluation plan.
class Policy {
 public:
  explicit Policy(const Genome& genome);

  ActionScores scores(const Observation& observation) const;
  Action act(const Observation& observation) const;

 private:
  struct Step {
    std::size_t slot;
    Activation activation;
    std::vector<std::pair<std::size_t, double>> inputs;  // (slot, weight)
  };
  std::array<std::size_t, kInputCount> input_slots_{};
  std::array<std::size_t, kOutputCount> output_slots_{};
  std::vector<Step> plan_;
  std::size_t slot_count_ = 0;
};

ActionScores forward_pass(const Genome& genome, const Observation& observation);

/// Index of the highest score; ties go to the lowest index.
Action argmax_action(const ActionScores& scores);

struct MutationRates {
  double perturb_weight = 0.8;  // per-edge probability of a Gaussian kick
  double add_edge = 0.1;
  double add_node = 0.05;
  double change_activation = 0.05;
  double weight_sigma = 0.5;

  void validate() const;
};

/// Applies each structural move once with its configured probability.
/// Inapplicable moves are skipped; the result is always a valid genome.
Genome mutate(const Genome& genome, const MutationRates& rates, std::mt19937_64& rng);

struct EvolutionConfig {
  int population_size = 32;
  int generations = 50;
  int elitism_count = 2;
  int tournament_size = 3;
  MutationRates rates;
  int episodes_per_eval = 3;
  std::uint64_t seed = 0;
  int threads = 1;
  /// Evaluate every generation on the same seed list instead of drawing a
  /// fresh list per generation.
  bool fixed_eval_seeds = false;

  void validate() const;
};

/// Mean episode reward over `episode_seeds`, acting by argmax of the network.
double evaluate_fitness(const Policy& policy, Environment& env, std::span<const std::uint64_t> episode_seeds);
double evaluate_fitness(const Genome& genome, const EnvConfig& env_config, const ColonyRecording& recording,
                        std::span<const std::uint64_t> episode_seeds);

struct GenerationStats {
  int generation = 0;
  double best = 0.0;
  double mean = 0.0;
  double worst = 0.0;

  friend bool operator==(const GenerationStats&, const GenerationStats&) = default;
};

struct EvolutionResult {
  Genome best;
  double best_fitness = 0.0;
  std::vector<GenerationStats> history;
};

/// Generational loop: evaluate, keep the elite unchanged, refill by tournament
/// selection plus mutation. `initial` seeds the population (cycled to size);
/// when empty, fully connected random genomes are used. Results do not
/// depend on `config.threads`.
EvolutionResult evolve(const EvolutionConfig& config, const EnvConfig& env_config,
                       const ColonyRecording& recording, std::span<const Genome> initial = {});

std::string genome_to_json(const Genome& genome);
Genome genome_from_json(std::string_view text);
Genome load_genome(const std::filesystem::path& path);
void save_genome(const Genome& genome, const std::filesystem::path& path);

/// CSV `generation,best,mean,worst`.
void write_history_csv(std::span<const GenerationStats> history, const std::filesystem::path& path);

}  // namespace antdyn
