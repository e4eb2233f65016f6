#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "tiletuner/rng.hpp"
#include "tiletuner/space.hpp"
#include "tiletuner/surrogate.hpp"

namespace tiletuner {

enum class TunerKind { random, grid, genetic, boosted, bayesopt };

std::string_view tuner_name(TunerKind k);
TunerKind parse_tuner(std::string_view name);
const std::vector<TunerKind>& all_tuner_kinds();

struct HistoryEntry {
  Configuration config;
  std::optional<double> runtime_s;  // nullopt marks a failed evaluation
};

// Append-only evaluation log with O(1) membership by flat index. A
// configuration never appears twice.
class History {
 public:
  void append(Configuration config, std::uint64_t flat_index,
              std::optional<double> runtime_s);
  bool contains(std::uint64_t flat_index) const {
    return evaluated_.count(flat_index) > 0;
  }
  std::size_t size() const { return entries_.size(); }
  const std::vector<HistoryEntry>& entries() const { return entries_; }

 private:
  std::vector<HistoryEntry> entries_;
  std::unordered_set<std::uint64_t> evaluated_;
};

// Model-based tuners score the full space when it is small enough, otherwise
// a fresh random sample of unevaluated configurations each iteration.
inline constexpr std::uint64_t kPoolExhaustiveLimit = 4096;
inline constexpr int kPoolSampleSize = 2048;

// Ask/tell search strategy over one space. ask() never re-proposes an
// evaluated configuration and throws SpaceExhausted once none remain;
// tell() must receive exactly the configuration returned by the preceding
// ask(). Calls alternate strictly; a tuner is single-owner mutable state.
class Tuner {
 public:
  virtual ~Tuner() = default;

  Configuration ask();
  void tell(const Configuration& config, std::optional<double> runtime_s);

  const ParamSpace& space() const { return space_; }
  const History& history() const { return history_; }
  TunerKind kind() const { return kind_; }

 protected:
  Tuner(TunerKind kind, ParamSpace space, std::uint64_t seed);

  // Flat index of the next configuration; must be unevaluated.
  virtual std::uint64_t next_index() = 0;
  virtual void on_tell(const Configuration& config, std::uint64_t flat_index,
                       double effective_runtime_s);

  bool evaluated(std::uint64_t flat_index) const {
    return history_.contains(flat_index);
  }
  // Uniform draw among unevaluated configurations (rejection sampling with a
  // reservoir-scan fallback near exhaustion).
  std::uint64_t sample_unevaluated();
  // Ascending flat indices of unevaluated candidates to score.
  std::vector<std::uint64_t> candidate_pool();
  // log of the penalty-adjusted runtime per history entry, the surrogate
  // training target.
  const std::vector<double>& log_runtimes() const { return log_runtimes_; }
  FeatureMatrix history_features() const;

  ParamSpace space_;
  std::uint64_t size_;
  std::uint64_t seed_;
  Rng rng_;
  History history_;

 private:
  TunerKind kind_;
  std::optional<std::uint64_t> pending_;
  std::vector<double> log_runtimes_;
  double worst_runtime_s_ = 0.0;
};

class RandomTuner final : public Tuner {
 public:
  RandomTuner(ParamSpace space, std::uint64_t seed);

 protected:
  std::uint64_t next_index() override;
};

class GridTuner final : public Tuner {
 public:
  GridTuner(ParamSpace space, std::uint64_t seed);

 protected:
  std::uint64_t next_index() override;

 private:
  std::uint64_t cursor_ = 0;
};

struct GaOptions {
  int population = 20;
  int elites = 4;
  int tournament = 3;
  double crossover_p = 0.5;
  double mutation_p = 0.1;
};

class GeneticTuner final : public Tuner {
 public:
  GeneticTuner(ParamSpace space, std::uint64_t seed, GaOptions opts = {});

  int generation() const { return generation_; }
  std::vector<Configuration> population() const;

 protected:
  std::uint64_t next_index() override;
  void on_tell(const Configuration& config, std::uint64_t flat_index,
               double effective_runtime_s) override;

 private:
  void breed();
  int tournament_winner();
  Configuration crossover(const Configuration& a, const Configuration& b);
  void mutate(Configuration& c);
  void force_mutate(Configuration& c);

  GaOptions opts_;
  std::vector<std::uint64_t> members_;  // flat indices, current population
  std::vector<double> fitness_;         // -log(runtime); NaN while pending
  std::deque<std::uint64_t> queue_;     // members awaiting evaluation
  std::unordered_map<std::uint64_t, int> slot_of_;
  int generation_ = 0;
  int awaiting_ = 0;
};

struct BoostedOptions {
  int warmup = 10;       // seeded-random asks before the model kicks in
  double epsilon = 0.1;  // probability of a random pool pick per model ask
  BoostParams boost;
};

class BoostedTuner final : public Tuner {
 public:
  BoostedTuner(ParamSpace space, std::uint64_t seed, BoostedOptions opts = {});

 protected:
  std::uint64_t next_index() override;

 private:
  BoostedOptions opts_;
};

struct BayesOptOptions {
  double kappa = 1.96;
  int min_init = 4;  // init design size = max(min_init, 2 * dims)
  ForestParams forest;
};

class BayesOptTuner final : public Tuner {
 public:
  BayesOptTuner(ParamSpace space, std::uint64_t seed, BayesOptOptions opts = {});

  int init_design_size() const { return init_size_; }

 protected:
  std::uint64_t next_index() override;

 private:
  BayesOptOptions opts_;
  int init_size_;
};

std::unique_ptr<Tuner> make_tuner(TunerKind kind, const ParamSpace& space,
                                  std::uint64_t seed);

}  // namespace tiletuner
