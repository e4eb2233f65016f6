#include "tiletuner/tuners.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "tiletuner/errors.hpp"

namespace tiletuner {

std::string_view tuner_name(TunerKind k) {
  switch (k) {
    case TunerKind::random: return "random";
    case TunerKind::grid: return "grid";
    case TunerKind::genetic: return "genetic";
    case TunerKind::boosted: return "boosted";
    case TunerKind::bayesopt: return "bayesopt";
  }
  throw std::invalid_argument("unknown tuner enum value");
}

TunerKind parse_tuner(std::string_view name) {
  for (TunerKind k : all_tuner_kinds()) {
    if (name == tuner_name(k)) return k;
  }
  throw std::out_of_range("unknown tuner: " + std::string(name));
}

const std::vector<TunerKind>& all_tuner_kinds() {
  static const std::vector<TunerKind> kinds = {
      TunerKind::random, TunerKind::grid, TunerKind::genetic,
      TunerKind::boosted, TunerKind::bayesopt};
  return kinds;
}

void History::append(Configuration config, std::uint64_t flat_index,
                     std::optional<double> runtime_s) {
  if (!evaluated_.insert(flat_index).second) {
    throw std::invalid_argument("history: configuration evaluated twice");
  }
  entries_.push_back({std::move(config), runtime_s});
}

Tuner::Tuner(TunerKind kind, ParamSpace space, std::uint64_t seed)
    : space_(std::move(space)),
      size_(space_size(space_)),
      seed_(seed),
      rng_(seed),
      kind_(kind) {}

Configuration Tuner::ask() {
  if (pending_) throw std::logic_error("ask() called twice without tell()");
  if (history_.size() >= size_) throw SpaceExhausted();
  const std::uint64_t flat = next_index();
  pending_ = flat;
  return config_at(space_, flat);
}

void Tuner::tell(const Configuration& config, std::optional<double> runtime_s) {
  if (!pending_) throw std::invalid_argument("tell() without a pending ask()");
  const std::uint64_t flat = index_of(space_, config);
  if (flat != *pending_) {
    throw std::invalid_argument("tell(): configuration was not the one asked");
  }
  double effective;
  if (runtime_s) {
    worst_runtime_s_ = std::max(worst_runtime_s_, *runtime_s);
    effective = *runtime_s;
  } else {
    // Penalize failures instead of discarding them so history sizes stay
    // aligned across strategies.
    effective = worst_runtime_s_ > 0.0 ? 10.0 * worst_runtime_s_ : 1e6;
  }
  history_.append(config, flat, runtime_s);
  log_runtimes_.push_back(std::log(std::max(effective, 1e-12)));
  pending_.reset();
  on_tell(config, flat, effective);
}

void Tuner::on_tell(const Configuration&, std::uint64_t, double) {}

std::uint64_t Tuner::sample_unevaluated() {
  for (int tries = 0; tries < 1000; ++tries) {
    const std::uint64_t flat = rng_.next_index(size_);
    if (!evaluated(flat)) return flat;
  }
  // Only reachable when the space is nearly exhausted, i.e. small: a
  // reservoir pass picks uniformly without materializing the remainder.
  std::uint64_t chosen = size_;
  std::uint64_t seen = 0;
  for (std::uint64_t i = 0; i < size_; ++i) {
    if (evaluated(i)) continue;
    ++seen;
    if (rng_.next_index(seen) == 0) chosen = i;
  }
  if (seen == 0) throw SpaceExhausted();
  return chosen;
}

std::vector<std::uint64_t> Tuner::candidate_pool() {
  std::vector<std::uint64_t> pool;
  if (size_ <= kPoolExhaustiveLimit) {
    for (std::uint64_t i = 0; i < size_; ++i) {
      if (!evaluated(i)) pool.push_back(i);
    }
    return pool;
  }
  std::unordered_set<std::uint64_t> drawn;
  const int budget = 20 * kPoolSampleSize;
  for (int tries = 0;
       tries < budget && static_cast<int>(drawn.size()) < kPoolSampleSize;
       ++tries) {
    const std::uint64_t flat = rng_.next_index(size_);
    if (!evaluated(flat)) drawn.insert(flat);
  }
  pool.assign(drawn.begin(), drawn.end());
  std::sort(pool.begin(), pool.end());
  return pool;
}

FeatureMatrix Tuner::history_features() const {
  FeatureMatrix x;
  x.reserve(history_.size());
  for (const HistoryEntry& e : history_.entries()) {
    x.push_back(encode(space_, e.config));
  }
  return x;
}

RandomTuner::RandomTuner(ParamSpace space, std::uint64_t seed)
    : Tuner(TunerKind::random, std::move(space), seed) {}

std::uint64_t RandomTuner::next_index() { return sample_unevaluated(); }

GridTuner::GridTuner(ParamSpace space, std::uint64_t seed)
    : Tuner(TunerKind::grid, std::move(space), seed) {}

std::uint64_t GridTuner::next_index() { return cursor_++; }

GeneticTuner::GeneticTuner(ParamSpace space, std::uint64_t seed, GaOptions opts)
    : Tuner(TunerKind::genetic, std::move(space), seed), opts_(opts) {
  const std::uint64_t target =
      std::min<std::uint64_t>(static_cast<std::uint64_t>(opts_.population), size_);
  std::unordered_set<std::uint64_t> reserved;
  while (members_.size() < target) {
    std::uint64_t flat = rng_.next_index(size_);
    if (reserved.count(flat)) continue;
    reserved.insert(flat);
    slot_of_[flat] = static_cast<int>(members_.size());
    members_.push_back(flat);
    fitness_.push_back(std::numeric_limits<double>::quiet_NaN());
    queue_.push_back(flat);
    ++awaiting_;
  }
}

std::vector<Configuration> GeneticTuner::population() const {
  std::vector<Configuration> out;
  out.reserve(members_.size());
  for (std::uint64_t flat : members_) out.push_back(config_at(space_, flat));
  return out;
}

std::uint64_t GeneticTuner::next_index() {
  if (queue_.empty()) breed();
  if (queue_.empty()) throw SpaceExhausted();
  const std::uint64_t flat = queue_.front();
  queue_.pop_front();
  return flat;
}

void GeneticTuner::on_tell(const Configuration&, std::uint64_t flat_index,
                           double effective_runtime_s) {
  auto it = slot_of_.find(flat_index);
  if (it == slot_of_.end()) return;  // member of an already-replaced generation
  fitness_[it->second] = -std::log(std::max(effective_runtime_s, 1e-12));
  slot_of_.erase(it);
  if (--awaiting_ == 0 && queue_.empty()) breed();
}

int GeneticTuner::tournament_winner() {
  int best = -1;
  for (int t = 0; t < opts_.tournament; ++t) {
    const int slot = static_cast<int>(rng_.next_index(members_.size()));
    if (best < 0 || fitness_[slot] > fitness_[best]) best = slot;
  }
  return best;
}

Configuration GeneticTuner::crossover(const Configuration& a,
                                      const Configuration& b) {
  Configuration child;
  child.values.resize(a.values.size());
  for (std::size_t g = 0; g < a.values.size(); ++g) {
    child.values[g] = rng_.next_bernoulli(opts_.crossover_p) ? a.values[g]
                                                             : b.values[g];
  }
  return child;
}

void GeneticTuner::mutate(Configuration& c) {
  for (std::size_t g = 0; g < c.values.size(); ++g) {
    if (!rng_.next_bernoulli(opts_.mutation_p)) continue;
    const auto& cands = space_.params[g].candidates;
    c.values[g] = cands[rng_.next_index(cands.size())];
  }
}

void GeneticTuner::force_mutate(Configuration& c) {
  // Guarantee at least one gene change so re-mutation of duplicates
  // terminates; falls through silently on all-singleton spaces.
  std::vector<int> mutable_genes;
  for (std::size_t g = 0; g < space_.params.size(); ++g) {
    if (space_.params[g].candidates.size() > 1) {
      mutable_genes.push_back(static_cast<int>(g));
    }
  }
  if (mutable_genes.empty()) return;
  const int g = mutable_genes[rng_.next_index(mutable_genes.size())];
  const auto& cands = space_.params[g].candidates;
  int v = c.values[g];
  while (v == c.values[g] && cands.size() > 1) {
    v = cands[rng_.next_index(cands.size())];
  }
  c.values[g] = v;
}

void GeneticTuner::breed() {
  if (awaiting_ > 0) return;  // current generation still being evaluated
  ++generation_;

  std::vector<int> order(members_.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (fitness_[a] != fitness_[b]) return fitness_[a] > fitness_[b];
    return a < b;
  });

  const int pop = static_cast<int>(members_.size());
  const int elites = std::min(opts_.elites, pop);
  std::vector<std::uint64_t> next_members;
  std::vector<double> next_fitness;
  std::unordered_set<std::uint64_t> reserved;
  for (int e = 0; e < elites; ++e) {
    const int slot = order[e];
    next_members.push_back(members_[slot]);
    next_fitness.push_back(fitness_[slot]);
    reserved.insert(members_[slot]);
  }

  std::deque<std::uint64_t> next_queue;
  std::unordered_map<std::uint64_t, int> next_slots;
  bool remaining = true;
  while (static_cast<int>(next_members.size()) < pop && remaining) {
    const Configuration pa = config_at(space_, members_[tournament_winner()]);
    const Configuration pb = config_at(space_, members_[tournament_winner()]);
    Configuration child = crossover(pa, pb);
    mutate(child);
    std::uint64_t flat = index_of(space_, child);
    for (int tries = 0; evaluated(flat) || reserved.count(flat); ++tries) {
      if (tries >= 256) {
        // Uniform reservoir pick among configurations still available.
        std::uint64_t chosen = size_;
        std::uint64_t seen = 0;
        for (std::uint64_t i = 0; i < size_; ++i) {
          if (evaluated(i) || reserved.count(i)) continue;
          ++seen;
          if (rng_.next_index(seen) == 0) chosen = i;
        }
        if (seen == 0) {
          remaining = false;  // space is drained; finish with a short generation
        } else {
          flat = chosen;
        }
        break;
      }
      force_mutate(child);
      flat = index_of(space_, child);
    }
    if (!remaining) break;
    reserved.insert(flat);
    next_slots[flat] = static_cast<int>(next_members.size());
    next_members.push_back(flat);
    next_fitness.push_back(std::numeric_limits<double>::quiet_NaN());
    next_queue.push_back(flat);
  }

  members_ = std::move(next_members);
  fitness_ = std::move(next_fitness);
  queue_ = std::move(next_queue);
  slot_of_ = std::move(next_slots);
  awaiting_ = static_cast<int>(queue_.size());
}

BoostedTuner::BoostedTuner(ParamSpace space, std::uint64_t seed,
                           BoostedOptions opts)
    : Tuner(TunerKind::boosted, std::move(space), seed), opts_(opts) {}

std::uint64_t BoostedTuner::next_index() {
  if (history_.size() < static_cast<std::size_t>(opts_.warmup)) {
    return sample_unevaluated();
  }
  const std::vector<std::uint64_t> pool = candidate_pool();
  if (pool.empty()) throw SpaceExhausted();
  if (rng_.next_bernoulli(opts_.epsilon)) {
    return pool[rng_.next_index(pool.size())];
  }
  const BoostedEnsemble model =
      fit_boosted(history_features(), log_runtimes(), opts_.boost, seed_);
  std::uint64_t best = pool.front();
  double best_score = std::numeric_limits<double>::infinity();
  for (std::uint64_t flat : pool) {
    const double score =
        predict_boosted(model, encode(space_, config_at(space_, flat)));
    if (score < best_score) {
      best_score = score;
      best = flat;
    }
  }
  return best;
}

BayesOptTuner::BayesOptTuner(ParamSpace space, std::uint64_t seed,
                             BayesOptOptions opts)
    : Tuner(TunerKind::bayesopt, std::move(space), seed),
      opts_(opts),
      init_size_(std::max(opts.min_init,
                          2 * static_cast<int>(space_.params.size()))) {}

std::uint64_t BayesOptTuner::next_index() {
  if (history_.size() < static_cast<std::size_t>(init_size_)) {
    return sample_unevaluated();
  }
  const std::vector<std::uint64_t> pool = candidate_pool();
  if (pool.empty()) throw SpaceExhausted();
  const Forest model =
      fit_forest(history_features(), log_runtimes(), opts_.forest, seed_);
  std::uint64_t best = pool.front();
  double best_score = std::numeric_limits<double>::infinity();
  for (std::uint64_t flat : pool) {
    const Prediction pred =
        predict_forest(model, encode(space_, config_at(space_, flat)));
    const double score = lcb(pred.mean, pred.std_dev, opts_.kappa);
    if (score < best_score) {
      best_score = score;
      best = flat;
    }
  }
  return best;
}

std::unique_ptr<Tuner> make_tuner(TunerKind kind, const ParamSpace& space,
                                  std::uint64_t seed) {
  switch (kind) {
    case TunerKind::random: return std::make_unique<RandomTuner>(space, seed);
    case TunerKind::grid: return std::make_unique<GridTuner>(space, seed);
    case TunerKind::genetic: return std::make_unique<GeneticTuner>(space, seed);
    case TunerKind::boosted: return std::make_unique<BoostedTuner>(space, seed);
    case TunerKind::bayesopt:
      return std::make_unique<BayesOptTuner>(space, seed);
  }
  throw std::invalid_argument("unknown tuner kind");
}

}  // namespace tiletuner
