#include <cmath>
#include <set>
#include <stdexcept>

#include "doctest.h"
#include "support.hpp"
#include "tiletuner/errors.hpp"
#include "tiletuner/harness.hpp"
#include "tiletuner/tuners.hpp"

using namespace tiletuner;

namespace {

// Drive a tuner against the synthetic objective for `steps` evaluations.
std::vector<Configuration> drive(Tuner& tuner, int steps) {
  std::vector<Configuration> asked;
  for (int i = 0; i < steps; ++i) {
    Configuration c = tuner.ask();
    tuner.tell(c, synthetic_objective(tuner.space(), c));
    asked.push_back(std::move(c));
  }
  return asked;
}

}  // namespace

TEST_CASE("tuner names round-trip") {
  for (TunerKind kind : all_tuner_kinds()) {
    CHECK(parse_tuner(tuner_name(kind)) == kind);
  }
  CHECK_THROWS_AS(parse_tuner("simulated-annealing"), std::out_of_range);
}

TEST_CASE("grid tuner enumerates flat indices in order") {
  const ParamSpace space = build_space(Kernel::lu, "large");
  GridTuner tuner(space, 0);
  for (std::uint64_t i = 0; i < 3; ++i) {
    Configuration c = tuner.ask();
    CHECK(c == config_at(space, i));
    tuner.tell(c, 1.0 + static_cast<double>(i));  // feedback must not reorder
  }
}

TEST_CASE("random tuner replays its seed") {
  const ParamSpace space = build_space(Kernel::lu, "large");
  RandomTuner a(space, 42), b(space, 42);
  const auto seq = drive(a, 30);
  CHECK(seq == drive(b, 30));
  RandomTuner c(space, 43);
  CHECK(drive(c, 30) != seq);
}

TEST_CASE("no tuner repeats or leaves the space") {
  const ParamSpace space = build_space(Kernel::lu, "mini");  // 49 configs
  for (TunerKind kind : all_tuner_kinds()) {
    CAPTURE(tuner_name(kind));
    auto tuner = make_tuner(kind, space, 7);
    std::set<std::uint64_t> seen;
    for (const Configuration& c : drive(*tuner, 30)) {
      CHECK(is_valid(space, c));
      CHECK(seen.insert(index_of(space, c)).second);
    }
  }
}

TEST_CASE("every tuner signals exhaustion after covering the space") {
  const ParamSpace space = testsupport::make_space({4, 2});  // 6 configs
  for (TunerKind kind : all_tuner_kinds()) {
    CAPTURE(tuner_name(kind));
    auto tuner = make_tuner(kind, space, 5);
    std::set<std::uint64_t> seen;
    for (const Configuration& c : drive(*tuner, 6)) {
      seen.insert(index_of(space, c));
    }
    CHECK(seen.size() == 6);
    CHECK_THROWS_AS(tuner->ask(), SpaceExhausted);
  }
}

TEST_CASE("tell validates its configuration") {
  const ParamSpace space = build_space(Kernel::lu, "mini");
  RandomTuner tuner(space, 1);
  CHECK_THROWS_AS(tuner.tell(Configuration{{1, 1}}, 1.0), std::invalid_argument);
  const Configuration asked = tuner.ask();
  Configuration other = asked;
  other.values[0] = other.values[0] == 64 ? 1 : 64;
  CHECK_THROWS_AS(tuner.tell(other, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(tuner.tell(Configuration{{5, 5}}, 1.0), std::invalid_argument);
  tuner.tell(asked, 2.0);
  CHECK_THROWS_AS(tuner.tell(asked, 2.0), std::invalid_argument);
}

TEST_CASE("ask cannot be called twice without tell") {
  const ParamSpace space = build_space(Kernel::lu, "mini");
  RandomTuner tuner(space, 1);
  tuner.ask();
  CHECK_THROWS_AS(tuner.ask(), std::logic_error);
}

TEST_CASE("failed evaluations are recorded and do not stall the search") {
  const ParamSpace space = build_space(Kernel::lu, "mini");
  for (TunerKind kind : all_tuner_kinds()) {
    CAPTURE(tuner_name(kind));
    auto tuner = make_tuner(kind, space, 3);
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 25; ++i) {
      const Configuration c = tuner->ask();
      CHECK(seen.insert(index_of(space, c)).second);
      // every third evaluation fails
      if (i % 3 == 2) {
        tuner->tell(c, std::nullopt);
      } else {
        tuner->tell(c, synthetic_objective(space, c));
      }
    }
    int failures = 0;
    for (const HistoryEntry& e : tuner->history().entries()) {
      if (!e.runtime_s) ++failures;
    }
    CHECK(failures == 8);
  }
}

TEST_CASE("genetic tuner advances one generation per population sweep") {
  const ParamSpace space = build_space(Kernel::lu, "mini");
  GeneticTuner tuner(space, 11);
  CHECK(tuner.generation() == 0);
  CHECK(tuner.population().size() == 20);
  drive(tuner, 20);
  CHECK(tuner.generation() == 1);
  CHECK(tuner.population().size() == 20);
  drive(tuner, 16);  // 4 elites carry over, 16 offspring per generation
  CHECK(tuner.generation() == 2);
  for (const Configuration& member : tuner.population()) {
    CHECK(is_valid(space, member));
  }
}

TEST_CASE("genetic tuner replays its seed") {
  const ParamSpace space = build_space(Kernel::cholesky, "small");
  GeneticTuner a(space, 19), b(space, 19);
  CHECK(drive(a, 60) == drive(b, 60));
}

TEST_CASE("boosted tuner warms up randomly then goes greedy") {
  const ParamSpace space = build_space(Kernel::lu, "large");
  BoostedTuner a(space, 31), b(space, 31);
  const auto seq_a = drive(a, 40);
  CHECK(seq_a == drive(b, 40));  // deterministic replay through the model phase
  // The model phase should concentrate near the synthetic optimum.
  int hits = 0;
  for (std::size_t i = 10; i < seq_a.size(); ++i) {
    if (synthetic_objective(space, seq_a[i]) <= 2.0) ++hits;
  }
  CHECK(hits >= 5);
}

TEST_CASE("bayesopt init design replays the seeded sequence") {
  const ParamSpace space = build_space(Kernel::lu, "large");
  BayesOptTuner a(space, 77);
  CHECK(a.init_design_size() == 4);  // max(4, 2*2)
  BayesOptTuner b(space, 77);
  CHECK(drive(a, 4) == drive(b, 4));

  const ParamSpace mm3 = build_space(Kernel::mm3, "mini");
  BayesOptTuner c(mm3, 77);
  CHECK(c.init_design_size() == 12);  // max(4, 2*6)
}

TEST_CASE("bayesopt ask equals an externally recomputed LCB argmin") {
  const ParamSpace space = build_space(Kernel::lu, "large");
  const std::uint64_t seed = 5;
  BayesOptTuner tuner(space, seed);
  drive(tuner, 10);

  // Rebuild the surrogate exactly as the tuner does: default forest params,
  // the tuner's seed, log-runtime targets over the full history.
  FeatureMatrix x;
  std::vector<double> y;
  for (const HistoryEntry& e : tuner.history().entries()) {
    x.push_back(encode(space, e.config));
    y.push_back(std::log(*e.runtime_s));
  }
  const Forest forest = fit_forest(x, y, ForestParams{}, seed);

  std::set<std::uint64_t> evaluated;
  for (const HistoryEntry& e : tuner.history().entries()) {
    evaluated.insert(index_of(space, e.config));
  }
  std::uint64_t expected = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::uint64_t i = 0; i < space_size(space); ++i) {
    if (evaluated.count(i)) continue;
    const Prediction p = predict_forest(forest, encode(space, config_at(space, i)));
    const double score = lcb(p.mean, p.std_dev, 1.96);
    if (score < best) {
      best = score;
      expected = i;
    }
  }
  CHECK(index_of(space, tuner.ask()) == expected);
}

TEST_CASE("bayesopt with zero kappa and no bootstrap is pure exploitation") {
  const ParamSpace space = build_space(Kernel::lu, "large");
  BayesOptOptions opts;
  opts.kappa = 0.0;
  opts.forest.bootstrap = false;
  const std::uint64_t seed = 23;
  BayesOptTuner tuner(space, seed, opts);
  drive(tuner, 8);

  FeatureMatrix x;
  std::vector<double> y;
  std::set<std::uint64_t> evaluated;
  for (const HistoryEntry& e : tuner.history().entries()) {
    x.push_back(encode(space, e.config));
    y.push_back(std::log(*e.runtime_s));
    evaluated.insert(index_of(space, e.config));
  }
  const Forest forest = fit_forest(x, y, opts.forest, seed);
  std::uint64_t expected = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::uint64_t i = 0; i < space_size(space); ++i) {
    if (evaluated.count(i)) continue;
    const Prediction p = predict_forest(forest, encode(space, config_at(space, i)));
    CHECK(p.std_dev == 0.0);
    if (p.mean < best) {
      best = p.mean;
      expected = i;
    }
  }
  CHECK(index_of(space, tuner.ask()) == expected);
}

TEST_CASE("grid tuner run to exhaustion finds the exact synthetic optimum") {
  const ParamSpace space = build_space(Kernel::lu, "large");
  GridTuner tuner(space, 0);
  double best = std::numeric_limits<double>::infinity();
  Configuration best_config;
  for (int i = 0; i < 400; ++i) {
    const Configuration c = tuner.ask();
    const double t = synthetic_objective(space, c);
    if (t < best) {
      best = t;
      best_config = c;
    }
    tuner.tell(c, t);
  }
  CHECK_THROWS_AS(tuner.ask(), SpaceExhausted);
  CHECK(best == 1.0);
  CHECK(best_config == synthetic_optimum(space));
}
