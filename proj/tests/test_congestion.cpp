#include <random>
#include <vector>

#include "doctest.h"
#include "leosim/congestion.hpp"
#include "leosim/traffic.hpp"

using namespace leosim;

namespace {

using L = CongestionLabel;

// Feeds evenly spaced arrivals at `rate` over [t0, t1) and collects notifications.
void feed(NodeCongestionState& s, const CongestionConfig& cfg, double rate, double t0, double t1,
          std::vector<L>& notes) {
  const double gap = 1.0 / rate;
  for (double t = t0; t < t1; t += gap) {
    s.record_arrival(t, cfg);
    if (auto n = s.observe(cfg)) notes.push_back(*n);
  }
}

}  // namespace

TEST_CASE("classification boundaries") {
  const CongestionConfig cfg;
  CHECK(classify(0.0, cfg) == L::Idle);
  CHECK(classify(249.9, cfg) == L::Idle);
  CHECK(classify(250.0, cfg) == L::Transition);
  CHECK(classify(300.0, cfg) == L::Transition);
  CHECK(classify(450.0, cfg) == L::Transition);
  CHECK(classify(450.1, cfg) == L::Busy);
}

TEST_CASE("only Idle and Busy transitions are broadcast") {
  CHECK_FALSE(maybe_notify(L::Idle, L::Idle));
  CHECK_FALSE(maybe_notify(L::Idle, L::Transition));
  CHECK(maybe_notify(L::Idle, L::Busy) == L::Busy);
  CHECK_FALSE(maybe_notify(L::Busy, L::Busy));
  CHECK_FALSE(maybe_notify(L::Busy, L::Transition));
  CHECK(maybe_notify(L::Busy, L::Idle) == L::Idle);
}

TEST_CASE("hysteresis over a load ramp") {
  const CongestionConfig cfg;
  NodeCongestionState s;
  std::vector<L> notes;

  feed(s, cfg, 100.0, 0.0, 2.0, notes);
  CHECK(notes.empty());
  CHECK(s.label() == L::Idle);

  feed(s, cfg, 300.0, 2.0, 4.0, notes);
  CHECK(notes.empty());
  CHECK(s.label() == L::Transition);
  CHECK_FALSE(s.busy());

  feed(s, cfg, 600.0, 4.0, 6.0, notes);
  REQUIRE(notes.size() == 1);
  CHECK(notes[0] == L::Busy);
  CHECK(s.busy());

  // Falling back into Transition keeps the Busy broadcast in force.
  feed(s, cfg, 300.0, 6.0, 8.0, notes);
  CHECK(notes.size() == 1);
  CHECK(s.label() == L::Transition);
  CHECK(s.busy());

  feed(s, cfg, 100.0, 8.0, 10.0, notes);
  REQUIRE(notes.size() == 2);
  CHECK(notes[1] == L::Idle);
  CHECK_FALSE(s.busy());
}

TEST_CASE("notifications alternate under random load") {
  const CongestionConfig cfg;
  NodeCongestionState s;
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> rate(50.0, 800.0);
  std::vector<L> notes;
  double t = 0.0;
  for (int phase = 0; phase < 60; ++phase) {
    const double r = rate(rng);
    feed(s, cfg, r, t, t + 0.7, notes);
    t += 0.7;
  }
  REQUIRE(notes.size() >= 2);
  CHECK(notes.front() == L::Busy);
  for (std::size_t i = 1; i < notes.size(); ++i) CHECK(notes[i] != notes[i - 1]);
  CHECK(s.busy() == (notes.back() == L::Busy));
}

TEST_CASE("arrivals leave the window as time advances") {
  CongestionConfig cfg;
  cfg.window = 0.5;
  NodeCongestionState s;
  for (int i = 0; i < 10; ++i) s.record_arrival(0.01 * i, cfg);
  CHECK(s.lambda() == doctest::Approx(20.0));
  s.advance(0.525, cfg);
  CHECK(s.lambda() == doctest::Approx(14.0));
  s.advance(10.0, cfg);
  CHECK(s.lambda() == 0.0);
}

TEST_CASE("windowed estimate tracks a Poisson rate") {
  const CongestionConfig cfg;
  Rng rng(99);
  NodeCongestionState s;
  double t = 0.0;
  double next_sample = 2.0;
  int samples = 0;
  double sum = 0.0;
  while (t < 200.0) {
    t += rng.exponential(400.0);
    s.record_arrival(t, cfg);
    if (t >= next_sample) {
      sum += s.lambda();
      ++samples;
      next_sample += 1.0;
    }
  }
  REQUIRE(samples > 0);
  // Single one-second windows have sd 20; the average over ~200 is far tighter.
  CHECK(sum / samples == doctest::Approx(400.0).epsilon(0.02));
  CHECK(s.lambda() == doctest::Approx(400.0).epsilon(0.15));
}

TEST_CASE("congestion config validation") {
  CongestionConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.alpha = 500.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.window = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}
