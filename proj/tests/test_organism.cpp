#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oxisim/organism.hpp"

using namespace oxisim;

namespace {

Schedule random_schedule(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> gap(0, 120), len(1, 180);
  std::uniform_real_distribution<double> inten(0.0, 5.0);
  Schedule s;
  int m = gap(rng);
  int n = 0;
  while (m < kMinutesPerDay) {
    const int d = std::min(len(rng), kMinutesPerDay - m);
    s.activities.push_back({"act" + std::to_string(n++), m, d, inten(rng)});
    m += d + gap(rng);
  }
  return s;
}

OrganismConfig random_config(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return {60.0 * u(rng), 5000.0 * u(rng), 60.0 * u(rng), 3.0 * u(rng), 30000.0};
}

}  // namespace

TEST(PositiveRoot, Examples) {
  // sqrt(240001) = 489.8989691762986349...; (sqrt - 1) / 2
  EXPECT_NEAR(positive_root(30000.0), 244.44948458814932, 1e-9);
  EXPECT_NEAR(positive_root(30000.0), 244.449, 1e-3);
  EXPECT_EQ(positive_root(0.0), 0.0);
  EXPECT_EQ(positive_root(1.0), 1.0);
  EXPECT_THROW(positive_root(-1.0), DomainError);
  EXPECT_THROW(positive_root(NAN), DomainError);
  EXPECT_THROW(positive_root(INFINITY), DomainError);
}

TEST(TicksToThreshold, Examples) {
  EXPECT_EQ(ticks_to_threshold(30000.0), 245);
  EXPECT_EQ(ticks_to_threshold(3.0), 2);
  EXPECT_EQ(ticks_to_threshold(0.0), 0);
  EXPECT_THROW(ticks_to_threshold(-3.0), DomainError);
}

TEST(TicksToThreshold, BruteForceUpToOneMillion) {
  std::int64_t n = 0, sum = 0;
  for (std::int64_t s = 0; s <= 1'000'000; ++s) {
    while (sum < s) sum += ++n;
    ASSERT_EQ(ticks_to_threshold(static_cast<double>(s)), n) << "S=" << s;
  }
  // Non-integer loads between triangular numbers.
  EXPECT_EQ(ticks_to_threshold(0.5), 1);
  EXPECT_EQ(ticks_to_threshold(3.0001), 3);
  EXPECT_EQ(ticks_to_threshold(29890.0), 244);
  EXPECT_EQ(ticks_to_threshold(29890.5), 245);
}

TEST(StepMinute, RestWithZeroProduction) {
  const OrganismConfig cfg{0.0, 100.0, 5.0, 1.0, 30000.0};
  const auto [next, rec] = step_minute({0, 0.0, 50.0, 0}, cfg, Schedule{});
  EXPECT_EQ(rec.dead, 0);
  EXPECT_EQ(rec.activity, "rest");
  EXPECT_EQ(next.antioxidant_pool, 55.0);
  EXPECT_EQ(next.minute, 1);
}

TEST(StepMinute, KillSpendsRadicals) {
  const OrganismConfig cfg{10.0, 100.0, 0.0, 1.0, 30000.0};
  const auto [next, rec] = step_minute({7, 0.0, 4.0, 0}, cfg, Schedule{});
  EXPECT_EQ(rec.production, 10.0);
  EXPECT_EQ(rec.neutralized, 4.0);
  EXPECT_EQ(rec.dead, 6);
  EXPECT_EQ(rec.spent, 6.0);
  EXPECT_EQ(next.radical_pool, 0.0);
  EXPECT_EQ(next.antioxidant_pool, 0.0);
  EXPECT_EQ(next.cumulative_dead, 6);
}

TEST(StepMinute, ActivityRampIsTriangular) {
  const OrganismConfig cfg{0.0, 0.0, 0.0, 0.0, 30000.0};
  const Schedule sched{{{"run", 100, 10, 2.0}}};
  OrganismState s{100, 0.0, 0.0, 0};
  double cumulative = 0.0;
  for (int j = 1; j <= 3; ++j) {
    auto [next, rec] = step_minute(s, cfg, sched);
    EXPECT_EQ(rec.activity, "run");
    EXPECT_EQ(rec.production, 2.0 * j);
    cumulative += rec.production;
    s = next;
  }
  EXPECT_EQ(cumulative, 12.0);
  EXPECT_EQ(cumulative, 2.0 * (3 * 4 / 2));
}

TEST(StepMinute, RemainderCarriesWhenNothingDies) {
  const OrganismConfig cfg{0.4, 0.0, 0.0, 1.0, 30000.0};
  OrganismState s{0, 0.0, 0.0, 0};
  auto r1 = step_minute(s, cfg, Schedule{});
  EXPECT_EQ(r1.record.dead, 0);
  EXPECT_DOUBLE_EQ(r1.state.radical_pool, 0.4);
  auto r2 = step_minute(r1.state, cfg, Schedule{});
  auto r3 = step_minute(r2.state, cfg, Schedule{});
  EXPECT_EQ(r3.record.dead, 1);
  EXPECT_EQ(r3.state.radical_pool, 0.0);
}

TEST(StepMinute, EndOfDay) {
  EXPECT_THROW(step_minute({1440, 0, 0, 0}, OrganismConfig{}, Schedule{}), EndOfDay);
}

TEST(Schedule, Validation) {
  Schedule ok{{{"a", 0, 10, 1.0}, {"b", 10, 5, 0.0}}};
  EXPECT_NO_THROW(ok.validate());
  EXPECT_EQ(ok.active_at(9)->name, "a");
  EXPECT_EQ(ok.active_at(10)->name, "b");
  EXPECT_EQ(ok.active_at(15), nullptr);

  Schedule overlap{{{"a", 0, 10, 1.0}, {"b", 9, 5, 1.0}}};
  EXPECT_THROW(overlap.validate(), ConfigError);
  Schedule unsorted{{{"a", 20, 10, 1.0}, {"b", 0, 5, 1.0}}};
  EXPECT_THROW(unsorted.validate(), ConfigError);
  Schedule late{{{"a", 1430, 11, 1.0}}};
  EXPECT_THROW(late.validate(), ConfigError);
  Schedule empty_len{{{"a", 10, 0, 1.0}}};
  EXPECT_THROW(empty_len.validate(), ConfigError);
  Schedule negative{{{"a", 10, 5, -1.0}}};
  EXPECT_THROW(negative.validate(), ConfigError);
  Schedule comma{{{"a,b", 10, 5, 1.0}}};
  EXPECT_THROW(comma.validate(), ConfigError);
}

TEST(SimulateDay, RestWithAmpleAntioxidantsKillsNothing) {
  const OrganismConfig cfg{30.0, 6000.0, 34.0, 1431.0, 30000.0};
  const auto rep = simulate_day(cfg, Schedule{}, OrganismState::rested(cfg));
  EXPECT_EQ(rep.minutes.size(), 1440u);
  EXPECT_EQ(rep.total_dead, 0);
  EXPECT_EQ(rep.mean_dead_per_minute, 0.0);
  EXPECT_FALSE(rep.threshold_minute);
}

TEST(SimulateDay, RejectsBadInput) {
  const OrganismConfig cfg{30.0, 6000.0, 34.0, 1.0, 30000.0};
  Schedule overlap{{{"a", 0, 10, 1.0}, {"b", 5, 5, 1.0}}};
  EXPECT_THROW(simulate_day(cfg, overlap, OrganismState::rested(cfg)), ConfigError);
  EXPECT_THROW(simulate_day(cfg, Schedule{}, {3, 0.0, 10.0, 0}), ConfigError);
  EXPECT_THROW(simulate_day(cfg, Schedule{}, {0, 0.0, 7000.0, 0}), ConfigError);
  OrganismConfig bad = cfg;
  bad.kill_ratio = -1.0;
  EXPECT_THROW(simulate_day(bad, Schedule{}, OrganismState::rested(cfg)), ConfigError);
}

TEST(SimulateDay, ThresholdMarkerMatchesTriangularCount) {
  // Unit ramp all day, no antioxidants, nothing dies so the marker sees the
  // raw triangular load 1 + 2 + ... + n.
  const OrganismConfig cfg{0.0, 0.0, 0.0, 0.0, 30000.0};
  const Schedule sched{{{"ramp", 0, 1440, 1.0}}};
  const auto rep = simulate_day(cfg, sched, OrganismState::rested(cfg));
  ASSERT_TRUE(rep.threshold_minute);
  EXPECT_EQ(*rep.threshold_minute, ticks_to_threshold(30000.0));
  EXPECT_EQ(*rep.threshold_minute, 245);
}

TEST(SimulateDay, Deterministic) {
  std::mt19937_64 rng(17);
  const auto cfg = random_config(rng);
  const auto sched = random_schedule(rng);
  const auto a = simulate_day(cfg, sched, OrganismState::rested(cfg));
  const auto b = simulate_day(cfg, sched, OrganismState::rested(cfg));
  EXPECT_EQ(a, b);
}

TEST(SimulateDay, PoolsLedgerAndMonotoneDeaths) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const auto cfg = random_config(rng);
    const auto sched = random_schedule(rng);
    const auto rep = simulate_day(cfg, sched, OrganismState::rested(cfg));
    double carry = 0.0;
    std::int64_t prev_cum = 0;
    for (const auto& m : rep.minutes) {
      ASSERT_GE(m.radical_pool, 0.0);
      ASSERT_GE(m.antioxidant_pool, 0.0);
      ASSERT_LE(m.antioxidant_pool, cfg.antioxidant_capacity);
      ASSERT_GE(m.cumulative_dead, prev_cum);
      ASSERT_EQ(m.dead, static_cast<std::int64_t>(
                            std::floor(cfg.kill_ratio * (m.spent + m.radical_pool))));
      // In = neutralised + spent + carried over.
      const double in = carry + m.production;
      ASSERT_NEAR(in, m.neutralized + m.spent + m.radical_pool, 1e-9 * std::max(1.0, in));
      if (m.dead > 0) ASSERT_EQ(m.radical_pool, 0.0);
      else ASSERT_EQ(m.spent, 0.0);
      carry = m.radical_pool;
      prev_cum = m.cumulative_dead;
    }
  }
}

TEST(SimulateDay, NoKillRatioNoDeaths) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    auto cfg = random_config(rng);
    cfg.kill_ratio = 0.0;
    const auto rep = simulate_day(cfg, random_schedule(rng), OrganismState::rested(cfg));
    EXPECT_EQ(rep.total_dead, 0);
  }
}

TEST(SimulateDay, MoreIntensityNeverFewerDeaths) {
  std::mt19937_64 rng(31337);
  std::uniform_real_distribution<double> bump(0.0, 3.0);
  for (int trial = 0; trial < 300; ++trial) {
    const auto cfg = random_config(rng);
    const auto sched = random_schedule(rng);
    if (sched.activities.empty()) continue;
    const auto base = simulate_day(cfg, sched, OrganismState::rested(cfg));
    for (std::size_t i = 0; i < sched.activities.size(); ++i) {
      Schedule hotter = sched;
      hotter.activities[i].intensity += bump(rng);
      const auto rep = simulate_day(cfg, hotter, OrganismState::rested(cfg));
      ASSERT_GE(rep.total_dead, base.total_dead) << "trial " << trial << " activity " << i;
    }
  }
}

TEST(SimulateDays, CarriesPoolsOver) {
  const OrganismConfig cfg{40.0, 6000.0, 34.0, 1.0, 30000.0};
  const auto days = simulate_days(cfg, Schedule{}, OrganismState::rested(cfg), 3);
  ASSERT_EQ(days.size(), 3u);
  EXPECT_EQ(days[1].minutes.front().minute, 0);
  // Day 2 starts from day 1's depleted pool, so it loses more cells.
  EXPECT_GT(days[1].total_dead, days[0].total_dead);
  EXPECT_EQ(days[2].final_state.cumulative_dead,
            days[0].total_dead + days[1].total_dead + days[2].total_dead);
}
