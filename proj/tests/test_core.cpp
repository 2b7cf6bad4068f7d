#include <doctest.h>

#include <algorithm>
#include <limits>

#include "crowdpivot/core.hpp"
#include "crowdpivot/rng.hpp"
#include "test_helpers.hpp"

using namespace crowdpivot;

TEST_CASE("summarize computes means, gap and size") {
  Panel p{{1, 2, 3}, {1, 2, 3}, {}};
  PanelSummary s = summarize(p);
  CHECK(s.f_bar == doctest::Approx(2.0));
  CHECK(s.g_bar == doctest::Approx(2.0));
  CHECK(s.gap == 0.0);
  CHECK(s.size == 3);

  PanelSummary s2 = summarize(Panel{{10, 10}, {8, 8}, {}});
  CHECK(s2.f_bar == doctest::Approx(10.0));
  CHECK(s2.g_bar == doctest::Approx(8.0));
  CHECK(s2.gap == doctest::Approx(2.0));
  CHECK(s2.size == 2);
}

TEST_CASE("summarize rejects empty and malformed panels") {
  CHECK_THROWS_AS(summarize(Panel{}), ValidationError);
  CHECK_THROWS_AS(summarize(Panel{{1, 2, 3}, {1, 2}, {}}), ValidationError);
  CHECK_THROWS_AS(summarize(Panel{{1, std::numeric_limits<double>::quiet_NaN()}, {1, 2}, {}}),
                  ValidationError);
  CHECK_THROWS_AS(summarize(Panel{{1, 2}, {1, std::numeric_limits<double>::infinity()}, {}}),
                  ValidationError);
  CHECK_THROWS_AS(validate_panel(Panel{{1, 2}, {1, 2}, {"a"}}), ValidationError);
}

TEST_CASE("validate_trial checks truth and unit range") {
  Trial t{"t1", Panel{{0.2, 0.4}, {0.3, 0.3}, {}}, 0.5, TaskKind::Continuous};
  CHECK_NOTHROW(validate_trial(t));

  t.kind = TaskKind::UnitInterval;
  CHECK_NOTHROW(validate_trial(t));
  t.truth = 1.3;
  CHECK_THROWS_AS(validate_trial(t), ValidationError);
  t.truth = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(validate_trial(t), ValidationError);

  Trial mismatch{"t2", Panel{{1, 2, 3}, {1, 2}, {}}, 0.5, TaskKind::Continuous};
  CHECK_THROWS_AS(validate_trial(mismatch), ValidationError);
}

TEST_CASE("validate_experiment_set rejects mixed kinds and empty sets") {
  ExperimentSet set;
  set.name = "e";
  CHECK_THROWS_AS(validate_experiment_set(set), ValidationError);

  set.trials.push_back({"a", Panel{{0.5}, {0.5}, {}}, 0.5, TaskKind::UnitInterval});
  set.trials.push_back({"b", Panel{{0.5}, {0.5}, {}}, 0.5, TaskKind::Continuous});
  CHECK_THROWS_AS(validate_experiment_set(set), ValidationError);
  set.trials[1].kind = TaskKind::UnitInterval;
  CHECK_NOTHROW(validate_experiment_set(set));
}

TEST_CASE("summarize is permutation invariant") {
  Rng rng(11);
  for (int rep = 0; rep < 200; ++rep) {
    Panel p = testing::random_panel(rng, 2, 30);
    PanelSummary before = summarize(p);

    // shuffle judges, keeping (f, g) pairs aligned
    for (std::size_t i = p.size(); i > 1; --i) {
      const std::size_t j = rng.below(i);
      std::swap(p.f[i - 1], p.f[j]);
      std::swap(p.g[i - 1], p.g[j]);
    }
    PanelSummary after = summarize(p);
    CHECK(after.f_bar == doctest::Approx(before.f_bar).epsilon(1e-12));
    CHECK(after.g_bar == doctest::Approx(before.g_bar).epsilon(1e-12));
    CHECK(after.size == before.size);
  }
}

TEST_CASE("summarize gap is zero when f == g and shift invariant") {
  Rng rng(12);
  for (int rep = 0; rep < 200; ++rep) {
    Panel p = testing::random_panel(rng, 1, 30);
    Panel same = p;
    same.g = same.f;
    CHECK(summarize(same).gap == 0.0);

    const double c = rng.normal(0.0, 100.0);
    Panel shifted = p;
    for (double& x : shifted.f) x += c;
    for (double& x : shifted.g) x += c;
    PanelSummary a = summarize(p);
    PanelSummary b = summarize(shifted);
    CHECK(b.f_bar == doctest::Approx(a.f_bar + c).epsilon(1e-9));
    CHECK(b.g_bar == doctest::Approx(a.g_bar + c).epsilon(1e-9));
    CHECK(b.gap == doctest::Approx(a.gap).epsilon(1e-9).scale(1.0));
  }
}
