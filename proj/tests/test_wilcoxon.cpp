#include <doctest.h>

#include <cmath>
#include <vector>

#include "crowdpivot/evaluation.hpp"
#include "crowdpivot/rng.hpp"

using namespace crowdpivot;

namespace {

// Brute force over all 2^n sign assignments: the null distribution of the
// positive-rank sum given the observed |differences|.
double enumeration_tail(const std::vector<double>& abs_diffs, double w_plus) {
  const std::vector<double> ranks = midranks(abs_diffs);
  const std::size_t n = ranks.size();
  std::size_t at_or_above = 0;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (std::size_t{1} << i)) sum += ranks[i];
    }
    if (sum >= w_plus - 1e-9) ++at_or_above;
  }
  return static_cast<double>(at_or_above) / std::ldexp(1.0, static_cast<int>(n));
}

double enumeration_point_mass(const std::vector<double>& abs_diffs, double w_plus) {
  const std::vector<double> ranks = midranks(abs_diffs);
  const std::size_t n = ranks.size();
  std::size_t equal = 0;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (std::size_t{1} << i)) sum += ranks[i];
    }
    if (std::abs(sum - w_plus) < 1e-9) ++equal;
  }
  return static_cast<double>(equal) / std::ldexp(1.0, static_cast<int>(n));
}

std::vector<double> abs_diffs_of(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = std::abs(a[i]) - std::abs(b[i]);
    if (d != 0.0) out.push_back(std::abs(d));
  }
  return out;
}

}  // namespace

TEST_CASE("degenerate and tiny cases") {
  const std::vector<double> same{0.5, -1.0, 2.0};
  const WilcoxonResult res = wilcoxon_signed_rank(same, same);
  CHECK(res.degenerate);
  CHECK(res.p_value == 1.0);
  CHECK(res.n == 0);

  // three pairs, all positive differences: only one of eight assignments
  // reaches the full rank sum
  const std::vector<double> worse{2.0, 3.0, 4.0};
  const std::vector<double> better{1.0, 1.5, 2.0};
  const WilcoxonResult one_sided = wilcoxon_signed_rank(worse, better);
  CHECK(one_sided.exact);
  CHECK(one_sided.n == 3);
  CHECK(one_sided.w_plus == doctest::Approx(6.0));
  CHECK(one_sided.p_value == doctest::Approx(1.0 / 8.0));

  CHECK_THROWS_AS(wilcoxon_signed_rank(std::vector<double>{1.0}, std::vector<double>{}),
                  ParameterError);
  CHECK_THROWS_AS(wilcoxon_signed_rank(std::vector<double>{}, std::vector<double>{}),
                  ParameterError);
}

TEST_CASE("midranks share tie ranks") {
  const std::vector<double> vals{3.0, 1.0, 3.0, 2.0};
  const std::vector<double> ranks = midranks(vals);
  CHECK(ranks[0] == doctest::Approx(3.5));
  CHECK(ranks[1] == doctest::Approx(1.0));
  CHECK(ranks[2] == doctest::Approx(3.5));
  CHECK(ranks[3] == doctest::Approx(2.0));
}

TEST_CASE("exact p-values equal brute-force enumeration for n <= 12") {
  Rng rng(41);
  for (std::size_t n = 1; n <= 12; ++n) {
    for (int rep = 0; rep < 40; ++rep) {
      std::vector<double> a;
      std::vector<double> b;
      for (std::size_t i = 0; i < n; ++i) {
        // half the cases on a coarse grid to generate ties and zeros
        if (rep % 2 == 0) {
          a.push_back(rng.normal(0.3, 1.0));
          b.push_back(rng.normal(0.0, 1.0));
        } else {
          a.push_back(static_cast<double>(rng.below(4)) * 0.5);
          b.push_back(static_cast<double>(rng.below(4)) * 0.5);
        }
      }
      const WilcoxonResult res = wilcoxon_signed_rank(a, b);
      if (res.degenerate) continue;
      CHECK(res.exact);
      const double oracle = enumeration_tail(abs_diffs_of(a, b), res.w_plus);
      CHECK(res.p_value == doctest::Approx(oracle).epsilon(1e-12));
    }
  }
}

TEST_CASE("one-sided complementarity accounts for the observed point mass") {
  Rng rng(42);
  for (int rep = 0; rep < 60; ++rep) {
    const std::size_t n = 2 + rng.below(9);
    std::vector<double> a;
    std::vector<double> b;
    for (std::size_t i = 0; i < n; ++i) {
      a.push_back(rng.normal(0.2, 1.0));
      b.push_back(rng.normal(0.0, 1.0));
    }
    const WilcoxonResult ab = wilcoxon_signed_rank(a, b);
    const WilcoxonResult ba = wilcoxon_signed_rank(b, a);
    if (ab.degenerate) continue;
    const double point_mass = enumeration_point_mass(abs_diffs_of(a, b), ab.w_plus);
    CHECK(ab.p_value + ba.p_value == doctest::Approx(1.0 + point_mass).epsilon(1e-9));
  }
}

TEST_CASE("normal approximation tracks enumeration near the exact cutoff") {
  Rng rng(43);
  std::vector<double> a;
  std::vector<double> b;
  for (std::size_t i = 0; i < 25; ++i) {
    a.push_back(rng.normal(0.8, 1.0));
    b.push_back(rng.normal(0.0, 1.0));
  }
  const WilcoxonResult full = wilcoxon_signed_rank(a, b);
  CHECK_FALSE(full.exact);
  CHECK(full.n == 25);

  for (int subcase = 0; subcase < 5; ++subcase) {
    std::vector<double> sub_a;
    std::vector<double> sub_b;
    std::vector<bool> taken(25, false);
    while (sub_a.size() < 20) {
      const std::size_t i = rng.below(25);
      if (taken[i]) continue;
      taken[i] = true;
      sub_a.push_back(a[i]);
      sub_b.push_back(b[i]);
    }
    const std::vector<double> diffs = abs_diffs_of(sub_a, sub_b);
    const std::vector<double> ranks = midranks(diffs);
    const WilcoxonResult sub = wilcoxon_signed_rank(sub_a, sub_b);
    CHECK(sub.exact);
    const double exact = enumeration_tail(diffs, sub.w_plus);
    const double approx = signed_rank_normal_tail(ranks, sub.w_plus);
    CHECK(sub.p_value == doctest::Approx(exact).epsilon(1e-12));
    CHECK(std::abs(approx - exact) < 0.01);
  }
}

TEST_CASE("exact path switches to the approximation above the limit") {
  Rng rng(44);
  std::vector<double> a;
  std::vector<double> b;
  for (std::size_t i = 0; i < kWilcoxonExactLimit; ++i) {
    a.push_back(rng.normal(0.5, 1.0));
    b.push_back(rng.normal(0.0, 1.0));
  }
  CHECK(wilcoxon_signed_rank(a, b).exact);
  a.push_back(1.0);
  b.push_back(0.25);
  CHECK_FALSE(wilcoxon_signed_rank(a, b).exact);
}
