#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "oracle.hpp"
#include "uwbsd/detect.hpp"
#include "uwbsd/metrics.hpp"
#include "uwbsd/search_tree.hpp"

using namespace uwbsd;
using detect::SearchTree;

namespace {

AcrMatrix worked_instance() {
  AcrMatrix z(2, 1.0);
  z.set(0, 1, 1.0);
  z.set(0, 2, -0.5);
  z.set(1, 2, 2.0);
  return z;
}

std::vector<int> as_vector(const Hypothesis& h) {
  std::vector<int> v;
  for (std::size_t i = 1; i <= h.size(); ++i) v.push_back(h.at(i));
  return v;
}

}  // namespace

TEST_CASE("search tree enumeration") {
  const auto z = worked_instance();
  SearchTree tree(z);

  auto s = tree.find_best(1);
  CHECK(s.depth == 1);
  CHECK(tree.symbol(1) == 1);
  CHECK(s.delta == doctest::Approx(0.0));
  CHECK(tree.count(1) == 1);

  s = tree.find_next(1);
  CHECK(s.depth == 1);
  CHECK(tree.symbol(1) == -1);
  CHECK(s.delta == doctest::Approx(2.0));
  CHECK(tree.count(1) == 2);

  CHECK(tree.find_next(1).depth == 0);
}

TEST_CASE("search tree branch metrics agree with the metric definition") {
  std::mt19937_64 rng(21);
  for (int n = 0; n < 300; ++n) {
    const std::size_t L = 1 + rng() % 8;
    const auto z = oracle::random_matrix(L, rng);
    SearchTree tree(z);
    for (std::size_t i = 1; i <= L; ++i) {
      const auto best = tree.find_best(i);
      CHECK(best.delta == doctest::Approx(branch_metric(z, tree.path(), i)).epsilon(1e-12));
      const auto next = tree.find_next(i);
      REQUIRE(next.depth == i);
      CHECK(next.delta == doctest::Approx(branch_metric(z, tree.path(), i)).epsilon(1e-12));
      CHECK(best.delta <= next.delta + 1e-12);
    }
  }
}

TEST_CASE("search tree ascends past exhausted levels") {
  AcrMatrix z(3, 1.0);
  for (std::size_t i = 1; i <= 3; ++i)
    for (std::size_t l = 0; l < i; ++l) z.set(l, i, 1.0);
  SearchTree tree(z);
  tree.find_best(1);
  tree.find_best(2);
  tree.find_best(3);
  CHECK(tree.find_next(3).depth == 3);
  // depth 3 exhausted: next sibling is at depth 2
  const auto s = tree.find_next(3);
  CHECK(s.depth == 2);
  CHECK(tree.symbol(2) == -1);
  CHECK(tree.node_id(2) != tree.node_id(1));
}

TEST_CASE("node ids are unique over the full tree") {
  const std::size_t L = 6;
  AcrMatrix z(L, 1.0);
  SearchTree tree(z);
  std::set<std::uint64_t> seen;
  // full depth-first traversal visiting every node once
  std::size_t i = 1;
  tree.find_best(1);
  seen.insert(tree.node_id(1));
  while (true) {
    if (i < L) {
      ++i;
      tree.find_best(i);
    } else {
      const auto s = tree.find_next(i);
      if (s.depth == 0) break;
      i = s.depth;
    }
    CHECK(seen.insert(tree.node_id(i)).second);
  }
  CHECK(seen.size() == max_tree_nodes(L));
}

TEST_CASE("dd examples") {
  AcrMatrix z(1, 0.35);
  z.set(0, 1, -0.7);
  CHECK(detect::dd_hard(z).at(1) == -1);
  CHECK(detect::dd_soft(z)[0] == doctest::Approx(-2.0));

  z.set(0, 1, 0.0);
  CHECK(detect::dd_hard(z).at(1) == 1);
  CHECK(detect::dd_soft(z)[0] == 0.0);

  AcrMatrix three(3, 1.0);
  three.set(0, 1, 0.3);
  three.set(1, 2, -0.2);
  three.set(2, 3, 1.1);
  CHECK(detect::dd_hard(three) == Hypothesis{+1, -1, +1});

  AcrMatrix silent(1, 0.0);
  CHECK_THROWS_AS(detect::dd_soft(silent), std::invalid_argument);
}

TEST_CASE("stopping radius") {
  CHECK(detect::stopping_radius(worked_instance()) == doctest::Approx(1.0));
  AcrMatrix one(1, 1.0);
  one.set(0, 1, 3.0);
  CHECK(detect::stopping_radius(one) == doctest::Approx(3.0));
  AcrMatrix zero(2, 1.0);
  zero.set(0, 1, 1.0);
  zero.set(1, 2, 1.0);
  CHECK(detect::stopping_radius(zero) == 0.0);
}

TEST_CASE("exhaustive detector worked instance") {
  const auto r = detect::msdd_exhaustive(worked_instance());
  CHECK(r.best == Hypothesis{+1, +1});
  CHECK(r.lambda_best == doctest::Approx(1.0));
  CHECK(r.lambda_counter[0] == doctest::Approx(2.0));
  CHECK(r.lambda_counter[1] == doctest::Approx(4.0));
  CHECK(r.llr[0] == doctest::Approx(1.0 / 3.0));
  CHECK(r.llr[1] == doctest::Approx(1.0));
}

TEST_CASE("exhaustive detector guards and trivial cases") {
  AcrMatrix big(detect::kExhaustiveMaxBlockSize + 1, 1.0);
  CHECK_THROWS_AS(detect::msdd_exhaustive(big), std::invalid_argument);

  AcrMatrix pos(4, 1.0);
  for (std::size_t i = 1; i <= 4; ++i)
    for (std::size_t l = 0; l < i; ++l) pos.set(l, i, 0.5);
  const auto r = detect::msdd_exhaustive(pos);
  CHECK(r.best == Hypothesis(4));
  CHECK(r.lambda_best == 0.0);
}

TEST_CASE("exhaustive detector matches the brute-force oracle") {
  std::mt19937_64 rng(22);
  for (int n = 0; n < 300; ++n) {
    const std::size_t L = 1 + rng() % 8;
    const auto z = oracle::random_matrix(L, rng);
    const auto lib = detect::msdd_exhaustive(z);
    const auto ref = oracle::exhaustive(z);
    CHECK(lib.lambda_best == doctest::Approx(ref.lambda_best).epsilon(1e-12));
    for (std::size_t i = 0; i < L; ++i) CHECK(std::abs(lib.llr[i] - ref.llr[i]) <= 1e-9);
  }
}

TEST_CASE("sosd worked instance") {
  const auto z = worked_instance();
  const auto r = detect::sosd(z, DetectorConfig{2, kInfinity, false});
  CHECK(r.hard == Hypothesis{+1, +1});
  CHECK(r.lambda_best == doctest::Approx(1.0));
  CHECK(r.llr[0] == doctest::Approx(1.0 / 3.0));
  CHECK(r.llr[1] == doctest::Approx(1.0));
  CHECK_FALSE(r.terminated_early);
  CHECK(r.nodes_visited <= max_tree_nodes(2));

  const auto clipped = detect::sosd(z, DetectorConfig{2, 0.2, false});
  CHECK(clipped.llr[0] == doctest::Approx(0.2));
  CHECK(clipped.llr[1] == doctest::Approx(0.2));

  const auto stop = detect::sosd(z, DetectorConfig{2, kInfinity, true});
  CHECK(stop.terminated_early);
  CHECK(stop.hard == Hypothesis{+1, +1});
  CHECK(stop.lambda_best == doctest::Approx(1.0));
}

TEST_CASE("sosd argument checks") {
  const auto z = worked_instance();
  CHECK_THROWS_AS(detect::sosd(z, DetectorConfig{3, 1.0, false}), std::invalid_argument);
  AcrMatrix silent(2, 0.0);
  CHECK_THROWS_AS(detect::sosd(silent, DetectorConfig{2, 1.0, false}), std::invalid_argument);
  CHECK_NOTHROW(detect::hosd(silent, DetectorConfig{2, 0.0, false}));
}

TEST_CASE("sosd matches the oracle on noisy link-like matrices") {
  std::mt19937_64 rng(23);
  for (int n = 0; n < 400; ++n) {
    const std::size_t L = 1 + rng() % 10;
    const auto z = oracle::noisy_matrix(L, rng, 0.2 + 0.8 * (n % 5) / 4.0);
    const auto ref = oracle::exhaustive(z);
    detect::SearchTrace trace;
    const auto r = detect::sosd(z, DetectorConfig{L, kInfinity, false}, &trace);
    CHECK(r.lambda_best == doctest::Approx(ref.lambda_best).epsilon(1e-12));
    for (std::size_t i = 0; i < L; ++i) {
      CHECK(std::abs(r.llr[i] - ref.llr[i]) <= 1e-9);
      CHECK_FALSE(r.unresolved[i]);
      if (r.llr[i] != 0.0) CHECK(sign_of(r.llr[i]) == r.hard.at(i + 1));
    }
    CHECK(trace.visited.size() == r.nodes_visited);
    std::set<std::uint64_t> unique(trace.visited.begin(), trace.visited.end());
    CHECK(unique.size() == trace.visited.size());
  }
}

TEST_CASE("sosd counterhypotheses stay above the best metric") {
  std::mt19937_64 rng(24);
  for (int n = 0; n < 300; ++n) {
    const std::size_t L = 1 + rng() % 9;
    const auto z = oracle::random_matrix(L, rng);
    for (double llr_max : {kInfinity, 1.0, 0.1}) {
      const auto r = detect::sosd(z, DetectorConfig{L, llr_max, (n & 1) != 0});
      for (double c : r.lambda_counter) CHECK(c >= r.lambda_best);
    }
  }
}

TEST_CASE("hosd equals sosd with zero clipping") {
  std::mt19937_64 rng(25);
  for (int n = 0; n < 300; ++n) {
    const std::size_t L = 1 + rng() % 10;
    const auto z = oracle::random_matrix(L, rng);
    for (bool stopping : {false, true}) {
      const auto h = detect::hosd(z, DetectorConfig{L, kInfinity, stopping});
      const auto s = detect::sosd(z, DetectorConfig{L, 0.0, stopping});
      CHECK(h.best == s.hard);
      CHECK(h.lambda_best == s.lambda_best);
      CHECK(h.nodes_visited == s.nodes_visited);
      for (double v : s.llr) CHECK(v == 0.0);
    }
  }
}

TEST_CASE("stopping with unresolved counterhypotheses reports a flagged finite LLR") {
  // All entries equal: the first leaf is a perfect match and stops the search
  // before any counterhypothesis is seen.
  AcrMatrix z(3, 1.0);
  for (std::size_t i = 1; i <= 3; ++i)
    for (std::size_t l = 0; l < i; ++l) z.set(l, i, 1.0);
  const auto r = detect::sosd(z, DetectorConfig{3, kInfinity, true});
  CHECK(r.terminated_early);
  CHECK(r.nodes_visited == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(r.unresolved[i]);
    CHECK(std::isfinite(r.llr[i]));
    CHECK(r.llr[i] > 0.0);
  }
  const auto clipped = detect::sosd(z, DetectorConfig{3, 2.0, true});
  for (double v : clipped.llr) CHECK(v == doctest::Approx(2.0));
}

TEST_CASE("full enumeration is attainable") {
  // Instances whose leaves arrive in strictly decreasing metric order, so
  // every leaf becomes the new best and nothing is ever pruned.
  const std::vector<std::vector<double>> columns = {
      {-0.732, -0.727, -0.098},
      {-0.747, 0.152, -0.608, -0.316, -0.326, -0.679},
      {0.359, -0.069, 0.134, 0.408, 0.112, 0.030, -0.120, -0.743, -0.232, -0.920},
  };
  for (std::size_t L = 2; L <= 4; ++L) {
    AcrMatrix z(L, 1.0);
    std::size_t k = 0;
    for (std::size_t i = 1; i <= L; ++i)
      for (std::size_t l = 0; l < i; ++l) z.set(l, i, columns[L - 2][k++]);
    detect::SearchTrace trace;
    const auto r = detect::sosd(z, DetectorConfig{L, kInfinity, false}, &trace);
    CHECK(r.nodes_visited == max_tree_nodes(L));
    CHECK(std::set<std::uint64_t>(trace.visited.begin(), trace.visited.end()).size() ==
          max_tree_nodes(L));
  }
}

TEST_CASE("L = 1 reductions") {
  std::mt19937_64 rng(26);
  for (int n = 0; n < 200; ++n) {
    const auto z = oracle::random_matrix(1, rng);
    const auto r = detect::sosd(z, DetectorConfig{1, kInfinity, false});
    CHECK(std::abs(r.llr[0] - detect::dd_soft(z)[0]) <= 1e-12 * std::max(1.0, std::abs(r.llr[0])));
    CHECK(r.hard == detect::dd_hard(z));
    CHECK(as_vector(r.hard)[0] == sign_of(z(0, 1)));
  }
}
