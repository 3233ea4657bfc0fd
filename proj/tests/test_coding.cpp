#include <doctest.h>

#include <random>

#include "uwbsd/coding.hpp"

using namespace uwbsd::coding;

namespace {

std::vector<Bit> random_bits(std::size_t n, std::mt19937_64& rng) {
  std::vector<Bit> v(n);
  for (auto& b : v) b = static_cast<Bit>(rng() & 1u);
  return v;
}

std::vector<double> strong_llrs(const std::vector<Bit>& coded, double magnitude = 20.0) {
  std::vector<double> llr(coded.size());
  for (std::size_t k = 0; k < coded.size(); ++k) llr[k] = coded[k] ? -magnitude : magnitude;
  return llr;
}

}  // namespace

TEST_CASE("code catalog") {
  const std::uint32_t g0[] = {07, 017, 035, 075, 0171, 0371};
  const std::uint32_t g1[] = {05, 015, 023, 053, 0133, 0247};
  for (int nu = 2; nu <= 7; ++nu) {
    const auto c = ConvCode::max_free_distance(nu);
    CHECK(c.nu == nu);
    CHECK(c.g0 == g0[nu - 2]);
    CHECK(c.g1 == g1[nu - 2]);
    CHECK(c.states() == (std::size_t{1} << nu));
    CHECK_NOTHROW(c.validate());
  }
  CHECK_THROWS_AS(ConvCode::max_free_distance(1), std::invalid_argument);
  CHECK_THROWS_AS(ConvCode::max_free_distance(8), std::invalid_argument);
  CHECK_THROWS_AS((ConvCode{3, 07, 05}.validate()), std::invalid_argument);
}

TEST_CASE("encoder examples") {
  const auto c = ConvCode::max_free_distance(2);
  const std::vector<Bit> one{1};
  const auto out = conv_encode(c, one);
  REQUIRE(out.size() == 6);
  CHECK(out[0] == 1);
  CHECK(out[1] == 1);
  // impulse response of (7,5): 11 10 11
  CHECK(out == std::vector<Bit>{1, 1, 1, 0, 1, 1});

  const std::vector<Bit> zeros(20, 0);
  for (Bit b : conv_encode(c, zeros)) CHECK(b == 0);
}

TEST_CASE("noiseless round trip for every catalog code") {
  std::mt19937_64 rng(31);
  for (int nu = 2; nu <= 7; ++nu) {
    const auto c = ConvCode::max_free_distance(nu);
    for (int n = 0; n < 1000; ++n) {
      const auto info = random_bits(1 + rng() % 60, rng);
      const auto coded = conv_encode(c, info);
      REQUIRE(coded.size() == 2 * (info.size() + nu));
      const auto dec = viterbi_decode(c, strong_llrs(coded));
      REQUIRE(dec.bits == info);
      REQUIRE(conv_encode(c, dec.bits) == coded);
    }
  }
}

TEST_CASE("single strong error is corrected") {
  std::mt19937_64 rng(32);
  for (int nu = 2; nu <= 7; ++nu) {
    const auto c = ConvCode::max_free_distance(nu);
    for (int n = 0; n < 100; ++n) {
      const auto info = random_bits(50, rng);
      auto llr = strong_llrs(conv_encode(c, info));
      llr[rng() % llr.size()] *= -1.0;
      CHECK(viterbi_decode(c, llr).bits == info);
    }
  }
}

TEST_CASE("decisions are invariant under positive LLR scaling") {
  std::mt19937_64 rng(33);
  std::normal_distribution<double> noise(0.0, 1.2);
  const auto c = ConvCode::max_free_distance(4);
  for (int n = 0; n < 200; ++n) {
    const auto info = random_bits(40, rng);
    auto llr = strong_llrs(conv_encode(c, info), 1.0);
    for (double& v : llr) v += noise(rng);
    const auto ref = viterbi_decode(c, llr).bits;
    for (double s : {0.01, 3.0, 250.0}) {
      auto scaled = llr;
      for (double& v : scaled) v *= s;
      CHECK(viterbi_decode(c, scaled).bits == ref);
    }
  }
}

TEST_CASE("degenerate decoder input") {
  const auto c = ConvCode::max_free_distance(3);
  const std::vector<double> zeros(2 * (10 + 3), 0.0);
  const auto r = viterbi_decode(c, zeros);
  CHECK(r.bits.size() == 10);
  CHECK(r.ambiguous);

  const std::vector<Bit> info(10, 1);
  CHECK_FALSE(viterbi_decode(c, strong_llrs(conv_encode(c, info))).ambiguous);

  const std::vector<double> odd(7, 1.0);
  CHECK_THROWS_AS(viterbi_decode(c, odd), std::invalid_argument);
}

TEST_CASE("interleaver") {
  const auto id = Interleaver::identity(8);
  const std::vector<int> v{1, 2, 3, 4, 5, 6, 7, 8};
  CHECK(id.interleave<int>(v) == v);

  const Interleaver a(1000, 7);
  const Interleaver b(1000, 7);
  const Interleaver c(1000, 8);
  CHECK(a.permutation() == b.permutation());
  CHECK(a.permutation() != c.permutation());
  std::vector<bool> hit(1000, false);
  for (auto k : a.permutation()) hit[k] = true;
  CHECK(std::all_of(hit.begin(), hit.end(), [](bool x) { return x; }));

  std::mt19937_64 rng(34);
  std::vector<double> x(1000);
  for (auto& e : x) e = static_cast<double>(rng());
  CHECK(a.deinterleave<double>(a.interleave<double>(x)) == x);
  CHECK(a.interleave<double>(a.deinterleave<double>(x)) == x);

  const std::vector<double> short_input(999);
  CHECK_THROWS_AS(a.interleave<double>(short_input), std::invalid_argument);
  CHECK_THROWS_AS(a.deinterleave<double>(short_input), std::invalid_argument);
}

TEST_CASE("differential mapping") {
  const std::vector<Bit> bits{0, 1, 1, 0};
  CHECK(bits_to_symbols(bits) == std::vector<int>{1, -1, -1, 1});

  CHECK(map_differential(std::vector<int>{1, 1, 1}) == std::vector<int>{1, 1, 1, 1});
  CHECK(map_differential(std::vector<int>{-1, -1}) == std::vector<int>{1, -1, 1});

  std::mt19937_64 rng(35);
  for (int n = 0; n < 100; ++n) {
    std::vector<int> a(1 + rng() % 30);
    for (int& s : a) s = (rng() & 1u) ? 1 : -1;
    const auto b = map_differential(a);
    CHECK(b.size() == a.size() + 1);
    CHECK(b[0] == 1);
    CHECK(differential_decode(b) == a);
  }
  CHECK_THROWS_AS(map_differential(std::vector<int>{1, 0}), std::invalid_argument);
}
