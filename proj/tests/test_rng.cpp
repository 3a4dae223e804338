#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdint>

#include "nrc/rng.hpp"

using nrc::Rng;

TEST_CASE("philox4x32-10 known-answer vectors") {
  // Reference vectors from the Random123 distribution (kat_vectors).
  auto out = Rng::philox4x32({0, 0, 0, 0}, {0, 0});
  CHECK(out[0] == 0x6627e8d5u);
  CHECK(out[1] == 0xe169c58du);
  CHECK(out[2] == 0xbc57ac4cu);
  CHECK(out[3] == 0x9b00dbd8u);

  out = Rng::philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                        {0xffffffffu, 0xffffffffu});
  CHECK(out[0] == 0x408f276du);
  CHECK(out[1] == 0x41c83b0eu);
  CHECK(out[2] == 0xa20bc7c6u);
  CHECK(out[3] == 0x6d5451fdu);

  out = Rng::philox4x32({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                        {0xa4093822u, 0x299f31d0u});
  CHECK(out[0] == 0xd16cfe09u);
  CHECK(out[1] == 0x94fdccebu);
  CHECK(out[2] == 0x5001e420u);
  CHECK(out[3] == 0x24126ea1u);
}

TEST_CASE("identical seeds give identical streams") {
  Rng a(1234), b(1234);
  for (int i = 0; i < 100; ++i) CHECK(a() == b());
}

TEST_CASE("derived streams are independent of sibling order") {
  Rng root(77);
  const std::uint64_t from_left = root.derive(3)();
  Rng root2(77);
  (void)root2.derive(9)();  // touching another child must not matter
  CHECK(root2.derive(3)() == from_left);
}

TEST_CASE("uniform moments") {
  Rng rng(42);
  const long samples = 200000;
  double sum = 0.0, sum_sq = 0.0;
  for (long i = 0; i < samples; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    sum += u;
    sum_sq += u * u;
  }
  const double mean = sum / samples;
  // sd(mean) = 1/sqrt(12 N)
  CHECK(std::abs(mean - 0.5) < 4.0 / std::sqrt(12.0 * samples));
  const double second = sum_sq / samples;
  CHECK(std::abs(second - 1.0 / 3.0) < 4.0 * 0.3 / std::sqrt(samples));
}

TEST_CASE("normal moments") {
  Rng rng(4242);
  const long samples = 200000;
  double sum = 0.0, sum_sq = 0.0, sum_4 = 0.0;
  for (long i = 0; i < samples; ++i) {
    const double x = rng.normal();
    sum += x;
    sum_sq += x * x;
    sum_4 += x * x * x * x;
  }
  CHECK(std::abs(sum / samples) < 4.0 / std::sqrt(double(samples)));
  CHECK(std::abs(sum_sq / samples - 1.0) <
        4.0 * std::sqrt(2.0 / samples));
  CHECK(std::abs(sum_4 / samples - 3.0) < 4.0 * std::sqrt(96.0 / samples));
}

TEST_CASE("uniform_below covers the range without bias") {
  Rng rng(7);
  const std::uint64_t bound = 11520;
  std::vector<long> counts(16, 0);
  const long samples = 160000;
  for (long i = 0; i < samples; ++i) {
    const std::uint64_t v = rng.uniform_below(bound);
    REQUIRE(v < bound);
    ++counts[v % 16];
  }
  for (long c : counts) {
    const double expect = samples / 16.0;
    CHECK(std::abs(c - expect) < 5.0 * std::sqrt(expect));
  }
}
