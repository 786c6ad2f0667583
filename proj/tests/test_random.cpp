#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <set>

#include "ftcollapse/random.hpp"

using namespace ftcollapse;

// Known-answer vectors of the Random123 distribution (kat_vectors, philox4x32 10 rounds).
TEST_CASE("Philox4x32-10 known answers") {
  using C = Philox4x32::Counter;
  using K = Philox4x32::Key;
  CHECK(Philox4x32::generate(C{0, 0, 0, 0}, K{0, 0}) == C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(Philox4x32::generate(C{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, K{0xffffffff, 0xffffffff}) ==
        C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(Philox4x32::generate(C{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, K{0xa4093822, 0x299f31d0}) ==
        C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams are reproducible and distinct") {
  RandomStream a({42, 7}, StreamPurpose::kBrownian);
  RandomStream b({42, 7}, StreamPurpose::kBrownian);
  RandomStream c({42, 8}, StreamPurpose::kBrownian);
  RandomStream d({42, 7}, StreamPurpose::kBridge);
  bool differs_path = false, differs_purpose = false;
  for (int i = 0; i < 64; ++i) {
    const double x = a.normal();
    CHECK(x == b.normal());
    differs_path |= x != c.normal();
    differs_purpose |= x != d.normal();
  }
  CHECK(differs_path);
  CHECK(differs_purpose);
}

TEST_CASE("uniform stays inside the open unit interval") {
  RandomStream s({1, 0}, StreamPurpose::kTest);
  for (int i = 0; i < 100000; ++i) {
    const double u = s.uniform();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
  }
}

TEST_CASE("normal moments") {
  constexpr int n = 200000;
  RandomStream s({99, 3}, StreamPurpose::kTest);
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = s.normal();
    sum += x;
    sum2 += x * x;
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  CHECK(std::abs(mean) <= 4.0 / std::sqrt(double(n)));
  CHECK(std::abs(var - 1.0) <= 4.0 * std::sqrt(2.0 / n));
}
