#include <algorithm>
#include <map>
#include <numeric>

#include "doctest.h"
#include "gvb/errors.hpp"
#include "gvb/rng.hpp"
#include "reference.hpp"

using gvb::Rng;

TEST_CASE("next_u64 matches textbook splitmix64") {
  for (std::uint64_t seed : {0ULL, 1ULL, 42ULL, 1234567ULL, 0xFFFFFFFFFFFFFFFFULL}) {
    Rng rng(seed);
    ref::SplitMix64 sm{seed};
    for (int i = 0; i < 1000; ++i) REQUIRE(rng.next_u64() == sm.next());
  }
}

TEST_CASE("published splitmix64 vectors") {
  Rng rng(1234567);
  CHECK(rng.next_u64() == 6457827717110365317ULL);
  CHECK(rng.next_u64() == 3203168211198807973ULL);
  CHECK(rng.next_u64() == 9817491932198370423ULL);
}

TEST_CASE("uniform01 range and draw counting") {
  Rng rng(9);
  for (int i = 0; i < 10000; ++i) {
    double u = rng.uniform01();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
  }
  CHECK(rng.draws() == 10000);
}

TEST_CASE("uniform_int covers the closed range evenly") {
  Rng rng(3);
  std::map<long long, int> hist;
  for (int i = 0; i < 60000; ++i) ++hist[rng.uniform_int(1, 6)];
  CHECK(hist.size() == 6);
  for (auto [k, n] : hist) {
    CHECK(k >= 1);
    CHECK(k <= 6);
    CHECK(n > 9000);
    CHECK(n < 11000);
  }
  CHECK(rng.uniform_int(5, 5) == 5);
  CHECK_THROWS_AS(rng.uniform_int(2, 1), gvb::ParameterError);
}

TEST_CASE("fork is independent of parent position") {
  Rng a(77), b(77);
  a.next_u64();
  a.next_u64();
  Rng fa = a.fork(5), fb = b.fork(5);
  for (int i = 0; i < 100; ++i) REQUIRE(fa.next_u64() == fb.next_u64());
  CHECK(b.draws() == 0);
  CHECK(Rng(77).fork(5).next_u64() != Rng(77).fork(6).next_u64());
}

TEST_CASE("permutation is a permutation") {
  Rng rng(11);
  for (int n : {0, 1, 2, 10, 50}) {
    auto p = rng.permutation(n);
    std::vector<int> sorted = p;
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> id(n);
    std::iota(id.begin(), id.end(), 0);
    CHECK(sorted == id);
  }
}

TEST_CASE("same seed same sequence of derived draws") {
  Rng a(2024), b(2024);
  for (int i = 0; i < 200; ++i) {
    REQUIRE(a.uniform(-3, 7) == b.uniform(-3, 7));
    REQUIRE(a.uniform_int(0, 1000) == b.uniform_int(0, 1000));
    REQUIRE(a.bernoulli(0.3) == b.bernoulli(0.3));
  }
}
