#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "properties.hpp"

TEST_CASE("randomized properties, several seeds") {
  for (uint64_t seed : {1ULL, 2ULL, 0x5eedULL}) {
    const auto t = props::run(seed);
    INFO("seed " << seed);
    for (const auto& f : t.first) INFO(f);
    CHECK(t.failures == 0);
    CHECK(t.checks >= 10000);
  }
}
