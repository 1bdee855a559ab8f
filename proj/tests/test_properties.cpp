#include "properties.hpp"

#include <doctest.h>

TEST_CASE("randomized laws hold on every case") {
    for (const auto& name : proptest::names()) {
        proptest::Outcome o = proptest::run(name, TXMEV_TEST_CORPUS);
        CAPTURE(o.counterexample);
        INFO(name);
        CHECK(o.cases >= 200);
        CHECK(o.failures == 0);
        CHECK(o.nontrivial > 0);
    }
}
