/*
 * Copyright 2026 The martbel authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "martbel/golden.hpp"
#include "martbel/market.hpp"
#include "test_util.hpp"

using namespace martbel;

namespace {

/// Brute-force oracle: eventwise minimum over the extreme points.
SetFunction envelope_by_min(const MarketModel& model) {
    const auto points = extreme_points(model);
    SetFunction env(model.space);
    for (Mask a = 1; a <= model.space.full_mask(); ++a) {
        Rat best = points.front()[a];
        for (const auto& q : points) best = std::min(best, q[a]);
        env[a] = best;
    }
    return env;
}

}  // namespace

TEST_CASE("model validation") {
    CHECK_THROWS_AS(MarketModel({Rat(2), Rat(2)}, Rat(1), Rat(1)), Error);
    CHECK_THROWS_AS(MarketModel({Rat(2), Rat(-1)}, Rat(1), Rat(1)), Error);
    CHECK_THROWS_AS(MarketModel({Rat(2), Rat(1)}, Rat(0), Rat(1)), Error);
    CHECK_THROWS_AS(
        MarketModel({Rat(2), Rat(1)}, Rat(3, 2), Rat(1), std::vector<Rat>{Rat(1, 2), Rat(1, 3)}),
        Error);
    const MarketModel ok({Rat(2), Rat(1)}, Rat(3, 2), Rat(1),
                         std::vector<Rat>{Rat(1, 2), Rat(1, 2)});
    CHECK(ok.viable());
}

TEST_CASE("split index golden cases") {
    const SplitIndex a = split_index(golden::four_state_market());
    CHECK(a.s == 3);
    CHECK_FALSE(a.boundary);
    CHECK(a.upper_block() == 0b0011);
    CHECK(a.lower_block(4) == 0b1100);

    const SplitIndex b = split_index(golden::skewed_market());
    CHECK(b.s == 2);
    CHECK_FALSE(b.boundary);

    const MarketModel boundary({Rat(3), Rat(2), Rat(1)}, Rat(2), Rat(1));
    const SplitIndex c = split_index(boundary);
    CHECK(c.s == 2);
    CHECK(c.boundary);
    CHECK(c.effective_upper() == 0b011);
}

TEST_CASE("split index error cases") {
    const MarketModel not_viable({Rat(3), Rat(2), Rat(1)}, Rat(4), Rat(1));
    CHECK_THROWS_AS(split_index(not_viable), NotViable);
    const MarketModel degenerate({Rat(3), Rat(2), Rat(1)}, Rat(1), Rat(1));
    CHECK_THROWS_AS(split_index(degenerate), DegenerateRate);
    const MarketModel two_states({Rat(2), Rat(1)}, Rat(3, 2), Rat(1));
    CHECK_THROWS_AS(split_index(two_states), TooLarge);
}

TEST_CASE("extreme points golden cases") {
    const auto four = extreme_points(golden::four_state_market());
    REQUIRE(four.size() == 4);
    // Q_{1,3}: supported on states 1 and 3.
    CHECK(four[0][0b0001] == Rat(15, 105));
    CHECK(four[0][0b0100] == Rat(90, 105));
    const auto three = extreme_points(golden::three_state_market());
    REQUIRE(three.size() == 2);
    CHECK(three[0][0b001] == Rat(21, 105));
    CHECK(three[0][0b100] == Rat(84, 105));
    CHECK(three[1][0b010] == Rat(45, 105));
    CHECK(three[1][0b100] == Rat(60, 105));
}

TEST_CASE("two-state market has a single extreme point") {
    const MarketModel model({Rat(2), Rat(1, 2)}, Rat(1), Rat(1));
    const auto points = extreme_points(model);
    REQUIRE(points.size() == 1);
    CHECK(points[0][0b01] == Rat(1, 3));
    CHECK(points[0][0b10] == Rat(2, 3));
}

TEST_CASE("boundary case collapses duplicate extreme points") {
    const MarketModel model({Rat(3), Rat(2), Rat(1)}, Rat(2), Rat(1));
    const auto points = extreme_points(model);
    REQUIRE(points.size() == 2);  // Dirac at state 2 plus Q_{1,3}
}

TEST_CASE("every extreme point satisfies the return-sum equality") {
    std::mt19937 rng(101);
    for (int trial = 0; trial < 200; ++trial) {
        const MarketModel model = testutil::random_viable_market(rng);
        for (const auto& q : extreme_points(model)) {
            Rat total = 0;
            Rat weighted = 0;
            for (int i = 0; i < model.n(); ++i) {
                total += q[Mask{1} << i];
                weighted += model.m[i] * q[Mask{1} << i];
            }
            CHECK(total == 1);
            CHECK(weighted == model.r_factor);
        }
    }
}

TEST_CASE("lower envelope equals the extreme-point minimum, randomized") {
    std::mt19937 rng(103);
    for (int trial = 0; trial < 300; ++trial) {
        const MarketModel model = testutil::random_viable_market(rng, 3, 7);
        CHECK(lower_envelope(model) == envelope_by_min(model));
    }
}

TEST_CASE("envelope mass matches the transform oracle and the chains") {
    std::mt19937 rng(107);
    for (int trial = 0; trial < 200; ++trial) {
        const MarketModel model = testutil::random_viable_market(rng);
        const SetFunction mass = envelope_moebius(model);
        CHECK(mass == moebius_transform(lower_envelope(model)));
        // Support restricted to the two chains, strictly positive there.
        const SplitIndex split = split_index(model);
        const int n = model.n();
        const int chain1_start = split.boundary ? split.s : split.s - 1;
        for (Mask a = 1; a <= model.space.full_mask(); ++a) {
            bool on_chain = false;
            for (int k = chain1_start; k <= n - 1; ++k) {
                if (a == (Mask{1} << k) - 1) on_chain = true;
            }
            for (int k = split.s; k >= 2; --k) {
                if (a == (model.space.full_mask() & ~((Mask{1} << (k - 1)) - 1))) on_chain = true;
            }
            if (a == model.space.full_mask()) {
                CHECK(mass[a] >= 0);
            } else if (on_chain) {
                CHECK(mass[a] > 0);
            } else {
                CHECK(mass[a] == 0);
            }
        }
    }
}

TEST_CASE("the envelope is always a belief function") {
    std::mt19937 rng(109);
    for (int trial = 0; trial < 200; ++trial) {
        const MarketModel model = testutil::random_viable_market(rng);
        const CapacityClass cls = classify(lower_envelope(model));
        CHECK((cls == CapacityClass::Belief || cls == CapacityClass::Necessity ||
               cls == CapacityClass::Probability));
    }
}

TEST_CASE("necessity decomposition recombines, randomized and boundary") {
    std::mt19937 rng(113);
    auto verify = [](const MarketModel& model) {
        const auto dec = necessity_decomposition(model);
        CHECK(dec.alpha > 0);
        CHECK(dec.alpha < 1);
        CHECK(classify(dec.n1) == CapacityClass::Necessity);
        CHECK(classify(dec.n2) == CapacityClass::Necessity);
        const SetFunction env = lower_envelope(model);
        for (Mask a = 0; a <= model.space.full_mask(); ++a) {
            CHECK(dec.alpha * dec.n1[a] + (1 - dec.alpha) * dec.n2[a] == env[a]);
        }
    };
    verify(MarketModel({Rat(3), Rat(2), Rat(1)}, Rat(2), Rat(1)));  // boundary chain variant
    for (int trial = 0; trial < 100; ++trial) verify(testutil::random_viable_market(rng));
}

TEST_CASE("price interval golden and stock endpoints") {
    const MarketModel model = golden::three_state_market();
    const auto [xlo, xhi] =
        price_interval(model, RandomVariable(model.space, {Rat(20), Rat(10), Rat(10)}));
    CHECK(xlo == 10);
    CHECK(xhi == 12);
    const auto [ylo, yhi] =
        price_interval(model, RandomVariable(model.space, {Rat(10), Rat(10), Rat(20)}));
    CHECK(ylo == Rat(110, 7));
    CHECK(yhi == 18);
    // The stock itself prices to the spot on both ends.
    const auto [slo, shi] = price_interval(model, model.stock_payoff());
    CHECK(slo == model.s0);
    CHECK(shi == model.s0);
}

TEST_CASE("price interval brackets the discounted Choquet bounds") {
    std::mt19937 rng(127);
    for (int trial = 0; trial < 100; ++trial) {
        const MarketModel model = testutil::random_viable_market(rng);
        const RandomVariable x = testutil::random_payoff(rng, model.space, 0, 20);
        const auto [lo, hi] = price_interval(model, x);
        CHECK(lo <= hi);
        const SetFunction env = lower_envelope(model);
        // The envelope's Choquet value lower-bounds the interval: the
        // envelope lies below every martingale measure.
        CHECK(choquet(env, x) / model.r_factor <= lo);
        CHECK(hi <= -(choquet(env, RandomVariable(model.space, [&] {
                  std::vector<Rat> neg(x.payoff.size());
                  for (std::size_t i = 0; i < neg.size(); ++i) neg[i] = -x.payoff[i];
                  return neg;
              }())) / model.r_factor));
    }
}
