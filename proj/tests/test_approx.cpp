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

#include <cmath>
#include <random>

#include "martbel/approx.hpp"
#include "martbel/golden.hpp"
#include "test_util.hpp"

using namespace martbel;

TEST_CASE("default mixing measure golden values") {
    const SetFunction q0 = default_q0(golden::four_state_market());
    CHECK(q0[0b0001] == Rat(36, 420));
    CHECK(q0[0b0010] == Rat(80, 420));
    CHECK(q0[0b0100] == Rat(160, 420));
    CHECK(q0[0b1000] == Rat(144, 420));
    CHECK(classify(q0) == CapacityClass::Probability);

    const SetFunction three = default_q0(golden::three_state_market());
    CHECK(three[0b001] == Rat(21, 210));
    CHECK(three[0b010] == Rat(45, 210));
    CHECK(three[0b100] == Rat(144, 210));
}

TEST_CASE("contamination rejects bad inputs") {
    const MarketModel model = golden::four_state_market();
    const SetFunction q0 = default_q0(model);
    const SetFunction env = lower_envelope(model);
    CHECK_THROWS_AS(epsilon_contaminate(q0, env, Rat(0)), EpsOutOfRange);
    CHECK_THROWS_AS(epsilon_contaminate(q0, env, Rat(1)), EpsOutOfRange);
    CHECK_THROWS_AS(epsilon_contaminate(env, env, Rat(1, 2)), Error);  // q0 not a probability
}

TEST_CASE("contamination keeps martingale beliefs martingale") {
    std::mt19937 rng(53);
    for (int trial = 0; trial < 50; ++trial) {
        const MarketModel model = testutil::random_viable_market(rng, 3, 5, false);
        const SetFunction q0 = default_q0(model);
        ApproxOptions opts;
        opts.detect_uniqueness = false;
        opts.check_dominance = false;
        const ApproxResult res =
            solve_inner({model, ApproxKind::Martingale, ApproxDistance::D1}, opts);
        std::uniform_int_distribution<int> en(1, 9);
        const Rat eps(en(rng), 10);
        const SetFunction mixed = epsilon_contaminate(q0, res.belief, eps);
        // Equivalence: strictly positive singleton mass.
        const SetFunction mixed_mass = moebius_transform(mixed);
        for (int i = 0; i < model.n(); ++i) CHECK(mixed_mass[Mask{1} << i] > 0);
        // The return-sum equality survives the convex mixture.
        const RandomVariable returns(model.space, model.m);
        CHECK(choquet(mixed, returns) == model.r_factor);
    }
}

TEST_CASE("extreme-point masses are feasible for both problems") {
    std::mt19937 rng(59);
    for (int trial = 0; trial < 100; ++trial) {
        const MarketModel model = testutil::random_viable_market(rng);
        for (const auto& q : extreme_points(model)) {
            const SetFunction mass = moebius_transform(q);
            CHECK(golden::approx_feasible(model, ApproxKind::Martingale, mass));
            CHECK(golden::approx_feasible(model, ApproxKind::StrongMartingale, mass));
        }
    }
}

TEST_CASE("d1 golden optima") {
    const ApproxResult four =
        solve_inner({golden::four_state_market(), ApproxKind::Martingale, ApproxDistance::D1});
    CHECK(four.value_exact == Rat(96, 105));
    CHECK(four.dominance_minimal);
    CHECK(golden::approx_feasible(golden::four_state_market(), ApproxKind::Martingale,
                                  four.mass));
    CHECK(golden::d1_value_of(golden::four_state_market(), four.mass) == Rat(96, 105));

    const ApproxResult skewed =
        solve_inner({golden::skewed_market(), ApproxKind::Martingale, ApproxDistance::D1});
    CHECK(skewed.value_exact == Rat(20, 18));
    CHECK_FALSE(skewed.unique);
}

TEST_CASE("d1 value agrees with the direct belief-sum oracle, randomized") {
    std::mt19937 rng(61);
    ApproxOptions opts;
    opts.detect_uniqueness = false;
    opts.check_dominance = false;
    for (int trial = 0; trial < 60; ++trial) {
        const MarketModel model = testutil::random_viable_market(rng, 3, 5);
        const ApproxResult res =
            solve_inner({model, ApproxKind::Martingale, ApproxDistance::D1}, opts);
        CHECK(golden::approx_feasible(model, ApproxKind::Martingale, res.mass));
        CHECK(golden::d1_value_of(model, res.mass) == res.value_exact);
        CHECK(res.value_exact >= 0);
    }
}

TEST_CASE("d1 optima are dominance-minimal, randomized") {
    std::mt19937 rng(67);
    ApproxOptions opts;
    opts.detect_uniqueness = false;
    for (int trial = 0; trial < 40; ++trial) {
        const MarketModel model = testutil::random_viable_market(rng, 3, 5);
        const ApproxResult res =
            solve_inner({model, ApproxKind::Martingale, ApproxDistance::D1}, opts);
        CHECK(res.dominance_minimal);
    }
}

TEST_CASE("strong solutions collapse to singleton support, randomized") {
    std::mt19937 rng(71);
    ApproxOptions opts;
    opts.detect_uniqueness = false;
    opts.check_dominance = false;
    for (int trial = 0; trial < 60; ++trial) {
        const MarketModel model = testutil::random_viable_market(rng);
        const ApproxResult res =
            solve_strong({model, ApproxKind::StrongMartingale, ApproxDistance::D1}, opts);
        for (Mask b = 1; b <= model.space.full_mask(); ++b) {
            if (!std::has_single_bit(b)) CHECK(res.mass[b] == 0);
        }
        const SetFunction env = lower_envelope(model);
        Rat env_total = 0;
        for (Mask a = 1; a <= model.space.full_mask(); ++a) env_total += env[a];
        CHECK(res.value_exact == Rat(Int(1) << (model.n() - 1)) - env_total);
    }
}

TEST_CASE("d2 golden optima and determinism") {
    const MarketModel model = golden::skewed_market();
    const ApproxResult a = solve_inner({model, ApproxKind::Martingale, ApproxDistance::D2});
    const ApproxResult b = solve_inner({model, ApproxKind::Martingale, ApproxDistance::D2});
    CHECK(std::fabs(a.value_float - 0.169591) < 1e-4);
    CHECK(a.value_float == b.value_float);  // fixed seeds, identical runs
    CHECK(a.dominance_minimal);

    const ApproxResult strong =
        solve_strong({model, ApproxKind::StrongMartingale, ApproxDistance::D2});
    CHECK(std::fabs(strong.value_float - 0.572124) < 1e-4);
    CHECK(std::fabs(to_double(strong.mass[0b0001]) - 0.638889) < 1e-4);
}

TEST_CASE("d2 multi-start agrees from different seeds") {
    const MarketModel model = golden::four_state_market();
    ApproxOptions a;
    a.seed = 1;
    a.check_dominance = false;
    ApproxOptions b;
    b.seed = 999;
    b.check_dominance = false;
    const ApproxResult ra = solve_inner({model, ApproxKind::Martingale, ApproxDistance::D2}, a);
    const ApproxResult rb = solve_inner({model, ApproxKind::Martingale, ApproxDistance::D2}, b);
    CHECK(std::fabs(ra.value_float - rb.value_float) < 1e-7);
}

TEST_CASE("d2 beliefs dominate the envelope within tolerance, randomized") {
    std::mt19937 rng(73);
    ApproxOptions opts;
    opts.check_dominance = false;
    for (int trial = 0; trial < 25; ++trial) {
        const MarketModel model = testutil::random_viable_market(rng, 3, 4);
        const ApproxResult res =
            solve_inner({model, ApproxKind::Martingale, ApproxDistance::D2}, opts);
        const SetFunction env = lower_envelope(model);
        for (Mask aset = 1; aset <= model.space.full_mask(); ++aset) {
            CHECK(to_double(res.belief[aset] - env[aset]) > -1e-7);
        }
        // The d2 optimum is never better than 0 and never worse than the
        // d2 value of the d1 optimum (both feasible).
        CHECK(res.value_float >= -1e-12);
    }
}

TEST_CASE("solver rejects non-viable models") {
    const MarketModel flat({Rat(3), Rat(2), Rat(1)}, Rat(4), Rat(1));
    CHECK_THROWS_AS(solve_inner({flat, ApproxKind::Martingale, ApproxDistance::D1}), NotViable);
}
