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

// Acceptance gate: one pass/fail line per criterion; exit 0 only when all
// twelve pass.

#include <functional>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "martbel/golden.hpp"
#include "martbel/martbel.hpp"
#include "test_util.hpp"

using namespace martbel;

namespace {

struct Criterion {
    std::string title;
    std::function<bool(std::string&)> body;
};

bool run_golden(golden::Check (*check)(), std::string& detail) {
    const golden::Check c = check();
    detail = c.detail;
    return c.pass;
}

// Criterion 11: randomized strong collapse plus the golden strong value.
bool strong_collapse_suite(std::string& detail) {
    {
        std::string golden_detail;
        if (!run_golden(&golden::check_strong_d1, golden_detail)) {
            detail = "golden strong value: " + golden_detail;
            return false;
        }
    }
    std::mt19937 rng(1001);
    ApproxOptions opts;
    opts.detect_uniqueness = false;
    opts.check_dominance = false;
    for (int trial = 0; trial < 200; ++trial) {
        const MarketModel model = testutil::random_viable_market(rng);
        const ApproxResult res =
            solve_strong({model, ApproxKind::StrongMartingale, ApproxDistance::D1}, opts);
        for (Mask b = 1; b <= model.space.full_mask(); ++b) {
            if (!std::has_single_bit(b) && res.mass[b] != 0) {
                detail = "non-singleton support at trial " + std::to_string(trial);
                return false;
            }
        }
        const SetFunction env = lower_envelope(model);
        Rat env_total = 0;
        for (Mask a = 1; a <= model.space.full_mask(); ++a) env_total += env[a];
        if (res.value_exact != Rat(Int(1) << (model.n() - 1)) - env_total) {
            detail = "value identity fails at trial " + std::to_string(trial);
            return false;
        }
        if (!golden::approx_feasible(model, ApproxKind::StrongMartingale, res.mass)) {
            detail = "feasibility replay fails at trial " + std::to_string(trial);
            return false;
        }
    }
    return true;
}

bool property_suites(std::string& detail) {
    // (a) transform roundtrip.
    {
        std::mt19937 rng(2001);
        for (int trial = 0; trial < 500; ++trial) {
            const StateSpace space(3 + trial % 4);
            const SetFunction mass = testutil::random_mass(rng, space);
            if (!(moebius_transform(zeta_transform(mass)) == mass)) {
                detail = "transform roundtrip fails";
                return false;
            }
        }
    }
    // (b) Choquet duality, homogeneity, monotonicity, superadditivity.
    {
        std::mt19937 rng(2003);
        for (int trial = 0; trial < 500; ++trial) {
            const StateSpace space(3 + trial % 4);
            const SetFunction bel = zeta_transform(testutil::random_mass(rng, space));
            const RandomVariable x = testutil::random_payoff(rng, space);
            const RandomVariable y = testutil::random_payoff(rng, space);
            std::vector<Rat> neg(x.payoff.size()), scaled(x.payoff.size()),
                bigger(x.payoff.size()), sum(x.payoff.size());
            const Rat c(trial % 7);
            for (std::size_t i = 0; i < x.payoff.size(); ++i) {
                neg[i] = -x.payoff[i];
                scaled[i] = c * x.payoff[i];
                bigger[i] = x.payoff[i] + abs(y.payoff[i]);
                sum[i] = x.payoff[i] + y.payoff[i];
            }
            const bool ok =
                choquet(dual(bel), x) == -choquet(bel, RandomVariable(space, neg)) &&
                choquet(bel, RandomVariable(space, scaled)) == c * choquet(bel, x) &&
                choquet(bel, RandomVariable(space, bigger)) >= choquet(bel, x) &&
                choquet(bel, RandomVariable(space, sum)) >=
                    choquet(bel, x) + choquet(bel, y);
            if (!ok) {
                detail = "Choquet property fails at trial " + std::to_string(trial);
                return false;
            }
        }
    }
    // (c) envelope equals the extreme-point minimum and (d) classifies as
    // a belief function.
    {
        std::mt19937 rng(2005);
        for (int trial = 0; trial < 500; ++trial) {
            const MarketModel model = testutil::random_viable_market(rng);
            const SetFunction env = lower_envelope(model);
            const auto points = extreme_points(model);
            for (Mask a = 1; a <= model.space.full_mask(); ++a) {
                Rat best = points.front()[a];
                for (const auto& q : points) best = std::min(best, q[a]);
                if (env[a] != best) {
                    detail = "envelope-minimum mismatch at trial " + std::to_string(trial);
                    return false;
                }
            }
            if (classify(env) == CapacityClass::GeneralCapacity) {
                detail = "envelope not a belief function at trial " + std::to_string(trial);
                return false;
            }
        }
    }
    // (e) alternative exclusivity of certificates.
    {
        std::mt19937 rng(2007);
        for (int trial = 0; trial < 500; ++trial) {
            const PriceAssessment a = testutil::random_assessment(rng);
            const Certificate db = check_dutch_book(a);
            const Certificate na = check_no_arbitrage(a);
            const bool exclusive =
                (db.witness_mass.has_value() != db.witness_portfolio.has_value()) &&
                (na.witness_mass.has_value() != na.witness_portfolio.has_value());
            if (!exclusive || !replay_certificate(a, db) || !replay_certificate(a, na)) {
                detail = "certificate exclusivity/replay fails at trial " + std::to_string(trial);
                return false;
            }
            if (na.verdict == Verdict::Consistent && db.verdict != Verdict::Consistent) {
                detail = "no-arbitrage without Dutch-book consistency at trial " +
                         std::to_string(trial);
                return false;
            }
        }
    }
    // (f) dominance minimality of d1 optima.
    {
        std::mt19937 rng(2011);
        ApproxOptions opts;
        opts.detect_uniqueness = false;
        for (int trial = 0; trial < 500; ++trial) {
            const MarketModel model = testutil::random_viable_market(rng, 3, 5);
            const ApproxResult res =
                solve_inner({model, ApproxKind::Martingale, ApproxDistance::D1}, opts);
            if (!res.dominance_minimal) {
                detail = "dominated d1 optimum at trial " + std::to_string(trial);
                return false;
            }
        }
    }
    return true;
}

}  // namespace

int main() {
    std::vector<Criterion> criteria = {
        {"envelope and mass table",
         [](std::string& d) { return run_golden(&golden::check_envelope_table, d); }},
        {"necessity decomposition",
         [](std::string& d) { return run_golden(&golden::check_decomposition, d); }},
        {"Choquet gap and marginal vector",
         [](std::string& d) { return run_golden(&golden::check_choquet_gap, d); }},
        {"price intervals",
         [](std::string& d) { return run_golden(&golden::check_price_intervals, d); }},
        {"Dutch-book certificate",
         [](std::string& d) { return run_golden(&golden::check_dutch_book_certificate, d); }},
        {"no-arbitrage witness",
         [](std::string& d) { return run_golden(&golden::check_no_arbitrage_witness, d); }},
        {"contamination gap",
         [](std::string& d) { return run_golden(&golden::check_contamination_gap, d); }},
        {"d1 inner approximation",
         [](std::string& d) { return run_golden(&golden::check_d1_inner, d); }},
        {"d1 non-uniqueness",
         [](std::string& d) { return run_golden(&golden::check_d1_nonunique, d); }},
        {"d2 optima",
         [](std::string& d) { return run_golden(&golden::check_d2_optima, d); }},
        {"strong collapse", strong_collapse_suite},
        {"property suites", property_suites},
    };

    bool all_pass = true;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        std::string detail;
        bool pass = false;
        try {
            pass = criteria[i].body(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        all_pass = all_pass && pass;
        std::cout << "criterion " << (i + 1) << ": " << (pass ? "PASS" : "FAIL") << " - "
                  << criteria[i].title;
        if (!pass && !detail.empty()) std::cout << " (" << detail << ")";
        std::cout << std::endl;
    }
    return all_pass ? 0 : 1;
}
