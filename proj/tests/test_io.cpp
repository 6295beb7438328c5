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
#include "martbel/json_io.hpp"
#include "test_util.hpp"

using namespace martbel;
using nlohmann::json;

TEST_CASE("rational parsing and rendering") {
    CHECK(parse_rational("15/105") == Rat(1, 7));
    CHECK(parse_rational("-3") == Rat(-3));
    CHECK(parse_rational("4/-8") == Rat(-1, 2));
    CHECK_THROWS_AS(parse_rational(""), ParseError);
    CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
    CHECK_THROWS_AS(parse_rational("abc"), ParseError);
    CHECK(to_string(Rat(1, 7)) == "1/7");
    CHECK(to_string(Rat(-4)) == "-4");
    CHECK(to_string_with_denominator(Rat(1, 7), Int(105)) == "15/105");
    CHECK(to_string_with_denominator(Rat(1, 7), Int(100)) == "1/7");
}

TEST_CASE("set function round-trip") {
    std::mt19937 rng(79);
    for (int trial = 0; trial < 50; ++trial) {
        const StateSpace space(2 + trial % 4);
        const SetFunction f = testutil::random_mass(rng, space);
        CHECK(io::set_function_from_json(io::set_function_to_json(f)) == f);
    }
    // Omitted subsets default to zero; labels are comma-separated.
    const SetFunction g =
        io::set_function_from_json(json::parse(R"({"n":3,"values":{"1,3":"15/105"}})"));
    CHECK(g[0b101] == Rat(1, 7));
    CHECK(g[0b010] == 0);
}

TEST_CASE("set function parse errors") {
    CHECK_THROWS_AS(io::set_function_from_json(json::parse(R"({"values":{}})")), ParseError);
    CHECK_THROWS_AS(io::set_function_from_json(json::parse(R"({"n":3,"values":{"9":"1"}})")),
                    ParseError);
    CHECK_THROWS_AS(io::set_function_from_json(json::parse(R"({"n":3,"values":{"x":"1"}})")),
                    ParseError);
    CHECK_THROWS_AS(io::set_function_from_json(json::parse(R"({"n":3,"values":{"1":"1/0"}})")),
                    ParseError);
}

TEST_CASE("market config round-trip, r is the rate") {
    const json config =
        json::parse(R"({"m":["4","2","1/2","1/4"],"r":"0","s0":"20"})");
    const MarketModel model = io::market_from_json(config);
    CHECK(model.r_factor == 1);
    CHECK(model.s0 == 20);
    CHECK(model.m[2] == Rat(1, 2));
    const MarketModel back = io::market_from_json(io::market_to_json(model));
    CHECK(back.m == model.m);
    CHECK(back.r_factor == model.r_factor);
    CHECK(back.s0 == model.s0);

    const json with_p = json::parse(
        R"({"m":["2","1"],"r":"1/2","s0":"1","p":["1/2","1/2"]})");
    const MarketModel mp = io::market_from_json(with_p);
    REQUIRE(mp.p.has_value());
    CHECK(io::market_from_json(io::market_to_json(mp)).p == mp.p);
    CHECK_THROWS_AS(io::market_from_json(json::parse(R"({"m":["2","1"]})")), ParseError);
}

TEST_CASE("assessment round-trip with and without upper prices") {
    const PriceAssessment one_sided = golden::three_payoff_assessment(Rat(20));
    const PriceAssessment a = io::assessment_from_json(io::assessment_to_json(one_sided));
    CHECK(a.lower == one_sided.lower);
    CHECK(a.payoffs[2].payoff == one_sided.payoffs[2].payoff);
    CHECK(a.names == one_sided.names);
    CHECK_FALSE(a.upper.has_value());

    const StateSpace space(2);
    const PriceAssessment two_sided(space, {RandomVariable(space, {Rat(1), Rat(2)})}, {Rat(1)},
                                    Rat(1), std::vector<Rat>{Rat(2)});
    const PriceAssessment b = io::assessment_from_json(io::assessment_to_json(two_sided));
    REQUIRE(b.upper.has_value());
    CHECK((*b.upper)[0] == 2);

    // Mixed upper presence is rejected.
    json bad = io::assessment_to_json(two_sided);
    bad["payoffs"].push_back(
        json{{"name", "S2"}, {"values", {"1", "1"}}, {"lower", "1"}, {"upper", nullptr}});
    CHECK_THROWS_AS(io::assessment_from_json(bad), ParseError);
}

TEST_CASE("certificate JSON carries a replay stamp") {
    const PriceAssessment bad = golden::three_payoff_assessment(Rat(20));
    const json j = io::certificate_to_json(bad, check_dutch_book(bad));
    CHECK(j.at("verdict") == "DutchBook");
    CHECK(j.contains("witness_portfolio"));
    CHECK_FALSE(j.contains("witness_mass"));
    CHECK(j.at("verification").at("replayed") == true);

    const PriceAssessment good = golden::three_payoff_assessment(Rat(26));
    const json k = io::certificate_to_json(good, check_no_arbitrage(good));
    CHECK(k.at("verdict") == "Consistent");
    CHECK(k.at("strictly_positive") == true);
    CHECK(k.contains("witness_mass"));
    CHECK(k.at("verification").at("replayed") == true);
}

TEST_CASE("approx report JSON shape") {
    const ApproxResult res =
        solve_inner({golden::four_state_market(), ApproxKind::Martingale, ApproxDistance::D1});
    const json j = io::approx_result_to_json(res);
    CHECK(j.at("kind") == "martingale");
    CHECK(j.at("distance") == "d1");
    CHECK(j.at("value") == "32/35");  // 96/105 in lowest terms
    CHECK(j.at("dominance_minimal") == true);
    CHECK(io::set_function_from_json(j.at("mass")) == res.mass);
    CHECK(io::set_function_from_json(j.at("belief")) == res.belief);

    const ApproxResult d2 =
        solve_inner({golden::skewed_market(), ApproxKind::Martingale, ApproxDistance::D2});
    const json k = io::approx_result_to_json(d2);
    CHECK(k.at("distance") == "d2");
    CHECK(k.at("value").is_number_float());
}
