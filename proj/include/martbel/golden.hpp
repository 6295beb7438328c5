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

#ifndef MARTBEL_GOLDEN_HPP
#define MARTBEL_GOLDEN_HPP

#include <cmath>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "martbel/approx.hpp"
#include "martbel/arbitrage.hpp"
#include "martbel/market.hpp"
#include "martbel/setfunc.hpp"

namespace martbel::golden {

/// Fixtures and embedded golden checks reproducing the published worked
/// examples; the CLI's verify-paper verb and the acceptance suite run
/// these.

struct Check {
    std::string name;
    bool pass = false;
    std::string detail;
};

inline Mask mask_of(std::initializer_list<int> states) {
    Mask m = 0;
    for (int s : states) m |= Mask{1} << (s - 1);
    return m;
}

using Entry = std::pair<std::initializer_list<int>, Rat>;

inline SetFunction make_sf(const StateSpace& space, std::initializer_list<Entry> entries,
                           bool full_is_one = false) {
    SetFunction f(space);
    for (const auto& [states, value] : entries) f[mask_of(states)] = value;
    if (full_is_one) f[space.full_mask()] = 1;
    return f;
}

// --- Fixtures -------------------------------------------------------------

/// Four-state market m = (4, 2, 1/2, 1/4), 1+r = 1, S0 = 20.
inline MarketModel four_state_market() {
    return MarketModel({Rat(4), Rat(2), Rat(1, 2), Rat(1, 4)}, Rat(1), Rat(20));
}

/// Three-state market m = (4, 2, 1/4), 1+r = 1, S0 = 20.
inline MarketModel three_state_market() {
    return MarketModel({Rat(4), Rat(2), Rat(1, 4)}, Rat(1), Rat(20));
}

/// Skewed market m = (5, 3, 2, 1/2), 1+r = 4.
inline MarketModel skewed_market() {
    return MarketModel({Rat(5), Rat(3), Rat(2), Rat(1, 2)}, Rat(4), Rat(1));
}

/// Three payoffs over four states, lower-priced at (15, 5, third_price).
inline PriceAssessment three_payoff_assessment(const Rat& third_price) {
    const StateSpace space(4);
    std::vector<RandomVariable> payoffs = {
        RandomVariable(space, {Rat(10), Rat(10), Rat(20), Rat(20)}),
        RandomVariable(space, {Rat(0), Rat(10), Rat(0), Rat(10)}),
        RandomVariable(space, {Rat(10), Rat(30), Rat(20), Rat(40)})};
    return PriceAssessment(space, std::move(payoffs), {Rat(15), Rat(5), third_price}, Rat(1));
}

/// Expected lower envelope of the four-state market (all 16 values).
inline SetFunction four_state_envelope_expected() {
    return make_sf(StateSpace(4),
                   {{{1, 2}, Rat(15, 105)},
                    {{3, 4}, Rat(60, 105)},
                    {{1, 2, 3}, Rat(21, 105)},
                    {{1, 2, 4}, Rat(15, 105)},
                    {{1, 3, 4}, Rat(60, 105)},
                    {{2, 3, 4}, Rat(84, 105)}},
                   true);
}

/// Expected Moebius mass of the four-state envelope.
inline SetFunction four_state_mass_expected() {
    return make_sf(StateSpace(4), {{{1, 2}, Rat(15, 105)},
                                   {{3, 4}, Rat(60, 105)},
                                   {{1, 2, 3}, Rat(6, 105)},
                                   {{2, 3, 4}, Rat(24, 105)}});
}

/// Expected lower envelope of the skewed market (all 16 values).
inline SetFunction skewed_envelope_expected() {
    return make_sf(StateSpace(4),
                   {{{1}, Rat(9, 18)},
                    {{1, 2}, Rat(12, 18)},
                    {{1, 3}, Rat(9, 18)},
                    {{1, 4}, Rat(9, 18)},
                    {{1, 2, 3}, Rat(14, 18)},
                    {{1, 2, 4}, Rat(12, 18)},
                    {{1, 3, 4}, Rat(9, 18)},
                    {{2, 3, 4}, Rat(4, 18)}},
                   true);
}

/// Optimal d1 mass published for the four-state market.
inline SetFunction four_state_d1_mass() {
    return make_sf(StateSpace(4),
                   {{{1}, Rat(21, 105)}, {{3, 4}, Rat(60, 105)}, {{2, 3, 4}, Rat(24, 105)}});
}

/// The two published optimal d1 masses for the skewed market.
inline SetFunction skewed_d1_mass_one() {
    return make_sf(StateSpace(4),
                   {{{1}, Rat(12, 18)}, {{2, 3}, Rat(4, 18)}, {{1, 2, 3}, Rat(2, 18)}});
}
inline SetFunction skewed_d1_mass_two() {
    return make_sf(StateSpace(4),
                   {{{1}, Rat(11, 18)}, {{1, 2}, Rat(3, 18)}, {{2, 3}, Rat(4, 18)}});
}

/// Published consistent witness mass for the (15, 5, 26) assessment.
inline SetFunction consistent_witness_mass() {
    return make_sf(StateSpace(4), {{{1}, Rat(2, 10)},
                                   {{2}, Rat(1, 10)},
                                   {{3}, Rat(1, 10)},
                                   {{4}, Rat(4, 10)},
                                   {{1, 2}, Rat(1, 10)},
                                   {{2, 3}, Rat(1, 10)}});
}

/// Expected contaminated belief at eps = 1/2 with the default mixing
/// measure and the d1-optimal target (all 16 values).
inline SetFunction four_state_contaminated_expected() {
    return make_sf(StateSpace(4),
                   {{{1}, Rat(60, 420)},    {{2}, Rat(40, 420)},       {{3}, Rat(80, 420)},
                    {{4}, Rat(72, 420)},    {{1, 2}, Rat(100, 420)},   {{1, 3}, Rat(140, 420)},
                    {{1, 4}, Rat(132, 420)},{{2, 3}, Rat(120, 420)},   {{2, 4}, Rat(112, 420)},
                    {{3, 4}, Rat(272, 420)},{{1, 2, 3}, Rat(180, 420)},{{1, 2, 4}, Rat(172, 420)},
                    {{1, 3, 4}, Rat(332, 420)}, {{2, 3, 4}, Rat(360, 420)}},
                   true);
}

// --- Independent replay oracles -------------------------------------------

/// Exact feasibility replay of an inner-approximation mass: nonnegative,
/// normalized, envelope-dominating, and satisfying the return-sum
/// equalit(ies).
inline bool approx_feasible(const MarketModel& model, ApproxKind kind, const SetFunction& mass) {
    const Mask full = model.space.full_mask();
    if (mass[0] != 0) return false;
    Rat total = 0;
    Rat upper_sum = 0;
    Rat lower_sum = 0;
    for (Mask b = 1; b <= full; ++b) {
        if (mass[b] < 0) return false;
        total += mass[b];
        upper_sum += model.m[std::bit_width(b) - 1] * mass[b];
        lower_sum += model.m[std::countr_zero(b)] * mass[b];
    }
    if (total != 1 || upper_sum != model.r_factor) return false;
    if (kind == ApproxKind::StrongMartingale && lower_sum != model.r_factor) return false;
    const SetFunction bel = zeta_transform(mass);
    const SetFunction env = lower_envelope(model);
    for (Mask a = 1; a <= full; ++a) {
        if (bel[a] < env[a]) return false;
    }
    return true;
}

/// d1 distance of a feasible mass to the envelope, by the direct sum
/// Sum_A (Bel(A) - Env(A)).
inline Rat d1_value_of(const MarketModel& model, const SetFunction& mass) {
    const SetFunction bel = zeta_transform(mass);
    const SetFunction env = lower_envelope(model);
    Rat total = 0;
    for (Mask a = 1; a <= model.space.full_mask(); ++a) total += bel[a] - env[a];
    return total;
}

// --- Golden checks ---------------------------------------------------------

namespace detail {

inline bool close(double a, double b, double tol = 1e-4) { return std::fabs(a - b) <= tol; }

template <typename Fn>
inline Check run_check(const std::string& name, Fn&& body) {
    Check c{name, false, ""};
    try {
        body(c);
        if (c.pass && c.detail.empty()) c.detail = "ok";
    } catch (const std::exception& e) {
        c.pass = false;
        c.detail = std::string("exception: ") + e.what();
    }
    return c;
}

}  // namespace detail

inline Check check_envelope_table() {
    return detail::run_check("envelope-and-mass-table", [](Check& c) {
        const MarketModel model = four_state_market();
        const bool env_ok = lower_envelope(model) == four_state_envelope_expected();
        const bool mass_ok = envelope_moebius(model) == four_state_mass_expected();
        c.pass = env_ok && mass_ok;
        if (!c.pass) c.detail = env_ok ? "mass row mismatch" : "envelope row mismatch";
    });
}

inline Check check_decomposition() {
    return detail::run_check("necessity-decomposition", [](Check& c) {
        const MarketModel model = four_state_market();
        const auto dec = necessity_decomposition(model);
        if (dec.alpha != Rat(21, 105)) {
            c.detail = "alpha mismatch";
            return;
        }
        if (dec.n1[mask_of({1, 2})] != Rat(15, 21) || dec.n2[mask_of({3, 4})] != Rat(60, 84)) {
            c.detail = "chain value mismatch";
            return;
        }
        if (classify(dec.n1) != CapacityClass::Necessity ||
            classify(dec.n2) != CapacityClass::Necessity) {
            c.detail = "component not a necessity measure";
            return;
        }
        const SetFunction env = lower_envelope(model);
        for (Mask a = 0; a <= model.space.full_mask(); ++a) {
            if (dec.alpha * dec.n1[a] + (1 - dec.alpha) * dec.n2[a] != env[a]) {
                c.detail = "recombination fails at " + subset_label(a);
                return;
            }
        }
        c.pass = true;
    });
}

inline Check check_choquet_gap() {
    return detail::run_check("choquet-gap-and-marginal-vector", [](Check& c) {
        const MarketModel model = four_state_market();
        const SetFunction env = lower_envelope(model);
        const RandomVariable returns(model.space, model.m);  // S1 / S0
        if (choquet(env, returns) != Rat(54, 105)) {
            c.detail = "Choquet value mismatch";
            return;
        }
        // Marginal vector for the identity order.
        const std::vector<Rat> expected = {Rat(0), Rat(15, 105), Rat(6, 105), Rat(84, 105)};
        std::vector<Rat> q(4);
        Mask level = 0;
        Rat prev = 0;
        for (int i = 0; i < 4; ++i) {
            level |= Mask{1} << i;
            q[i] = env[level] - prev;
            prev = env[level];
        }
        if (q != expected) {
            c.detail = "marginal vector mismatch";
            return;
        }
        // This core element violates the return-sum equality, so the set of
        // martingale measures is a strict subset of the core.
        Rat weighted = 0;
        for (int i = 0; i < 4; ++i) weighted += model.m[i] * q[i];
        c.pass = weighted != model.r_factor && weighted == Rat(54, 105);
        if (!c.pass) c.detail = "marginal vector unexpectedly satisfies the return sum";
    });
}

inline Check check_price_intervals() {
    return detail::run_check("price-intervals", [](Check& c) {
        const MarketModel model = three_state_market();
        const auto [xlo, xhi] =
            price_interval(model, RandomVariable(model.space, {Rat(20), Rat(10), Rat(10)}));
        const auto [ylo, yhi] =
            price_interval(model, RandomVariable(model.space, {Rat(10), Rat(10), Rat(20)}));
        c.pass = xlo == 10 && xhi == 12 && ylo == Rat(110, 7) && yhi == 18;
        if (!c.pass) c.detail = "interval endpoints mismatch";
    });
}

inline Check check_dutch_book_certificate() {
    return detail::run_check("dutch-book-certificate", [](Check& c) {
        const PriceAssessment a = three_payoff_assessment(Rat(20));
        const Certificate cert = check_dutch_book(a);
        if (cert.verdict != Verdict::DutchBook || !replay_certificate(a, cert)) {
            c.detail = "verdict or replay mismatch";
            return;
        }
        // The published witness (-1, -2, 1) must validate too.
        const Portfolio lam{{Rat(-1), Rat(-2), Rat(1)}};
        const GainProfile gp = portfolio_gain(a, lam);
        Rat min_gain = gp.g.values[1];
        for (Mask b = 1; b <= a.space.full_mask(); ++b) min_gain = std::min(min_gain, gp.g.values[b]);
        c.pass = gp.pi == -5 && min_gain == 5 && gp.g.values[mask_of({2, 3})] == 15;
        if (!c.pass) c.detail = "reference portfolio gains mismatch";
    });
}

inline Check check_no_arbitrage_witness() {
    return detail::run_check("no-arbitrage-witness", [](Check& c) {
        const PriceAssessment a = three_payoff_assessment(Rat(26));
        const Certificate cert = check_no_arbitrage(a);
        if (cert.verdict != Verdict::Consistent || !cert.strictly_positive ||
            !replay_certificate(a, cert)) {
            c.detail = "verdict or replay mismatch";
            return;
        }
        // The published witness mass must re-price the assessment exactly.
        const SetFunction bel = zeta_transform(consistent_witness_mass());
        c.pass = choquet(bel, a.payoffs[0]) == 15 && choquet(bel, a.payoffs[1]) == 5 &&
                 choquet(bel, a.payoffs[2]) == 26;
        if (!c.pass) c.detail = "reference witness does not re-price";
    });
}

inline Check check_contamination_gap() {
    return detail::run_check("contamination-gap", [](Check& c) {
        const MarketModel model = four_state_market();
        const SetFunction env = lower_envelope(model);
        const SetFunction q0 = default_q0(model);
        const RandomVariable returns(model.space, model.m);
        for (const Rat& eps : {Rat(1, 4), Rat(1, 2), Rat(3, 4)}) {
            const SetFunction mixed = epsilon_contaminate(q0, env, eps);
            const Rat value = choquet(mixed, returns);
            if (value != (1 - eps) * model.r_factor + eps * Rat(54, 105) ||
                value >= model.r_factor) {
                c.detail = "contaminated envelope value mismatch at eps=" + to_string(eps);
                return;
            }
        }
        c.pass = true;
    });
}

inline Check check_d1_inner() {
    return detail::run_check("d1-inner-approximation", [](Check& c) {
        const MarketModel model = four_state_market();
        const ApproxResult res = solve_inner({model, ApproxKind::Martingale, ApproxDistance::D1});
        if (res.value_exact != Rat(96, 105) || !res.dominance_minimal) {
            c.detail = "optimal value or minimality mismatch";
            return;
        }
        const SetFunction ref_mass = four_state_d1_mass();
        if (!approx_feasible(model, ApproxKind::Martingale, ref_mass) ||
            d1_value_of(model, ref_mass) != Rat(96, 105)) {
            c.detail = "reference mass not optimal feasible";
            return;
        }
        // eps = 1/2 contamination with the default mixing measure.
        const SetFunction mixed =
            epsilon_contaminate(default_q0(model), zeta_transform(ref_mass), Rat(1, 2));
        if (!(mixed == four_state_contaminated_expected())) {
            c.detail = "contaminated row mismatch";
            return;
        }
        const RandomVariable returns(model.space, model.m);
        c.pass = choquet(mixed, returns) == model.r_factor;
        if (!c.pass) c.detail = "contaminated belief breaks the return-sum equality";
    });
}

inline Check check_d1_nonunique() {
    return detail::run_check("d1-non-uniqueness", [](Check& c) {
        const MarketModel model = skewed_market();
        const ApproxResult res = solve_inner({model, ApproxKind::Martingale, ApproxDistance::D1});
        if (res.value_exact != Rat(20, 18) || res.unique) {
            c.detail = "value or uniqueness flag mismatch";
            return;
        }
        for (const SetFunction& ref : {skewed_d1_mass_one(), skewed_d1_mass_two()}) {
            if (!approx_feasible(model, ApproxKind::Martingale, ref) ||
                d1_value_of(model, ref) != Rat(20, 18)) {
                c.detail = "a reference mass is not optimal feasible";
                return;
            }
        }
        c.pass = true;
    });
}

inline Check check_d2_optima() {
    return detail::run_check("d2-optima", [](Check& c) {
        const MarketModel model = skewed_market();
        const ApproxResult weak = solve_inner({model, ApproxKind::Martingale, ApproxDistance::D2});
        if (!detail::close(weak.value_float, 0.169591)) {
            c.detail = "d2 value mismatch";
            return;
        }
        const std::vector<std::pair<Mask, double>> coords = {
            {mask_of({1}), 0.628655},    {mask_of({2}), 0.0087719},
            {mask_of({1, 2}), 0.149123}, {mask_of({2, 3}), 0.18421},
            {mask_of({2, 3, 4}), 0.0292399}};
        SetFunction expected(model.space);
        for (const auto& [m, v] : coords) expected[m] = Rat(v);
        for (Mask b = 1; b <= model.space.full_mask(); ++b) {
            if (!detail::close(to_double(weak.mass[b]), to_double(expected[b]))) {
                c.detail = "d2 mass coordinate mismatch at " + subset_label(b);
                return;
            }
        }
        const ApproxResult strong =
            solve_strong({model, ApproxKind::StrongMartingale, ApproxDistance::D2});
        const std::vector<double> probability = {0.638889, 0.188596, 0.102339, 0.0701755};
        for (int i = 0; i < 4; ++i) {
            if (!detail::close(to_double(strong.mass[Mask{1} << i]), probability[i])) {
                c.detail = "strong d2 probability mismatch";
                return;
            }
        }
        c.pass = detail::close(strong.value_float, 0.572124);
        if (!c.pass) c.detail = "strong d2 value mismatch";
    });
}

inline Check check_strong_d1() {
    return detail::run_check("strong-d1-value", [](Check& c) {
        const MarketModel model = skewed_market();
        const ApproxResult res =
            solve_strong({model, ApproxKind::StrongMartingale, ApproxDistance::D1});
        c.pass = res.value_exact == Rat(8, 3) &&
                 approx_feasible(model, ApproxKind::StrongMartingale, res.mass);
        if (!c.pass) c.detail = "strong d1 value or feasibility mismatch";
    });
}

inline std::vector<Check> run_all() {
    return {check_envelope_table(),      check_decomposition(),
            check_choquet_gap(),         check_price_intervals(),
            check_dutch_book_certificate(), check_no_arbitrage_witness(),
            check_contamination_gap(),   check_d1_inner(),
            check_d1_nonunique(),        check_d2_optima(),
            check_strong_d1()};
}

}  // namespace martbel::golden

#endif  // MARTBEL_GOLDEN_HPP
