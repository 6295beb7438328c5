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

#ifndef MARTBEL_ARBITRAGE_HPP
#define MARTBEL_ARBITRAGE_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "martbel/errors.hpp"
#include "martbel/lp.hpp"
#include "martbel/setfunc.hpp"

namespace martbel {

/// A finite list of payoffs with lower (and optionally upper) prices under
/// a common risk-free factor. The "real-world" belief function enters only
/// through equivalence, which reduces to singleton-positivity of the
/// representing mass, so it is never an input.
struct PriceAssessment {
    StateSpace space;
    std::vector<RandomVariable> payoffs;
    std::vector<std::string> names;
    std::vector<Rat> lower;
    std::optional<std::vector<Rat>> upper;
    Rat r_factor;

    PriceAssessment() = default;
    PriceAssessment(StateSpace sp, std::vector<RandomVariable> g, std::vector<Rat> lo,
                    Rat risk_free_factor, std::optional<std::vector<Rat>> up = std::nullopt,
                    std::vector<std::string> payoff_names = {})
        : space(sp),
          payoffs(std::move(g)),
          names(std::move(payoff_names)),
          lower(std::move(lo)),
          upper(std::move(up)),
          r_factor(std::move(risk_free_factor)) {
        if (payoffs.empty()) throw Error("assessment needs at least one payoff");
        if (lower.size() != payoffs.size()) throw LengthMismatch("lower price list length mismatch");
        if (upper && upper->size() != payoffs.size()) {
            throw LengthMismatch("upper price list length mismatch");
        }
        if (r_factor <= 0) throw Error("risk-free factor must be positive");
        for (const auto& x : payoffs) {
            if (x.space.n != space.n) throw DimensionMismatch("payoff state count mismatch");
        }
        if (names.empty()) {
            names.resize(payoffs.size());
            for (std::size_t k = 0; k < payoffs.size(); ++k) names[k] = "S" + std::to_string(k + 1);
        } else if (names.size() != payoffs.size()) {
            throw LengthMismatch("payoff name list length mismatch");
        }
        if (upper) {
            for (std::size_t k = 0; k < payoffs.size(); ++k) {
                if (lower[k] > (*upper)[k]) throw Error("lower price exceeds upper price");
            }
        }
    }

    std::size_t size() const { return payoffs.size(); }
};

/// A position in the m priced payoffs plus an optional position in the
/// risk-free asset (unit price, discounted payoff identically one). The
/// bond leg never changes a gain profile G, but violating portfolios for
/// the strict-positivity alternative may genuinely require it: the
/// singleton/event payoff conditions are not always attainable with a
/// bond-free portfolio.
struct Portfolio {
    std::vector<Rat> lambda;
    Rat bond = Rat(0);
};

enum class Verdict { Consistent, DutchBook, ArbitrageA, ArbitrageB };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Consistent: return "Consistent";
        case Verdict::DutchBook: return "DutchBook";
        case Verdict::ArbitrageA: return "ArbitrageA";
        case Verdict::ArbitrageB: return "ArbitrageB";
    }
    return "?";
}

/// Outcome of a consistency check: either a representing Moebius mass or a
/// violating portfolio, never both.
struct Certificate {
    Verdict verdict = Verdict::Consistent;
    std::optional<SetFunction> witness_mass;
    std::optional<Portfolio> witness_portfolio;
    bool strictly_positive = false;
};

/// Portfolio payoff profile: Z is the lambda-weighted sum of discounted
/// lower payoffs (a sum of lower payoffs, not the lower payoff of the
/// sum), pi the acquisition cost, G = Z - pi per event.
struct GainProfile {
    LowerPayoff z;
    Rat pi;
    LowerPayoff g;
};

namespace detail {

/// Lower payoffs of the discounted contracts, indexed [payoff][event].
inline std::vector<LowerPayoff> discounted_lower_payoffs(const PriceAssessment& a) {
    std::vector<LowerPayoff> out;
    out.reserve(a.size());
    for (const auto& x : a.payoffs) {
        LowerPayoff lp = lower_payoff(x);
        for (auto& v : lp.values) v /= a.r_factor;
        out.push_back(std::move(lp));
    }
    return out;
}

}  // namespace detail

/// Folds a two-sided assessment into the one-sided form by adjoining -S
/// priced at -upper for every payoff.
inline PriceAssessment normalize_two_sided(const PriceAssessment& a) {
    if (!a.upper) throw NoUpperPrices("assessment has no upper prices");
    std::vector<RandomVariable> payoffs = a.payoffs;
    std::vector<Rat> lower = a.lower;
    std::vector<std::string> names = a.names;
    for (std::size_t k = 0; k < a.size(); ++k) {
        std::vector<Rat> neg(a.payoffs[k].payoff.size());
        for (std::size_t i = 0; i < neg.size(); ++i) neg[i] = -a.payoffs[k].payoff[i];
        payoffs.emplace_back(a.space, std::move(neg));
        lower.push_back(-(*a.upper)[k]);
        names.push_back("-" + a.names[k]);
    }
    return PriceAssessment(a.space, std::move(payoffs), std::move(lower), a.r_factor, std::nullopt,
                           std::move(names));
}

inline GainProfile portfolio_gain(const PriceAssessment& a, const Portfolio& lam) {
    if (lam.lambda.size() != a.size()) throw LengthMismatch("portfolio length mismatch");
    const auto lps = detail::discounted_lower_payoffs(a);
    const Mask full = a.space.full_mask();
    GainProfile out{LowerPayoff(a.space), Rat(0), LowerPayoff(a.space)};
    for (std::size_t k = 0; k < a.size(); ++k) {
        out.pi += lam.lambda[k] * a.lower[k];
        for (Mask b = 1; b <= full; ++b) out.z.values[b] += lam.lambda[k] * lps[k].values[b];
    }
    if (lam.bond != 0) {
        out.pi += lam.bond;
        for (Mask b = 1; b <= full; ++b) out.z.values[b] += lam.bond;
    }
    for (Mask b = 1; b <= full; ++b) out.g.values[b] = out.z.values[b] - out.pi;
    return out;
}

namespace detail {

inline PriceAssessment one_sided(const PriceAssessment& a) {
    return a.upper ? normalize_two_sided(a) : a;
}

/// Theorem-style primal system: per-payoff pricing equalities over the
/// Moebius mass plus normalization. Variables are mu(B) for B in U.
inline lp::Problem representation_system(const PriceAssessment& a,
                                         const std::vector<LowerPayoff>& lps) {
    const Mask full = a.space.full_mask();
    lp::Problem p;
    p.num_vars = full;  // variable b-1 carries mu(B) for mask b
    for (std::size_t k = 0; k < a.size(); ++k) {
        std::vector<Rat> row(full);
        for (Mask b = 1; b <= full; ++b) row[b - 1] = lps[k].values[b];
        p.add_eq(std::move(row), a.lower[k]);
    }
    p.add_eq(std::vector<Rat>(full, Rat(1)), Rat(1));
    return p;
}

inline SetFunction mass_from_primal(const StateSpace& space, const std::vector<Rat>& primal) {
    SetFunction mass(space);
    for (Mask b = 1; b <= space.full_mask(); ++b) mass[b] = primal[b - 1];
    return mass;
}

inline bool all_singletons_positive(const SetFunction& mass) {
    for (int i = 0; i < mass.space.n; ++i) {
        if (mass[Mask{1} << i] <= 0) return false;
    }
    return true;
}

inline void verify_consistent(const PriceAssessment& a, const SetFunction& mass) {
    Rat total = 0;
    for (Mask b = 0; b <= a.space.full_mask(); ++b) {
        if (mass[b] < 0) throw Error("certificate replay failed: negative mass");
        total += mass[b];
    }
    if (mass[0] != 0 || total != 1) throw Error("certificate replay failed: mass not normalized");
    const SetFunction bel = zeta_transform(mass);
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (choquet(bel, a.payoffs[k]) != a.r_factor * a.lower[k]) {
            throw Error("certificate replay failed: price mismatch");
        }
    }
}

inline void verify_dutch_book(const PriceAssessment& a, const Portfolio& lam) {
    const GainProfile gp = portfolio_gain(a, lam);
    bool all_neg = true;
    bool all_pos = true;
    for (Mask b = 1; b <= a.space.full_mask(); ++b) {
        if (gp.g.values[b] >= 0) all_neg = false;
        if (gp.g.values[b] <= 0) all_pos = false;
    }
    if (!all_neg && !all_pos) {
        throw Error("certificate replay failed: gain not uniformly one-signed");
    }
}

/// Literal replay of the two generalized-arbitrage portfolio conditions.
inline bool satisfies_condition_a(const PriceAssessment& a, const Portfolio& lam) {
    const GainProfile gp = portfolio_gain(a, lam);
    if (gp.pi >= 0) return false;
    for (Mask b = 1; b <= a.space.full_mask(); ++b) {
        const bool singleton = (b & (b - 1)) == 0;
        if (singleton ? gp.z.values[b] != 0 : gp.z.values[b] < 0) return false;
    }
    return true;
}

inline bool satisfies_condition_b(const PriceAssessment& a, const Portfolio& lam) {
    const GainProfile gp = portfolio_gain(a, lam);
    if (gp.pi > 0) return false;
    bool strict_singleton = false;
    for (Mask b = 1; b <= a.space.full_mask(); ++b) {
        if (gp.z.values[b] < 0) return false;
        if ((b & (b - 1)) == 0 && gp.z.values[b] > 0) strict_singleton = true;
    }
    return strict_singleton;
}

/// Searches for a condition-(a) portfolio, normalized to pi = -1. The
/// search space includes the bond leg: variable m carries the risk-free
/// position, which shifts every event payoff and the price by the same
/// amount. Without it the alternative is not exhaustive.
inline std::optional<Portfolio> find_arbitrage_a(const PriceAssessment& a,
                                                 const std::vector<LowerPayoff>& lps) {
    const std::size_t m = a.size();
    const Mask full = a.space.full_mask();
    lp::Problem p;
    p.num_vars = m + 1;
    p.nonneg.assign(m + 1, 0);
    for (Mask b = 1; b <= full; ++b) {
        std::vector<Rat> row(m + 1);
        for (std::size_t k = 0; k < m; ++k) row[k] = lps[k].values[b];
        row[m] = 1;
        if ((b & (b - 1)) == 0) {
            p.add_eq(std::move(row), Rat(0));
        } else {
            for (auto& v : row) v = -v;
            p.add_le(std::move(row), Rat(0));
        }
    }
    {
        std::vector<Rat> row(m + 1);
        for (std::size_t k = 0; k < m; ++k) row[k] = a.lower[k];
        row[m] = 1;
        p.add_eq(std::move(row), Rat(-1));
    }
    const lp::Outcome out = lp::solve(p);
    if (out.status != lp::Status::Optimal) return std::nullopt;
    return Portfolio{std::vector<Rat>(out.primal.begin(), out.primal.begin() + m), out.primal[m]};
}

/// Searches for a condition-(b) portfolio, normalized so the singleton
/// payoffs sum to at least one. Like find_arbitrage_a, the search space
/// includes the bond leg as variable m.
inline std::optional<Portfolio> find_arbitrage_b(const PriceAssessment& a,
                                                 const std::vector<LowerPayoff>& lps) {
    const std::size_t m = a.size();
    const Mask full = a.space.full_mask();
    lp::Problem p;
    p.num_vars = m + 1;
    p.nonneg.assign(m + 1, 0);
    for (Mask b = 1; b <= full; ++b) {
        std::vector<Rat> row(m + 1);
        for (std::size_t k = 0; k < m; ++k) row[k] = -lps[k].values[b];
        row[m] = -1;
        p.add_le(std::move(row), Rat(0));
    }
    {
        std::vector<Rat> row(m + 1);
        for (std::size_t k = 0; k < m; ++k) row[k] = a.lower[k];
        row[m] = 1;
        p.add_le(std::move(row), Rat(0));
    }
    {
        std::vector<Rat> row(m + 1, Rat(0));
        for (int i = 0; i < a.space.n; ++i) {
            for (std::size_t k = 0; k < m; ++k) row[k] -= lps[k].values[Mask{1} << i];
            row[m] -= 1;
        }
        p.add_le(std::move(row), Rat(-1));
    }
    const lp::Outcome out = lp::solve(p);
    if (out.status != lp::Status::Optimal) return std::nullopt;
    return Portfolio{std::vector<Rat>(out.primal.begin(), out.primal.begin() + m), out.primal[m]};
}

}  // namespace detail

/// Generalized avoiding-Dutch-book check: either a representing mass for
/// the lower prices exists, or some portfolio's gain is uniformly
/// one-signed across all nonempty events. Two-sided assessments are folded
/// with normalize_two_sided first.
inline Certificate check_dutch_book(const PriceAssessment& input) {
    const PriceAssessment a = detail::one_sided(input);
    const auto lps = detail::discounted_lower_payoffs(a);
    const lp::Problem system = detail::representation_system(a, lps);
    const lp::Outcome out = lp::solve(system);
    Certificate cert;
    if (out.status == lp::Status::Optimal) {
        cert.verdict = Verdict::Consistent;
        cert.witness_mass = detail::mass_from_primal(a.space, out.primal);
        cert.strictly_positive = detail::all_singletons_positive(*cert.witness_mass);
        detail::verify_consistent(a, *cert.witness_mass);
        return cert;
    }
    // Farkas ray y over the pricing equalities: lambda = (y_1..y_m) has
    // Z_lambda(B) <= -y_{m+1} < pi_lambda on every event, so the gain is
    // uniformly negative.
    cert.verdict = Verdict::DutchBook;
    cert.witness_portfolio =
        Portfolio{std::vector<Rat>(out.dual.begin(), out.dual.begin() + a.size())};
    detail::verify_dutch_book(a, *cert.witness_portfolio);
    return cert;
}

/// Generalized no-arbitrage check: strict positivity on singletons is
/// decided by maximizing a uniform slack under the representing system;
/// on failure the violating portfolio is recovered by solving the two
/// alternative conditions directly and replaying them literally.
inline Certificate check_no_arbitrage(const PriceAssessment& input) {
    const PriceAssessment a = detail::one_sided(input);
    const auto lps = detail::discounted_lower_payoffs(a);
    const Mask full = a.space.full_mask();

    lp::Problem slack = detail::representation_system(a, lps);
    const std::size_t t_index = slack.num_vars;
    slack.num_vars += 1;
    slack.nonneg.assign(slack.num_vars, 1);
    slack.nonneg[t_index] = 0;
    for (auto& row : slack.eq) row.push_back(Rat(0));
    slack.objective.assign(slack.num_vars, Rat(0));
    slack.objective[t_index] = -1;  // maximize t
    for (int i = 0; i < a.space.n; ++i) {
        std::vector<Rat> row(slack.num_vars, Rat(0));
        row[t_index] = 1;
        row[(Mask{1} << i) - 1] = -1;  // t - mu({i}) <= 0
        slack.add_le(std::move(row), Rat(0));
    }
    const lp::Outcome out = lp::solve(slack);
    if (out.status == lp::Status::Optimal && out.primal[t_index] > 0) {
        Certificate cert;
        cert.verdict = Verdict::Consistent;
        std::vector<Rat> primal(out.primal.begin(), out.primal.begin() + full);
        cert.witness_mass = detail::mass_from_primal(a.space, primal);
        cert.strictly_positive = true;
        detail::verify_consistent(a, *cert.witness_mass);
        if (!detail::all_singletons_positive(*cert.witness_mass)) {
            throw Error("certificate replay failed: witness not strictly positive");
        }
        return cert;
    }

    Certificate cert;
    if (auto lam = detail::find_arbitrage_a(a, lps)) {
        cert.verdict = Verdict::ArbitrageA;
        cert.witness_portfolio = std::move(*lam);
        if (!detail::satisfies_condition_a(a, *cert.witness_portfolio)) {
            throw Error("certificate replay failed: condition (a) violated");
        }
        return cert;
    }
    if (auto lam = detail::find_arbitrage_b(a, lps)) {
        cert.verdict = Verdict::ArbitrageB;
        cert.witness_portfolio = std::move(*lam);
        if (!detail::satisfies_condition_b(a, *cert.witness_portfolio)) {
            throw Error("certificate replay failed: condition (b) violated");
        }
        return cert;
    }
    throw Error("no-arbitrage alternative failed to produce either witness");
}

/// Replays a certificate against an assessment; used to stamp reports.
inline bool replay_certificate(const PriceAssessment& input, const Certificate& cert) {
    const PriceAssessment a = detail::one_sided(input);
    try {
        switch (cert.verdict) {
            case Verdict::Consistent:
                if (!cert.witness_mass) return false;
                detail::verify_consistent(a, *cert.witness_mass);
                return !cert.strictly_positive ||
                       detail::all_singletons_positive(*cert.witness_mass);
            case Verdict::DutchBook:
                if (!cert.witness_portfolio) return false;
                detail::verify_dutch_book(a, *cert.witness_portfolio);
                return true;
            case Verdict::ArbitrageA:
                return cert.witness_portfolio &&
                       detail::satisfies_condition_a(a, *cert.witness_portfolio);
            case Verdict::ArbitrageB:
                return cert.witness_portfolio &&
                       detail::satisfies_condition_b(a, *cert.witness_portfolio);
        }
    } catch (const Error&) {
        return false;
    }
    return false;
}

}  // namespace martbel

#endif  // MARTBEL_ARBITRAGE_HPP
