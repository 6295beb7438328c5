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

#ifndef MARTBEL_MARKET_HPP
#define MARTBEL_MARKET_HPP

#include <optional>
#include <tuple>
#include <utility>
#include <vector>

#include "martbel/errors.hpp"
#include "martbel/setfunc.hpp"

namespace martbel {

/// One-period market with one risky asset taking n distinct gross returns
/// m_1 > ... > m_n > 0 and a risk-free factor 1+r. Real-world
/// probabilities are optional and only validated; the envelope formulas
/// never use them.
struct MarketModel {
    StateSpace space;
    std::vector<Rat> m;        // gross risky returns, strictly decreasing
    Rat r_factor;              // 1 + r
    Rat s0;                    // spot price
    std::optional<std::vector<Rat>> p;

    MarketModel() = default;
    MarketModel(std::vector<Rat> returns, Rat risk_free_factor, Rat spot,
                std::optional<std::vector<Rat>> real_world = std::nullopt)
        : space(static_cast<int>(returns.size())),
          m(std::move(returns)),
          r_factor(std::move(risk_free_factor)),
          s0(std::move(spot)),
          p(std::move(real_world)) {
        if (r_factor <= 0) throw Error("risk-free factor must be positive");
        if (s0 <= 0) throw Error("spot price must be positive");
        if (m.back() <= 0) throw Error("risky returns must be positive");
        for (std::size_t i = 0; i + 1 < m.size(); ++i) {
            if (m[i] <= m[i + 1]) throw Error("risky returns must be strictly decreasing");
        }
        if (p) {
            if (p->size() != m.size()) throw LengthMismatch("probability list length mismatch");
            Rat sum = 0;
            for (const Rat& pi : *p) {
                if (pi <= 0) throw Error("real-world probabilities must be positive");
                sum += pi;
            }
            if (sum != 1) throw Error("real-world probabilities must sum to one");
        }
    }

    int n() const { return space.n; }
    /// The set of equivalent martingale measures is nonempty iff
    /// m_1 > 1+r > m_n.
    bool viable() const { return m.front() > r_factor && r_factor > m.back(); }

    /// Gross return of state i (1-based).
    const Rat& ret(int state) const { return m[state - 1]; }

    /// Terminal stock price as a random variable.
    RandomVariable stock_payoff() const {
        std::vector<Rat> x(m.size());
        for (std::size_t i = 0; i < m.size(); ++i) x[i] = s0 * m[i];
        return RandomVariable(space, std::move(x));
    }
};

/// The index s with m_{s-1} > 1+r >= m_s, splitting states into the upper
/// block I = {1..s-1} and lower block J = {s..n}. When 1+r = m_s the
/// effective upper block is I together with s.
struct SplitIndex {
    int s = 0;
    bool boundary = false;

    Mask upper_block() const { return (Mask{1} << (s - 1)) - 1; }              // I
    Mask lower_block(int n) const { return ((Mask{1} << n) - 1) & ~upper_block(); }  // J
    Mask effective_upper() const {
        return boundary ? (upper_block() | (Mask{1} << (s - 1))) : upper_block();
    }
};

inline void require_viable(const MarketModel& model) {
    if (model.r_factor == model.m.back()) {
        throw DegenerateRate("risk-free factor equals the smallest risky return");
    }
    if (!model.viable()) {
        throw NotViable("market not viable: need m_1 > 1+r > m_n");
    }
}

inline SplitIndex split_index(const MarketModel& model) {
    require_viable(model);
    if (model.n() <= 2) {
        throw TooLarge("split index requires more than two states");
    }
    for (int s = 2; s <= model.n(); ++s) {
        if (model.ret(s - 1) > model.r_factor && model.r_factor >= model.ret(s)) {
            return SplitIndex{s, model.r_factor == model.ret(s)};
        }
    }
    throw NotViable("no split index found");  // unreachable for viable models
}

namespace detail {

inline SetFunction probability_from_singletons(const StateSpace& space,
                                               const std::vector<Rat>& q) {
    SetFunction mass(space);
    for (int i = 0; i < space.n; ++i) mass[Mask{1} << i] = q[i];
    return zeta_transform(mass);
}

}  // namespace detail

/// Extreme points of the closed set of martingale measures. Each is
/// supported on a pair {i, j} with i in the upper and j in the lower
/// block; in the boundary case 1+r = m_s all pairs (i, s) collapse to the
/// point mass at s and duplicates are removed.
inline std::vector<SetFunction> extreme_points(const MarketModel& model) {
    require_viable(model);
    const int n = model.n();
    if (n == 2) {
        const Rat denom = model.ret(1) - model.ret(2);
        return {detail::probability_from_singletons(
            model.space,
            {(model.r_factor - model.ret(2)) / denom, (model.ret(1) - model.r_factor) / denom})};
    }
    const SplitIndex split = split_index(model);
    std::vector<SetFunction> points;
    bool dirac_emitted = false;
    for (int i = 1; i < split.s; ++i) {
        for (int j = split.s; j <= n; ++j) {
            if (split.boundary && j == split.s) {
                if (dirac_emitted) continue;
                dirac_emitted = true;
            }
            std::vector<Rat> q(n, Rat(0));
            const Rat denom = model.ret(i) - model.ret(j);
            q[i - 1] = (model.r_factor - model.ret(j)) / denom;
            q[j - 1] = (model.ret(i) - model.r_factor) / denom;
            points.push_back(detail::probability_from_singletons(model.space, q));
        }
    }
    return points;
}

/// Lower envelope of the martingale measures, in closed form. Branches:
/// the full event; events covering the (effective) upper block; events
/// covering the lower block; zero otherwise.
inline SetFunction lower_envelope(const MarketModel& model) {
    const SplitIndex split = split_index(model);
    const int n = model.n();
    const Mask full = model.space.full_mask();
    const Mask upper = split.effective_upper();
    const Mask lower = split.lower_block(n);
    SetFunction env(model.space);
    env[full] = 1;
    for (Mask a = 0; a < full; ++a) {
        if ((upper & ~a) == 0) {
            // j_low = smallest lower-block state outside a
            int j_low = 0;
            for (int j = split.s; j <= n; ++j) {
                if (!(a >> (j - 1) & 1u)) {
                    j_low = j;
                    break;
                }
            }
            env[a] = (model.r_factor - model.ret(j_low)) / (model.ret(1) - model.ret(j_low));
        } else if ((lower & ~a) == 0) {
            // i_high = largest upper-block state outside a
            int i_high = 0;
            for (int i = split.s - 1; i >= 1; --i) {
                if (!(a >> (i - 1) & 1u)) {
                    i_high = i;
                    break;
                }
            }
            env[a] = (model.ret(i_high) - model.r_factor) / (model.ret(i_high) - model.ret(n));
        }
    }
    return env;
}

/// Mass of the lower envelope, in closed form: supported on the prefix
/// chain {1..k} (k from s-1, or s in the boundary case, to n-1) and the
/// suffix chain {k..n} (k from s down to 2).
inline SetFunction envelope_moebius(const MarketModel& model) {
    const SplitIndex split = split_index(model);
    const int n = model.n();
    SetFunction mass(model.space);
    auto prefix_value = [&](int j) {  // envelope of {1..j-1}: missing state j
        return (model.r_factor - model.ret(j)) / (model.ret(1) - model.ret(j));
    };
    auto suffix_value = [&](int i) {  // envelope of {i+1..n}: missing state i
        return (model.ret(i) - model.r_factor) / (model.ret(i) - model.ret(n));
    };
    for (int k = split.s - 1; k <= n - 1; ++k) {
        const Mask prefix = (Mask{1} << k) - 1;
        const Rat value = (k == split.s - 1) ? Rat(prefix_value(split.s))
                                             : Rat(prefix_value(k + 1) - prefix_value(k));
        if (value != 0) mass[prefix] = value;
    }
    for (int k = split.s; k >= 2; --k) {
        const Mask suffix = model.space.full_mask() & ~((Mask{1} << (k - 1)) - 1);
        const Rat value = (k == split.s) ? Rat(suffix_value(k - 1))
                                         : Rat(suffix_value(k - 1) - suffix_value(k));
        if (value != 0) mass[suffix] = value;
    }
    return mass;
}

/// The envelope as a strict convex combination alpha*N1 + (1-alpha)*N2 of
/// two necessity measures, obtained by normalizing the two mass chains.
struct NecessityDecomposition {
    Rat alpha;
    SetFunction n1;
    SetFunction n2;
};

inline NecessityDecomposition necessity_decomposition(const MarketModel& model) {
    const SplitIndex split = split_index(model);
    const SetFunction mass = envelope_moebius(model);
    const int n = model.n();
    const Rat alpha = (model.r_factor - model.ret(n)) / (model.ret(1) - model.ret(n));
    SetFunction mass1(model.space);
    SetFunction mass2(model.space);
    for (int k = split.s - 1; k <= n - 1; ++k) {
        const Mask prefix = (Mask{1} << k) - 1;
        mass1[prefix] = mass[prefix] / alpha;
    }
    for (int k = split.s; k >= 2; --k) {
        const Mask suffix = model.space.full_mask() & ~((Mask{1} << (k - 1)) - 1);
        mass2[suffix] = mass[suffix] / (1 - alpha);
    }
    return NecessityDecomposition{alpha, zeta_transform(mass1), zeta_transform(mass2)};
}

/// No-arbitrage price interval: discounted min/max expectation over the
/// extreme martingale measures.
inline std::pair<Rat, Rat> price_interval(const MarketModel& model, const RandomVariable& x) {
    require_viable(model);
    const auto points = extreme_points(model);
    Rat lo = expectation(points.front(), x);
    Rat hi = lo;
    for (std::size_t k = 1; k < points.size(); ++k) {
        const Rat value = expectation(points[k], x);
        lo = std::min(lo, value);
        hi = std::max(hi, value);
    }
    return {lo / model.r_factor, hi / model.r_factor};
}

}  // namespace martbel

#endif  // MARTBEL_MARKET_HPP
