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

#ifndef MARTBEL_SETFUNC_HPP
#define MARTBEL_SETFUNC_HPP

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "martbel/errors.hpp"
#include "martbel/rational.hpp"

namespace martbel {

/// Subsets of the state space are bitmasks; state i maps to bit i-1.
using Mask = unsigned;

namespace detail {

inline int max_states_cap() {
    constexpr int kHardCap = 20;
    if (const char* env = std::getenv("MARTBEL_MAX_N")) {
        const int requested = std::atoi(env);
        if (requested >= 2 && requested < kHardCap) {
            return requested;
        }
    }
    return kHardCap;
}

}  // namespace detail

/// Finite state space {1,...,n}. Storage everywhere is 2^n entries, hence
/// the cap on n.
struct StateSpace {
    int n = 0;

    StateSpace() = default;
    explicit StateSpace(int states) : n(states) {
        if (n < 2 || n > detail::max_states_cap()) {
            throw TooLarge("state count " + std::to_string(n) + " outside [2, " +
                           std::to_string(detail::max_states_cap()) + "]");
        }
    }

    std::size_t num_subsets() const { return std::size_t{1} << n; }
    Mask full_mask() const { return static_cast<Mask>((std::size_t{1} << n) - 1); }
    bool operator==(const StateSpace& other) const { return n == other.n; }
};

/// Renders a subset as a sorted comma-separated state list, e.g. "1,3".
inline std::string subset_label(Mask subset, char sep = ',') {
    std::string out;
    for (int i = 0; subset >> i; ++i) {
        if (subset >> i & 1u) {
            if (!out.empty() && sep != '\0') out += sep;
            out += std::to_string(i + 1);
        }
    }
    return out.empty() ? std::string("{}") : out;
}

/// Real-valued function on all subsets of the state space, indexed by
/// bitmask. Depending on context it acts as a capacity, belief function,
/// probability measure, or a mass assignment.
struct SetFunction {
    StateSpace space;
    std::vector<Rat> values;

    SetFunction() = default;
    explicit SetFunction(StateSpace s) : space(s), values(s.num_subsets(), Rat(0)) {}
    SetFunction(StateSpace s, std::vector<Rat> v) : space(s), values(std::move(v)) {
        if (values.size() != space.num_subsets()) {
            throw DimensionMismatch("set function needs 2^n values");
        }
    }

    Rat& operator[](Mask subset) { return values[subset]; }
    const Rat& operator[](Mask subset) const { return values[subset]; }
    bool operator==(const SetFunction& other) const {
        return space == other.space && values == other.values;
    }
};

/// Payoff vector over the states.
struct RandomVariable {
    StateSpace space;
    std::vector<Rat> payoff;

    RandomVariable() = default;
    explicit RandomVariable(StateSpace s) : space(s), payoff(s.n, Rat(0)) {}
    RandomVariable(StateSpace s, std::vector<Rat> x) : space(s), payoff(std::move(x)) {
        if (payoff.size() != static_cast<std::size_t>(space.n)) {
            throw LengthMismatch("payoff length must equal the state count");
        }
    }

    const Rat& operator()(int state) const { return payoff[state - 1]; }
    bool operator==(const RandomVariable& other) const {
        return space == other.space && payoff == other.payoff;
    }
};

/// Per-event minimum of a random variable: values[B] = min over states of B.
/// Index 0 (the empty set) is unused and kept at zero.
struct LowerPayoff {
    StateSpace space;
    std::vector<Rat> values;

    LowerPayoff() = default;
    explicit LowerPayoff(StateSpace s) : space(s), values(s.num_subsets(), Rat(0)) {}

    Rat& operator[](Mask subset) { return values[subset]; }
    const Rat& operator[](Mask subset) const { return values[subset]; }
};

enum class CapacityClass { Probability, Necessity, Belief, GeneralCapacity };

inline const char* to_string(CapacityClass c) {
    switch (c) {
        case CapacityClass::Probability: return "probability";
        case CapacityClass::Necessity: return "necessity";
        case CapacityClass::Belief: return "belief";
        case CapacityClass::GeneralCapacity: return "general-capacity";
    }
    return "?";
}

/// Subset-sum (zeta) transform: phi(A) = sum of mass over subsets of A.
/// O(n 2^n).
inline SetFunction zeta_transform(const SetFunction& mass) {
    if (mass[0] != 0) {
        throw InvalidMass("mass assigns nonzero value to the empty set");
    }
    SetFunction phi = mass;
    const std::size_t size = phi.space.num_subsets();
    for (int bit = 0; bit < phi.space.n; ++bit) {
        const Mask b = Mask{1} << bit;
        for (Mask a = 0; a < size; ++a) {
            if (a & b) phi.values[a] += phi.values[a ^ b];
        }
    }
    return phi;
}

/// Inverse of zeta_transform (the alternating-sum transform), same
/// in-place butterfly with subtraction.
inline SetFunction moebius_transform(const SetFunction& capacity) {
    if (capacity[0] != 0) {
        throw InvalidMass("capacity must vanish on the empty set");
    }
    SetFunction mu = capacity;
    const std::size_t size = mu.space.num_subsets();
    for (int bit = 0; bit < mu.space.n; ++bit) {
        const Mask b = Mask{1} << bit;
        for (Mask a = 0; a < size; ++a) {
            if (a & b) mu.values[a] -= mu.values[a ^ b];
        }
    }
    return mu;
}

/// Throws NotACapacity (naming a violating pair) unless phi is a
/// normalized monotone set function.
inline void require_capacity(const SetFunction& phi) {
    if (phi[0] != 0) {
        throw NotACapacity("capacity must be 0 on the empty set");
    }
    if (phi[phi.space.full_mask()] != 1) {
        throw NotACapacity("capacity must be 1 on the full state space");
    }
    const std::size_t size = phi.space.num_subsets();
    for (Mask a = 0; a < size; ++a) {
        for (int bit = 0; bit < phi.space.n; ++bit) {
            const Mask b = a | (Mask{1} << bit);
            if (b != a && phi[a] > phi[b]) {
                throw NotACapacity("monotonicity fails: phi(" + subset_label(a) + ") > phi(" +
                                   subset_label(b) + ")");
            }
        }
    }
}

inline bool is_capacity(const SetFunction& phi) {
    try {
        require_capacity(phi);
        return true;
    } catch (const NotACapacity&) {
        return false;
    }
}

/// Finest applicable label. Probability: mass on singletons only.
/// Necessity: focal elements form a chain under inclusion. Belief:
/// nonnegative mass everywhere (complete monotonicity).
inline CapacityClass classify(const SetFunction& capacity) {
    require_capacity(capacity);
    const SetFunction mass = moebius_transform(capacity);
    bool nonnegative = true;
    std::vector<Mask> focal;
    for (Mask a = 1; a < capacity.space.num_subsets(); ++a) {
        if (mass[a] < 0) nonnegative = false;
        if (mass[a] != 0) focal.push_back(a);
    }
    if (!nonnegative) return CapacityClass::GeneralCapacity;
    const bool singletons_only =
        std::all_of(focal.begin(), focal.end(), [](Mask a) { return std::has_single_bit(a); });
    if (singletons_only) return CapacityClass::Probability;
    // Focal sets sorted by cardinality form a chain iff each contains the
    // previous one.
    std::sort(focal.begin(), focal.end(),
              [](Mask a, Mask b) { return std::popcount(a) < std::popcount(b); });
    bool chain = true;
    for (std::size_t i = 0; i + 1 < focal.size(); ++i) {
        if ((focal[i] & ~focal[i + 1]) != 0) {
            chain = false;
            break;
        }
    }
    return chain ? CapacityClass::Necessity : CapacityClass::Belief;
}

/// Conjugate capacity psi(A) = 1 - phi(complement of A).
inline SetFunction dual(const SetFunction& capacity) {
    require_capacity(capacity);
    SetFunction psi(capacity.space);
    const Mask full = capacity.space.full_mask();
    for (Mask a = 0; a <= full; ++a) {
        psi[a] = Rat(1) - capacity[full & ~a];
    }
    return psi;
}

/// Lower payoff over all nonempty events, by min-propagation in O(n 2^n).
inline LowerPayoff lower_payoff(const RandomVariable& x) {
    LowerPayoff low(x.space);
    for (int i = 0; i < x.space.n; ++i) {
        low[Mask{1} << i] = x.payoff[i];
    }
    for (Mask a = 1; a < x.space.num_subsets(); ++a) {
        if (std::has_single_bit(a)) continue;
        const Mask lsb = a & (~a + 1u);
        low[a] = std::min(low[lsb], low[a ^ lsb]);
    }
    return low;
}

namespace detail {

/// States ordered by descending payoff; ties broken by ascending state
/// index (the result is tie-invariant, the rule only fixes determinism).
inline std::vector<int> descending_order(const RandomVariable& x) {
    std::vector<int> order(x.space.n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return x.payoff[a] > x.payoff[b]; });
    return order;
}

inline Rat choquet_by_levels(const SetFunction& capacity, const RandomVariable& x) {
    const auto order = descending_order(x);
    Rat total = 0;
    Mask level = 0;
    for (int i = 0; i < x.space.n; ++i) {
        level |= Mask{1} << order[i];
        const Rat next = (i + 1 < x.space.n) ? x.payoff[order[i + 1]] : Rat(0);
        total += (x.payoff[order[i]] - next) * capacity[level];
    }
    return total;
}

inline Rat choquet_by_mass(const SetFunction& capacity, const RandomVariable& x) {
    const SetFunction mass = moebius_transform(capacity);
    const LowerPayoff low = lower_payoff(x);
    Rat total = 0;
    for (Mask b = 1; b < capacity.space.num_subsets(); ++b) {
        if (mass[b] != 0) total += low[b] * mass[b];
    }
    return total;
}

}  // namespace detail

/// Choquet expectation by the sorted-level-set formula. The equivalent
/// mass-weighted sum of lower payoffs is evaluated as a cross-check.
inline Rat choquet(const SetFunction& capacity, const RandomVariable& x) {
    require_capacity(capacity);
    if (!(x.space == capacity.space)) {
        throw DimensionMismatch("capacity and payoff live on different state spaces");
    }
    const Rat by_levels = detail::choquet_by_levels(capacity, x);
    const Rat by_mass = detail::choquet_by_mass(capacity, x);
    if (by_levels != by_mass) {
        throw Error("internal: the two Choquet evaluation routes disagree");
    }
    return by_levels;
}

/// Marginal vectors {Q^sigma} over all permutations, duplicates removed.
/// Each returned probability dominates bel eventwise and their pointwise
/// minimum reproduces bel. Guarded at n <= 10 (n! enumeration).
inline std::vector<SetFunction> core_vertices(const SetFunction& bel) {
    if (classify(bel) == CapacityClass::GeneralCapacity) {
        throw NotBelief("core enumeration needs a belief function");
    }
    if (bel.space.n > 10) {
        throw TooLarge("core vertex enumeration is limited to n <= 10");
    }
    std::vector<int> perm(bel.space.n);
    std::iota(perm.begin(), perm.end(), 0);
    std::set<std::vector<Rat>> seen;
    std::vector<SetFunction> vertices;
    do {
        std::vector<Rat> q(bel.space.n);
        Mask level = 0;
        Rat prev = 0;
        for (int k = 0; k < bel.space.n; ++k) {
            level |= Mask{1} << perm[k];
            q[perm[k]] = bel[level] - prev;
            prev = bel[level];
        }
        if (!seen.insert(q).second) continue;
        SetFunction mass(bel.space);
        for (int i = 0; i < bel.space.n; ++i) {
            mass[Mask{1} << i] = q[i];
        }
        vertices.push_back(zeta_transform(mass));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return vertices;
}

/// Expectation of x under a probability measure given as a set function.
inline Rat expectation(const SetFunction& probability, const RandomVariable& x) {
    Rat total = 0;
    for (int i = 0; i < x.space.n; ++i) {
        total += probability[Mask{1} << i] * x.payoff[i];
    }
    return total;
}

}  // namespace martbel

#endif  // MARTBEL_SETFUNC_HPP
