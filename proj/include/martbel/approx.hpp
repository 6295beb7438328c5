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

#ifndef MARTBEL_APPROX_HPP
#define MARTBEL_APPROX_HPP

#include <Eigen/Dense>

#include <bit>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "martbel/errors.hpp"
#include "martbel/lp.hpp"
#include "martbel/market.hpp"
#include "martbel/qp.hpp"
#include "martbel/setfunc.hpp"

namespace martbel {

enum class ApproxKind { Martingale, StrongMartingale };
enum class ApproxDistance { D1, D2 };

inline const char* to_string(ApproxKind k) {
    return k == ApproxKind::Martingale ? "martingale" : "strong-martingale";
}
inline const char* to_string(ApproxDistance d) { return d == ApproxDistance::D1 ? "d1" : "d2"; }

struct ApproxProblem {
    MarketModel model;
    ApproxKind kind = ApproxKind::Martingale;
    ApproxDistance distance = ApproxDistance::D1;
};

struct ApproxOptions {
    bool detect_uniqueness = true;
    bool check_dominance = true;
    int d2_restarts = 10;
    double d2_tol = 1e-9;
    unsigned seed = 12345;
};

/// Optimal inner approximation. The distance value is exact for D1 and a
/// double for D2; the D2 mass is the exact-rational image of the solver's
/// doubles, so its constraints hold to the solver tolerance only.
struct ApproxResult {
    ApproxKind kind = ApproxKind::Martingale;
    ApproxDistance distance = ApproxDistance::D1;
    SetFunction mass;
    SetFunction belief;
    Rat value_exact = 0;        // meaningful for D1
    double value_float = 0.0;   // meaningful for D2
    bool unique = false;
    bool dominance_minimal = false;
};

namespace detail {

/// Shared constraint polyhedron over mu(B), B in U (variable index B-1):
/// normalization, inner-approximation rows for events with positive
/// envelope value (nonnegativity of mu implies the rest), and the
/// martingale return-sum equality (coefficient of mu(B) is m_{max B});
/// the strong variant adds the mirrored row with m_{min B}.
inline lp::Problem feasibility_system(const MarketModel& model, ApproxKind kind,
                                      const SetFunction& envelope) {
    const Mask full = model.space.full_mask();
    lp::Problem p;
    p.num_vars = full;
    p.add_eq(std::vector<Rat>(full, Rat(1)), Rat(1));
    {
        std::vector<Rat> row(full);
        for (Mask b = 1; b <= full; ++b) {
            row[b - 1] = model.m[std::bit_width(b) - 1];  // m at the largest state of B
        }
        p.add_eq(std::move(row), model.r_factor);
    }
    if (kind == ApproxKind::StrongMartingale) {
        std::vector<Rat> row(full);
        for (Mask b = 1; b <= full; ++b) {
            row[b - 1] = model.m[std::countr_zero(b)];  // m at the smallest state of B
        }
        p.add_eq(std::move(row), model.r_factor);
    }
    for (Mask a = 1; a < full; ++a) {
        if (envelope[a] == 0) continue;
        std::vector<Rat> row(full, Rat(0));
        for (Mask b = a; b != 0; b = (b - 1) & a) row[b - 1] = -1;
        p.add_le(std::move(row), -envelope[a]);
    }
    return p;
}

inline std::vector<Rat> d1_cost(const StateSpace& space) {
    const Mask full = space.full_mask();
    std::vector<Rat> cost(full);
    for (Mask b = 1; b <= full; ++b) {
        cost[b - 1] = Rat(Int(1) << (space.n - std::popcount(b)));
    }
    return cost;
}

inline Rat envelope_total(const SetFunction& envelope) {
    Rat total = 0;
    for (Mask a = 1; a <= envelope.space.full_mask(); ++a) total += envelope[a];
    return total;
}

inline SetFunction mass_from_vector(const StateSpace& space, const std::vector<Rat>& primal) {
    SetFunction mass(space);
    for (Mask b = 1; b <= space.full_mask(); ++b) mass[b] = primal[b - 1];
    return mass;
}

/// A D1 optimum is unique iff every coordinate is constant on the optimal
/// face; checked by minimizing and maximizing each coordinate with the
/// objective pinned at its optimum. Short-circuits on the first free
/// coordinate.
inline bool d1_unique(lp::Problem feasible, const std::vector<Rat>& cost, const Rat& optimum) {
    feasible.add_eq(cost, optimum);
    const std::size_t nv = feasible.num_vars;
    for (std::size_t j = 0; j < nv; ++j) {
        feasible.objective.assign(nv, Rat(0));
        feasible.objective[j] = 1;
        const Rat lo = lp::solve(feasible).objective;
        feasible.objective[j] = -1;
        const Rat hi = -lp::solve(feasible).objective;
        if (lo != hi) return false;
    }
    return true;
}

/// Dominance minimality probe: a strictly dominated feasible point
/// exists iff the sum of belief values can be pushed below the incumbent's
/// under the extra cap Bel'(A) <= Bel(A). The cap uses exact values for D1
/// and rationalized doubles (with slack) for D2.
inline bool dominance_minimal(lp::Problem feasible, const std::vector<Rat>& cost,
                              const SetFunction& belief, const Rat& slack) {
    const Mask full = belief.space.full_mask();
    for (Mask a = 1; a < full; ++a) {
        std::vector<Rat> row(feasible.num_vars, Rat(0));
        for (Mask b = a; b != 0; b = (b - 1) & a) row[b - 1] = 1;
        feasible.add_le(std::move(row), belief[a] + slack);
    }
    feasible.objective = cost;
    const lp::Outcome out = lp::solve(feasible);
    if (out.status == lp::Status::Infeasible) return true;  // nothing at or below the incumbent
    if (out.status != lp::Status::Optimal) throw Error("dominance probe not optimal");
    Rat incumbent = 0;
    for (Mask a = 1; a <= full; ++a) incumbent += belief[a];
    // The objective sums one belief value per capped set, so each set
    // contributes its own slack-sized rounding allowance.
    return out.objective >= incumbent - slack * static_cast<int>(full - 1);
}

inline Rat rat_from_double(double v) {
    return Rat(v);  // exact binary expansion of the double
}

}  // namespace detail

/// Uniform average of the extreme martingale measures; strictly positive
/// on singletons away from the boundary case, where the Dirac collapse can
/// zero a coordinate and a caller-supplied Q0 is required instead.
inline SetFunction default_q0(const MarketModel& model) {
    require_viable(model);
    if (model.n() <= 2) throw TooLarge("default mixing measure requires more than two states");
    const auto points = extreme_points(model);
    SetFunction mass(model.space);
    for (const auto& q : points) {
        const SetFunction m = moebius_transform(q);
        for (Mask b = 1; b <= model.space.full_mask(); ++b) mass[b] += m[b];
    }
    for (Mask b = 1; b <= model.space.full_mask(); ++b) {
        mass[b] /= static_cast<int>(points.size());
    }
    for (int i = 0; i < model.n(); ++i) {
        if (mass[Mask{1} << i] <= 0) {
            throw NotEquivalent("averaged extreme point has a zero singleton; supply q0");
        }
    }
    return zeta_transform(mass);
}

/// Convex mixture (1-eps) q0 + eps bel of capacities; strictly positive on
/// singletons because q0 is, hence equivalent to the real-world measure.
inline SetFunction epsilon_contaminate(const SetFunction& q0, const SetFunction& bel,
                                       const Rat& eps) {
    if (eps <= 0 || eps >= 1) throw EpsOutOfRange("contamination weight must be in (0,1)");
    if (!(q0.space == bel.space)) throw DimensionMismatch("mismatched state spaces");
    if (classify(q0) != CapacityClass::Probability) {
        throw Error("mixing measure must be a probability");
    }
    for (int i = 0; i < q0.space.n; ++i) {
        if (q0[Mask{1} << i] <= 0) {
            throw NotEquivalent("mixing measure must be positive on every singleton");
        }
    }
    if (classify(bel) == CapacityClass::GeneralCapacity) {
        throw NotBelief("contamination target must be a belief function");
    }
    SetFunction out(q0.space);
    for (Mask a = 0; a <= q0.space.full_mask(); ++a) {
        out[a] = (1 - eps) * q0[a] + eps * bel[a];
    }
    return out;
}

namespace detail {

inline ApproxResult solve_d1(const ApproxProblem& problem, const SetFunction& envelope,
                             const ApproxOptions& opts) {
    const auto cost = d1_cost(problem.model.space);
    lp::Problem p = feasibility_system(problem.model, problem.kind, envelope);
    p.objective = cost;
    const lp::Outcome out = lp::solve(p);
    if (out.status != lp::Status::Optimal) {
        throw Error("inner approximation infeasible; model should be viable");
    }
    ApproxResult res;
    res.kind = problem.kind;
    res.distance = ApproxDistance::D1;
    res.mass = mass_from_vector(problem.model.space, out.primal);
    res.belief = zeta_transform(res.mass);
    res.value_exact = out.objective - envelope_total(envelope);
    res.value_float = to_double(res.value_exact);
    lp::Problem face = feasibility_system(problem.model, problem.kind, envelope);
    res.unique = opts.detect_uniqueness && d1_unique(face, cost, out.objective);
    if (opts.check_dominance) {
        lp::Problem probe = feasibility_system(problem.model, problem.kind, envelope);
        res.dominance_minimal = dominance_minimal(std::move(probe), cost, res.belief, Rat(0));
    }
    return res;
}

inline ApproxResult solve_d2(const ApproxProblem& problem, const SetFunction& envelope,
                             const ApproxOptions& opts) {
    const Mask full = problem.model.space.full_mask();
    const auto n_vars = static_cast<Eigen::Index>(full);
    // d2 = || Z mu - q ||^2 with Z the zeta matrix over nonempty events;
    // Z is unit lower triangular in a suitable order, hence invertible and
    // the quadratic form is positive definite (unique optimum).
    Eigen::MatrixXd zeta = Eigen::MatrixXd::Zero(n_vars, n_vars);
    Eigen::VectorXd target(n_vars);
    for (Mask a = 1; a <= full; ++a) {
        for (Mask b = a; b != 0; b = (b - 1) & a) zeta(a - 1, b - 1) = 1.0;
        target(a - 1) = to_double(envelope[a]);
    }
    const Eigen::MatrixXd h = 2.0 * zeta.transpose() * zeta;
    const Eigen::VectorXd g = -2.0 * zeta.transpose() * target;
    const double constant = target.squaredNorm();

    const lp::Problem shell = feasibility_system(problem.model, problem.kind, envelope);

    // Multi-start over random convex mixtures of the extreme-point masses
    // (all feasible); strict convexity means every run lands on the same
    // optimum, the best is kept.
    std::vector<Eigen::VectorXd> starts;
    starts.push_back(qp::detail::feasible_start(shell));
    const auto points = extreme_points(problem.model);
    std::mt19937 rng(opts.seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int s = 0; s < opts.d2_restarts; ++s) {
        std::vector<double> w(points.size());
        double total = 0.0;
        for (auto& wi : w) total += (wi = unif(rng) + 1e-3);
        Eigen::VectorXd x = Eigen::VectorXd::Zero(n_vars);
        for (std::size_t k = 0; k < points.size(); ++k) {
            const SetFunction m = moebius_transform(points[k]);
            for (Mask b = 1; b <= full; ++b) x(b - 1) += (w[k] / total) * to_double(m[b]);
        }
        starts.push_back(std::move(x));
    }
    std::optional<qp::Result> best;
    for (const auto& start : starts) {
        const qp::Result r = qp::solve(h, g, shell, opts.d2_tol, start);
        if (!best || r.objective < best->objective) best = r;
    }

    ApproxResult res;
    res.kind = problem.kind;
    res.distance = ApproxDistance::D2;
    SetFunction mass(problem.model.space);
    for (Mask b = 1; b <= full; ++b) {
        const double v = best->x(b - 1);
        mass[b] = v <= 0.0 ? Rat(0) : rat_from_double(v);
    }
    res.mass = std::move(mass);
    res.belief = zeta_transform(res.mass);
    res.value_float = best->objective + constant;
    res.value_exact = rat_from_double(res.value_float);
    res.unique = true;  // strictly convex objective
    if (opts.check_dominance) {
        lp::Problem probe = feasibility_system(problem.model, problem.kind, envelope);
        res.dominance_minimal = dominance_minimal(std::move(probe), d1_cost(problem.model.space),
                                                  res.belief, rat_from_double(1e-7));
    }
    return res;
}

}  // namespace detail

inline ApproxResult solve_inner(const ApproxProblem& problem, const ApproxOptions& opts = {}) {
    require_viable(problem.model);
    const SetFunction envelope = lower_envelope(problem.model);
    return problem.distance == ApproxDistance::D1 ? detail::solve_d1(problem, envelope, opts)
                                                  : detail::solve_d2(problem, envelope, opts);
}

/// Strong variant; the feasible set collapses to the martingale measures,
/// so the result is checked to be a probability and, for D1, the constant
/// optimal value is asserted.
inline ApproxResult solve_strong(ApproxProblem problem, const ApproxOptions& opts = {}) {
    problem.kind = ApproxKind::StrongMartingale;
    ApproxResult res = solve_inner(problem, opts);
    for (Mask b = 1; b <= problem.model.space.full_mask(); ++b) {
        if (!std::has_single_bit(b) && res.mass[b] != 0) {
            if (res.distance == ApproxDistance::D1 || to_double(res.mass[b]) > 1e-9) {
                throw Error("strong solution has mass outside the singletons");
            }
        }
    }
    if (res.distance == ApproxDistance::D1) {
        const SetFunction envelope = lower_envelope(problem.model);
        const Rat expected =
            Rat(Int(1) << (problem.model.n() - 1)) - detail::envelope_total(envelope);
        if (res.value_exact != expected) {
            throw Error("strong d1 value differs from its closed form");
        }
    }
    return res;
}

}  // namespace martbel

#endif  // MARTBEL_APPROX_HPP
