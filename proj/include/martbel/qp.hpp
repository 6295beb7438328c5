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

#ifndef MARTBEL_QP_HPP
#define MARTBEL_QP_HPP

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "martbel/errors.hpp"
#include "martbel/lp.hpp"
#include "martbel/rational.hpp"

namespace martbel::qp {

/// min (1/2) x'Hx + g'x over the polyhedron described by an lp::Problem
/// shell (its objective is ignored). H must be positive semidefinite on
/// the feasible set's affine hull.
struct Result {
    Eigen::VectorXd x;
    double objective = 0.0;
    int iterations = 0;
};

namespace detail {

struct Constraints {
    Eigen::MatrixXd eq;       // E x = be
    Eigen::VectorXd eq_rhs;
    Eigen::MatrixXd ineq;     // C x <= d  (le rows, then -x_j <= 0 for nonneg vars)
    Eigen::VectorXd ineq_rhs;
};

inline Constraints to_double(const lp::Problem& shell) {
    const auto n = static_cast<Eigen::Index>(shell.num_vars);
    Constraints c;
    const auto ne = static_cast<Eigen::Index>(shell.eq.size());
    c.eq.resize(ne, n);
    c.eq_rhs.resize(ne);
    for (Eigen::Index i = 0; i < ne; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) c.eq(i, j) = martbel::to_double(shell.eq[i][j]);
        c.eq_rhs(i) = martbel::to_double(shell.eq_rhs[i]);
    }
    std::size_t num_nonneg = 0;
    for (std::size_t j = 0; j < shell.num_vars; ++j) {
        if (shell.var_nonneg(j)) ++num_nonneg;
    }
    const auto ni = static_cast<Eigen::Index>(shell.le.size() + num_nonneg);
    c.ineq.setZero(ni, n);
    c.ineq_rhs.setZero(ni);
    for (std::size_t i = 0; i < shell.le.size(); ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            c.ineq(static_cast<Eigen::Index>(i), j) = martbel::to_double(shell.le[i][j]);
        }
        c.ineq_rhs(static_cast<Eigen::Index>(i)) = martbel::to_double(shell.le_rhs[i]);
    }
    Eigen::Index row = static_cast<Eigen::Index>(shell.le.size());
    for (std::size_t j = 0; j < shell.num_vars; ++j) {
        if (shell.var_nonneg(j)) c.ineq(row++, static_cast<Eigen::Index>(j)) = -1.0;
    }
    return c;
}

inline Eigen::VectorXd feasible_start(const lp::Problem& shell) {
    lp::Problem feas = shell;
    feas.objective.clear();
    const lp::Outcome out = lp::solve(feas);
    if (out.status != lp::Status::Optimal) {
        throw Error("qp: constraint polyhedron is empty or unbounded feasibility search failed");
    }
    Eigen::VectorXd x(static_cast<Eigen::Index>(shell.num_vars));
    for (std::size_t j = 0; j < shell.num_vars; ++j) {
        x(static_cast<Eigen::Index>(j)) = martbel::to_double(out.primal[j]);
    }
    return x;
}

}  // namespace detail

/// Primal active-set method with nullspace steps. Deterministic: no
/// internal randomness; multi-start callers vary the start point.
inline Result solve(const Eigen::MatrixXd& H, const Eigen::VectorXd& g, const lp::Problem& shell,
                    double tol = 1e-9,
                    std::optional<Eigen::VectorXd> start = std::nullopt,
                    int max_iterations = 1000) {
    const Eigen::Index n = H.rows();
    if (H.cols() != n || g.size() != n || static_cast<std::size_t>(n) != shell.num_vars) {
        throw DimensionMismatch("qp: dimension mismatch");
    }
    const detail::Constraints c = detail::to_double(shell);
    Eigen::VectorXd x = start ? *start : detail::feasible_start(shell);
    if (x.size() != n) throw DimensionMismatch("qp: start point dimension mismatch");

    const double act_tol = 1e-11;
    std::vector<Eigen::Index> working;
    for (Eigen::Index i = 0; i < c.ineq.rows(); ++i) {
        if (std::abs(c.ineq.row(i) * x - c.ineq_rhs(i)) <= act_tol) working.push_back(i);
    }

    auto stacked = [&]() {
        Eigen::MatrixXd m(c.eq.rows() + static_cast<Eigen::Index>(working.size()), n);
        if (c.eq.rows() > 0) m.topRows(c.eq.rows()) = c.eq;
        for (std::size_t k = 0; k < working.size(); ++k) {
            m.row(c.eq.rows() + static_cast<Eigen::Index>(k)) = c.ineq.row(working[k]);
        }
        return m;
    };

    int iter = 0;
    for (; iter < max_iterations; ++iter) {
        const Eigen::VectorXd grad = H * x + g;
        const Eigen::MatrixXd m = stacked();
        Eigen::MatrixXd nullspace;
        if (m.rows() == 0) {
            nullspace = Eigen::MatrixXd::Identity(n, n);
        } else {
            // kernel() emits a single zero column for a trivial kernel;
            // keep only genuinely nonzero directions.
            const Eigen::MatrixXd raw = Eigen::FullPivLU<Eigen::MatrixXd>(m).kernel();
            Eigen::Index keep = 0;
            nullspace.resize(n, raw.cols());
            for (Eigen::Index j = 0; j < raw.cols(); ++j) {
                if (raw.col(j).lpNorm<Eigen::Infinity>() > 1e-13) nullspace.col(keep++) = raw.col(j);
            }
            nullspace.conservativeResize(n, keep);
        }
        Eigen::VectorXd p = Eigen::VectorXd::Zero(n);
        if (nullspace.cols() > 0) {
            const Eigen::MatrixXd reduced_h = nullspace.transpose() * H * nullspace;
            const Eigen::VectorXd reduced_g = -nullspace.transpose() * grad;
            const Eigen::VectorXd w =
                reduced_h.ldlt().solve(reduced_g);
            p = nullspace * w;
        }
        if (p.lpNorm<Eigen::Infinity>() <= 1e-11 * (1.0 + x.lpNorm<Eigen::Infinity>())) {
            // Stationary on the working face: check multipliers of
            // grad + E'y + C_W'nu = 0, nu >= 0.
            if (working.empty()) {
                break;
            }
            const Eigen::VectorXd mu =
                m.transpose().colPivHouseholderQr().solve(-grad);
            Eigen::Index worst = -1;
            double worst_val = -tol;
            for (std::size_t k = 0; k < working.size(); ++k) {
                const double nu = mu(c.eq.rows() + static_cast<Eigen::Index>(k));
                if (nu < worst_val) {
                    worst_val = nu;
                    worst = static_cast<Eigen::Index>(k);
                }
            }
            if (worst < 0) break;
            working.erase(working.begin() + worst);
            continue;
        }
        // Ratio test against inactive inequalities.
        double alpha = 1.0;
        Eigen::Index blocking = -1;
        for (Eigen::Index i = 0; i < c.ineq.rows(); ++i) {
            bool in_working = false;
            for (const Eigen::Index w : working) {
                if (w == i) {
                    in_working = true;
                    break;
                }
            }
            if (in_working) continue;
            const double dir = c.ineq.row(i) * p;
            if (dir <= 1e-13) continue;
            const double slack = c.ineq_rhs(i) - c.ineq.row(i) * x;
            const double a = std::max(slack, 0.0) / dir;
            if (a < alpha) {
                alpha = a;
                blocking = i;
            }
        }
        x += alpha * p;
        if (blocking >= 0) working.push_back(blocking);
    }
    if (iter >= max_iterations) {
        throw NotConverged("qp: iteration cap reached");
    }

    // Verify KKT and feasibility residuals before returning.
    const Eigen::VectorXd grad = H * x + g;
    const Eigen::MatrixXd m = stacked();
    double kkt = grad.lpNorm<Eigen::Infinity>();
    if (m.rows() > 0) {
        const Eigen::VectorXd mu = m.transpose().colPivHouseholderQr().solve(-grad);
        kkt = (grad + m.transpose() * mu).lpNorm<Eigen::Infinity>();
        for (std::size_t k = 0; k < working.size(); ++k) {
            const double nu = mu(c.eq.rows() + static_cast<Eigen::Index>(k));
            if (nu < -tol) throw NotConverged("qp: negative multiplier at termination");
        }
    }
    double feas = 0.0;
    if (c.eq.rows() > 0) feas = (c.eq * x - c.eq_rhs).lpNorm<Eigen::Infinity>();
    for (Eigen::Index i = 0; i < c.ineq.rows(); ++i) {
        feas = std::max(feas, static_cast<double>(c.ineq.row(i) * x - c.ineq_rhs(i)));
    }
    if (kkt > tol || feas > tol) {
        throw NotConverged("qp: KKT or feasibility residual above tolerance");
    }

    Result res;
    res.x = x;
    res.objective = 0.5 * x.dot(H * x) + g.dot(x);
    res.iterations = iter;
    return res;
}

}  // namespace martbel::qp

#endif  // MARTBEL_QP_HPP
