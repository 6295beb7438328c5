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

#ifndef MARTBEL_LP_HPP
#define MARTBEL_LP_HPP

#include <cstddef>
#include <utility>
#include <vector>

#include "martbel/errors.hpp"
#include "martbel/rational.hpp"

namespace martbel::lp {

enum class Status { Optimal, Infeasible, Unbounded };

/// min objective.x  s.t.  eq.x = eq_rhs,  le.x <= le_rhs,  x_j >= 0 where
/// nonneg[j] (free otherwise). All data exact rationals.
struct Problem {
    std::size_t num_vars = 0;
    std::vector<Rat> objective;                 // empty means all-zero (pure feasibility)
    std::vector<std::vector<Rat>> eq;
    std::vector<Rat> eq_rhs;
    std::vector<std::vector<Rat>> le;
    std::vector<Rat> le_rhs;
    std::vector<char> nonneg;                   // empty means all nonnegative

    void add_eq(std::vector<Rat> row, Rat rhs) {
        eq.push_back(std::move(row));
        eq_rhs.push_back(std::move(rhs));
    }
    void add_le(std::vector<Rat> row, Rat rhs) {
        le.push_back(std::move(row));
        le_rhs.push_back(std::move(rhs));
    }
    bool var_nonneg(std::size_t j) const { return nonneg.empty() || nonneg[j]; }
};

/// Outcome with exact certificates. `dual` is indexed eq rows first, then
/// le rows. When Optimal it carries the simplex multipliers (le duals are
/// <= 0 for this min/<= orientation); when Infeasible it is a Farkas ray y
/// with y.col <= 0 on nonnegative variables, y.col = 0 on free variables,
/// y_le <= 0, and y.rhs > 0. Both are re-verified exactly before return.
struct Outcome {
    Status status = Status::Infeasible;
    std::vector<Rat> primal;
    std::vector<Rat> dual;
    Rat objective = 0;
};

namespace detail {

class Simplex {
public:
    explicit Simplex(const Problem& p) : p_(p) {
        validate();
        build();
    }

    Outcome run() {
        if (!phase1()) {
            return infeasible_outcome();
        }
        drive_out_artificials();
        return phase2();
    }

private:
    enum class Step { Optimal, Pivoted, Unbounded };

    const Problem& p_;
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;          // structural + slack columns
    std::size_t total_cols_ = 0;    // + artificial columns
    std::size_t slack0_ = 0;        // first slack column
    std::vector<std::vector<Rat>> t_;   // rows_ x (total_cols_ + 1), last is rhs
    std::vector<Rat> z_;                // reduced-cost row, same width
    Rat z_value_ = 0;                   // current objective value
    std::vector<std::size_t> basis_;
    std::vector<Rat> cost_;             // phase-2 cost per column
    std::vector<int> row_sign_;         // original row -> canonical sign
    std::vector<char> has_art_;         // row started with an artificial column
    std::vector<std::size_t> plus_col_;   // variable -> column of x+
    std::vector<std::size_t> minus_col_;  // variable -> column of x- (free vars)

    void validate() const {
        const std::size_t nv = p_.num_vars;
        if (!p_.objective.empty() && p_.objective.size() != nv) {
            throw DimensionMismatch("objective length mismatch");
        }
        if (!p_.nonneg.empty() && p_.nonneg.size() != nv) {
            throw DimensionMismatch("nonneg mask length mismatch");
        }
        if (p_.eq.size() != p_.eq_rhs.size() || p_.le.size() != p_.le_rhs.size()) {
            throw DimensionMismatch("rhs length mismatch");
        }
        for (const auto& row : p_.eq) {
            if (row.size() != nv) throw DimensionMismatch("eq row length mismatch");
        }
        for (const auto& row : p_.le) {
            if (row.size() != nv) throw DimensionMismatch("le row length mismatch");
        }
    }

    Rat obj_coeff(std::size_t j) const {
        return p_.objective.empty() ? Rat(0) : p_.objective[j];
    }

    void build() {
        const std::size_t nv = p_.num_vars;
        const std::size_t ne = p_.eq.size();
        const std::size_t nl = p_.le.size();
        rows_ = ne + nl;

        plus_col_.assign(nv, 0);
        minus_col_.assign(nv, std::size_t(-1));
        cols_ = 0;
        for (std::size_t j = 0; j < nv; ++j) {
            plus_col_[j] = cols_++;
            if (!p_.var_nonneg(j)) minus_col_[j] = cols_++;
        }
        slack0_ = cols_;
        cols_ += nl;
        total_cols_ = cols_ + rows_;

        t_.assign(rows_, std::vector<Rat>(total_cols_ + 1, Rat(0)));
        row_sign_.assign(rows_, 1);
        has_art_.assign(rows_, 0);
        cost_.assign(total_cols_, Rat(0));
        basis_.assign(rows_, 0);

        for (std::size_t i = 0; i < rows_; ++i) {
            const bool is_eq = i < ne;
            const auto& row = is_eq ? p_.eq[i] : p_.le[i - ne];
            const Rat& rhs = is_eq ? p_.eq_rhs[i] : p_.le_rhs[i - ne];
            const int sign = rhs < 0 ? -1 : 1;
            row_sign_[i] = sign;
            for (std::size_t j = 0; j < nv; ++j) {
                if (row[j] == 0) continue;
                t_[i][plus_col_[j]] = sign * row[j];
                if (minus_col_[j] != std::size_t(-1)) t_[i][minus_col_[j]] = -sign * row[j];
            }
            if (!is_eq) t_[i][slack0_ + (i - ne)] = Rat(sign);
            t_[i][total_cols_] = sign * rhs;
        }
        for (std::size_t j = 0; j < nv; ++j) {
            cost_[plus_col_[j]] = obj_coeff(j);
            if (minus_col_[j] != std::size_t(-1)) cost_[minus_col_[j]] = -obj_coeff(j);
        }

        // Initial basis: a le row whose slack kept coefficient +1 can use
        // the slack; every other row gets an artificial column.
        for (std::size_t i = 0; i < rows_; ++i) {
            if (i >= ne && row_sign_[i] == 1) {
                basis_[i] = slack0_ + (i - ne);
            } else {
                basis_[i] = cols_ + i;
                t_[i][cols_ + i] = 1;
                has_art_[i] = 1;
            }
        }
    }

    bool is_artificial(std::size_t col) const { return col >= cols_; }

    void pivot(std::size_t row, std::size_t col) {
        auto& prow = t_[row];
        const Rat inv = 1 / prow[col];
        if (inv != 1) {
            for (auto& cell : prow) {
                if (cell != 0) cell *= inv;
            }
        }
        for (std::size_t i = 0; i < rows_; ++i) {
            if (i == row || t_[i][col] == 0) continue;
            const Rat factor = t_[i][col];
            auto& irow = t_[i];
            for (std::size_t j = 0; j <= total_cols_; ++j) {
                if (prow[j] != 0) irow[j] -= factor * prow[j];
            }
        }
        if (z_[col] != 0) {
            const Rat factor = z_[col];
            for (std::size_t j = 0; j <= total_cols_; ++j) {
                if (prow[j] != 0) z_[j] -= factor * prow[j];
            }
            z_value_ += factor * prow[total_cols_];
        }
        basis_[row] = col;
    }

    // Bland's rule: entering column is the lowest-index eligible one;
    // leaving row is the minimum ratio, ties by lowest basis index.
    Step bland_step(bool allow_artificial) {
        std::size_t enter = total_cols_;
        for (std::size_t j = 0; j < total_cols_; ++j) {
            if (!allow_artificial && is_artificial(j)) continue;
            if (z_[j] < 0) {
                enter = j;
                break;
            }
        }
        if (enter == total_cols_) return Step::Optimal;
        std::size_t leave = rows_;
        Rat best_ratio;
        for (std::size_t i = 0; i < rows_; ++i) {
            if (t_[i][enter] <= 0) continue;
            const Rat ratio = t_[i][total_cols_] / t_[i][enter];
            if (leave == rows_ || ratio < best_ratio ||
                (ratio == best_ratio && basis_[i] < basis_[leave])) {
                leave = i;
                best_ratio = ratio;
            }
        }
        if (leave == rows_) return Step::Unbounded;
        pivot(leave, enter);
        return Step::Pivoted;
    }

    void load_cost_row(const std::vector<Rat>& cost) {
        z_.assign(total_cols_ + 1, Rat(0));
        z_value_ = 0;
        for (std::size_t j = 0; j < total_cols_; ++j) z_[j] = j < cost.size() ? cost[j] : Rat(0);
        for (std::size_t i = 0; i < rows_; ++i) {
            const Rat cb = basis_[i] < cost.size() ? cost[basis_[i]] : Rat(0);
            if (cb == 0) continue;
            for (std::size_t j = 0; j <= total_cols_; ++j) {
                if (t_[i][j] != 0) z_[j] -= cb * t_[i][j];
            }
            z_value_ += cb * t_[i][total_cols_];
        }
    }

    bool phase1() {
        std::vector<Rat> phase1_cost(total_cols_, Rat(0));
        bool any_artificial = false;
        for (std::size_t i = 0; i < rows_; ++i) {
            if (has_art_[i]) {
                phase1_cost[cols_ + i] = 1;
                any_artificial = true;
            }
        }
        if (!any_artificial) return true;
        load_cost_row(phase1_cost);
        while (bland_step(/*allow_artificial=*/true) == Step::Pivoted) {
        }
        return z_value_ == 0;
    }

    // An artificial still basic after phase 1 sits at value zero. Pivot it
    // out on any non-artificial column so phase-2 pivots cannot push it
    // positive again. A row whose non-artificial entries are all zero is
    // redundant: it stays inert from here on and its multiplier comes out
    // as zero.
    void drive_out_artificials() {
        for (std::size_t i = 0; i < rows_; ++i) {
            if (!is_artificial(basis_[i])) continue;
            for (std::size_t j = 0; j < cols_; ++j) {
                if (t_[i][j] != 0) {
                    pivot(i, j);
                    break;
                }
            }
        }
    }

    Outcome infeasible_outcome() const {
        // Farkas ray from the phase-1 multipliers, mapped through the row
        // sign back to the original orientation. For a row with an
        // artificial column (phase-1 cost 1) the multiplier is 1 minus
        // that column's reduced cost; a slack-basis row never had one, so
        // its slack column (cost 0) gives minus the reduced cost instead.
        const std::size_t ne = p_.eq.size();
        Outcome out;
        out.status = Status::Infeasible;
        out.dual.resize(rows_);
        for (std::size_t i = 0; i < rows_; ++i) {
            const Rat y = has_art_[i] ? Rat(1 - z_[cols_ + i]) : Rat(-z_[slack0_ + (i - ne)]);
            out.dual[i] = row_sign_[i] * y;
        }
        verify_farkas(out.dual);
        return out;
    }

    Outcome phase2() {
        load_cost_row(cost_);
        Step step;
        while ((step = bland_step(/*allow_artificial=*/false)) == Step::Pivoted) {
        }
        if (step == Step::Unbounded) {
            Outcome out;
            out.status = Status::Unbounded;
            return out;
        }
        Outcome out;
        out.status = Status::Optimal;
        out.primal.assign(p_.num_vars, Rat(0));
        std::vector<Rat> col_value(total_cols_, Rat(0));
        for (std::size_t i = 0; i < rows_; ++i) col_value[basis_[i]] = t_[i][total_cols_];
        for (std::size_t j = 0; j < p_.num_vars; ++j) {
            out.primal[j] = col_value[plus_col_[j]];
            if (minus_col_[j] != std::size_t(-1)) out.primal[j] -= col_value[minus_col_[j]];
        }
        out.objective = 0;
        for (std::size_t j = 0; j < p_.num_vars; ++j) out.objective += obj_coeff(j) * out.primal[j];
        // Multipliers: the artificial (or slack, for slack-basis rows)
        // column of row i carries -y_i as its reduced cost, both costs
        // being zero in phase 2.
        const std::size_t ne = p_.eq.size();
        out.dual.resize(rows_);
        for (std::size_t i = 0; i < rows_; ++i) {
            const Rat y = has_art_[i] ? Rat(-z_[cols_ + i]) : Rat(-z_[slack0_ + (i - ne)]);
            out.dual[i] = row_sign_[i] * y;
        }
        verify_optimal(out);
        return out;
    }

    // --- exact certificate replay against the original data ---

    Rat dual_row_combination(const std::vector<Rat>& y, std::size_t j) const {
        Rat v = 0;
        const std::size_t ne = p_.eq.size();
        for (std::size_t i = 0; i < ne; ++i) v += y[i] * p_.eq[i][j];
        for (std::size_t i = 0; i < p_.le.size(); ++i) v += y[ne + i] * p_.le[i][j];
        return v;
    }

    Rat dual_rhs_combination(const std::vector<Rat>& y) const {
        Rat v = 0;
        const std::size_t ne = p_.eq.size();
        for (std::size_t i = 0; i < ne; ++i) v += y[i] * p_.eq_rhs[i];
        for (std::size_t i = 0; i < p_.le.size(); ++i) v += y[ne + i] * p_.le_rhs[i];
        return v;
    }

    void verify_farkas(const std::vector<Rat>& y) const {
        for (std::size_t j = 0; j < p_.num_vars; ++j) {
            const Rat v = dual_row_combination(y, j);
            if (p_.var_nonneg(j) ? v > 0 : v != 0) {
                throw Error("lp: Farkas certificate failed replay");
            }
        }
        const std::size_t ne = p_.eq.size();
        for (std::size_t i = 0; i < p_.le.size(); ++i) {
            if (y[ne + i] > 0) throw Error("lp: Farkas certificate failed replay");
        }
        if (dual_rhs_combination(y) <= 0) {
            throw Error("lp: Farkas certificate failed replay");
        }
    }

    void verify_optimal(const Outcome& out) const {
        const std::size_t ne = p_.eq.size();
        for (std::size_t i = 0; i < ne; ++i) {
            Rat lhs = 0;
            for (std::size_t j = 0; j < p_.num_vars; ++j) lhs += p_.eq[i][j] * out.primal[j];
            if (lhs != p_.eq_rhs[i]) throw Error("lp: primal equality residual nonzero");
        }
        std::vector<Rat> le_slack(p_.le.size());
        for (std::size_t i = 0; i < p_.le.size(); ++i) {
            Rat lhs = 0;
            for (std::size_t j = 0; j < p_.num_vars; ++j) lhs += p_.le[i][j] * out.primal[j];
            if (lhs > p_.le_rhs[i]) throw Error("lp: primal inequality violated");
            le_slack[i] = p_.le_rhs[i] - lhs;
        }
        for (std::size_t j = 0; j < p_.num_vars; ++j) {
            if (p_.var_nonneg(j) && out.primal[j] < 0) throw Error("lp: sign violated");
        }
        for (std::size_t i = 0; i < p_.le.size(); ++i) {
            if (out.dual[ne + i] > 0) throw Error("lp: dual sign violated");
            if (le_slack[i] != 0 && out.dual[ne + i] != 0) {
                throw Error("lp: complementary slackness violated");
            }
        }
        for (std::size_t j = 0; j < p_.num_vars; ++j) {
            const Rat reduced = obj_coeff(j) - dual_row_combination(out.dual, j);
            if (p_.var_nonneg(j)) {
                if (reduced < 0) throw Error("lp: reduced cost negative");
                if (out.primal[j] != 0 && reduced != 0) {
                    throw Error("lp: complementary slackness violated");
                }
            } else if (reduced != 0) {
                throw Error("lp: free-variable reduced cost nonzero");
            }
        }
        if (dual_rhs_combination(out.dual) != out.objective) {
            throw Error("lp: strong duality failed");
        }
    }
};

}  // namespace detail

/// Exact primal simplex (Bland's anti-cycling rule) with certificate
/// replay. Deterministic: identical inputs give identical outputs.
inline Outcome solve(const Problem& problem) {
    return detail::Simplex(problem).run();
}

}  // namespace martbel::lp

#endif  // MARTBEL_LP_HPP
