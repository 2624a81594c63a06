// Copyright 2026 The qfa Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qfa/lp.hpp"

#include <algorithm>
#include <cstdint>
#include <cmath>
#include <stdexcept>

namespace qfa::lp {

enum class ColumnMode : std::uint8_t { Off, NonNegative, Free };

namespace {

constexpr double kEps = 1e-10;
constexpr int kMaxPivots = 200000;
constexpr int kDegenerateStreak = 50;

}  // namespace

// Tableau for  min d.v  s.t.  A v = b, v >= 0  with an artificial identity
// block appended after the structural columns.
class Tableau {
  public:
    Tableau(std::size_t rows, std::size_t structural)
        : rows_(rows), structural_(structural), cols_(structural + rows + 1),
          data_(rows * cols_, 0.0), basis_(rows), col_sign_(cols_, 1.0) {}

    double& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    double& rhs(std::size_t r) { return at(r, cols_ - 1); }
    double rhs(std::size_t r) const { return at(r, cols_ - 1); }

    std::size_t rows() const { return rows_; }
    std::size_t structural() const { return structural_; }
    std::size_t artificial(std::size_t r) const { return structural_ + r; }
    std::vector<std::size_t>& basis() { return basis_; }

    void pivot(std::size_t pr, std::size_t pc) {
        const double inv = 1.0 / at(pr, pc);
        double* prow = &data_[pr * cols_];
        nonzero_.clear();
        for (std::size_t c = 0; c < cols_; ++c) {
            if (prow[c] == 0.0) continue;
            prow[c] *= inv;
            nonzero_.push_back(c);
        }
        prow[pc] = 1.0;
        auto eliminate = [&](double* row) {
            const double f = row[pc];
            if (f == 0.0) return;
            for (std::size_t c : nonzero_) row[c] -= f * prow[c];
            row[pc] = 0.0;
        };
        for (std::size_t r = 0; r < rows_; ++r)
            if (r != pr) eliminate(&data_[r * cols_]);
        eliminate(reduced_.data());
        basis_[pr] = pc;
    }

    // Recomputes the reduced-cost row for `cost`; pivots keep it current.
    void price(const std::vector<double>& cost) {
        reduced_.assign(cols_, 0.0);
        for (std::size_t c = 0; c + 1 < cols_; ++c) reduced_[c] = cost[c] * col_sign_[c];
        for (std::size_t r = 0; r < rows_; ++r) {
            const double cb = cost[basis_[r]] * col_sign_[basis_[r]];
            if (cb == 0.0) continue;
            for (std::size_t c = 0; c < cols_; ++c) reduced_[c] -= cb * at(r, c);
        }
    }

    double reduced(std::size_t c) const { return reduced_[c]; }

    // Substitutes v -> -v for a nonbasic column.
    void negate_column(std::size_t c) {
        for (std::size_t r = 0; r < rows_; ++r) at(r, c) = -at(r, c);
        reduced_[c] = -reduced_[c];
        col_sign_[c] = -col_sign_[c];
    }

    // Objective value of the current basis.
    double objective() const { return -reduced_[cols_ - 1]; }

    // One simplex run against the priced cost row. Dantzig pricing, falling
    // back to Bland's rule after a streak of degenerate pivots so the
    // degenerate penalty systems cannot cycle. Free columns may enter in
    // either direction; a column entering downwards is negated first. Stops
    // early once the objective drops to `cutoff`.
    Status run(const std::vector<ColumnMode>& mode, double cutoff = -kInf) {
        int degenerate = 0;
        for (int it = 0; it < kMaxPivots; ++it) {
            if (objective() <= cutoff) return Status::Cutoff;
            const bool bland = degenerate > kDegenerateStreak;
            std::size_t enter = cols_;
            double most = kEps;
            for (std::size_t c = 0; c + 1 < cols_; ++c) {
                if (mode[c] == ColumnMode::Off) continue;
                const double score = mode[c] == ColumnMode::Free ? std::abs(reduced_[c]) : -reduced_[c];
                if (score > most) {
                    enter = c;
                    if (bland) break;
                    most = score;
                }
            }
            if (enter == cols_) return Status::Optimal;
            if (reduced_[enter] > 0.0) negate_column(enter);
            std::size_t leave = rows_;
            double best = 0.0;
            for (std::size_t r = 0; r < rows_; ++r) {
                const double a = at(r, enter);
                if (a <= kEps) continue;
                const double ratio = rhs(r) / a;
                if (leave == rows_ || ratio < best - kEps ||
                    (std::abs(ratio - best) <= kEps && basis_[r] < basis_[leave])) {
                    leave = r;
                    best = ratio;
                }
            }
            if (leave == rows_) return Status::Unbounded;
            degenerate = best <= kEps ? degenerate + 1 : 0;
            pivot(leave, enter);
        }
        return Status::IterationLimit;
    }

  private:
    std::size_t rows_, structural_, cols_;
    std::vector<double> data_;
    std::vector<std::size_t> basis_;
    std::vector<double> reduced_;
    std::vector<double> col_sign_;
    std::vector<std::size_t> nonzero_;
};

// The primal  max c.x  s.t.  G x <= h,  E x = e  (x free) is solved through
// its dual  min h.y + e.z  s.t.  G^T y + E^T z = c,  y >= 0, z free.
// Tightening inequality k to an equality frees the sign of y_k.
TighteningLp::TighteningLp(const Problem& problem) : n_(problem.num_vars), objective_(problem.objective) {
    const std::size_t n = n_;
    if (problem.objective.size() != n || problem.lower.size() != n || problem.upper.size() != n)
        throw std::invalid_argument("lp: dimension mismatch");

    std::vector<std::vector<double>> cols;  // dual columns, each of length n
    std::vector<double> col_cost;
    std::vector<ColumnMode> col_mode;
    column_.assign(problem.rows.size(), -1);
    auto push = [&](std::vector<double> c, double cost, ColumnMode mode) {
        cols.push_back(std::move(c));
        col_cost.push_back(cost);
        col_mode.push_back(mode);
        return static_cast<long>(cols.size() - 1);
    };
    auto negated = [](std::vector<double> v) {
        for (auto& x : v) x = -x;
        return v;
    };

    for (std::size_t r = 0; r < problem.rows.size(); ++r) {
        const auto& row = problem.rows[r];
        if (row.coeffs.size() != n) throw std::invalid_argument("lp: row width mismatch");
        switch (row.sense) {
            case Sense::LessEq:
                column_[r] = push(row.coeffs, row.rhs, ColumnMode::NonNegative);
                break;
            case Sense::GreaterEq:
                column_[r] = push(negated(row.coeffs), -row.rhs, ColumnMode::NonNegative);
                break;
            case Sense::Equal:
                push(row.coeffs, row.rhs, ColumnMode::Free);
                break;
        }
    }
    for (std::size_t j = 0; j < n; ++j) {
        const double lo = problem.lower[j], hi = problem.upper[j];
        if (lo > hi) throw std::invalid_argument("lp: empty bound interval");
        std::vector<double> unit(n, 0.0);
        unit[j] = 1.0;
        if (std::isfinite(hi)) push(unit, hi, ColumnMode::NonNegative);
        if (std::isfinite(lo)) push(negated(unit), -lo, ColumnMode::NonNegative);
    }

    tab_ = std::make_unique<Tableau>(n, cols.size());
    sign_.assign(n, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (objective_[i] < 0.0) sign_[i] = -1.0;
        for (std::size_t k = 0; k < cols.size(); ++k) tab_->at(i, k) = sign_[i] * cols[k][i];
        tab_->at(i, tab_->artificial(i)) = 1.0;
        tab_->rhs(i) = sign_[i] * objective_[i];
        tab_->basis()[i] = tab_->artificial(i);
    }

    // Phase 1 minimizes the artificial sum.
    const std::size_t structural = cols.size();
    const std::size_t total = structural + n;
    cost_.assign(total, 0.0);
    mode_.assign(total, ColumnMode::NonNegative);
    for (std::size_t k = 0; k < structural; ++k) mode_[k] = col_mode[k];
    for (std::size_t i = 0; i < n; ++i) cost_[tab_->artificial(i)] = 1.0;
    tab_->price(cost_);
    const Status st = tab_->run(mode_);
    double infeasibility = 0.0;
    for (std::size_t r = 0; r < n; ++r)
        if (tab_->basis()[r] >= structural) infeasibility += tab_->rhs(r);
    if (st != Status::Optimal || infeasibility > 1e-8) {
        dual_infeasible_ = true;
        return;
    }
    for (std::size_t r = 0; r < n; ++r) {
        if (tab_->basis()[r] < structural) continue;
        for (std::size_t c = 0; c < structural; ++c) {
            if (mode_[c] != ColumnMode::Off && std::abs(tab_->at(r, c)) > 1e-9) {
                tab_->pivot(r, c);
                break;
            }
        }
    }
    std::fill(cost_.begin(), cost_.end(), 0.0);
    for (std::size_t k = 0; k < structural; ++k) cost_[k] = col_cost[k];
    for (std::size_t i = 0; i < n; ++i) mode_[tab_->artificial(i)] = ColumnMode::Off;
    tab_->price(cost_);
}

TighteningLp::TighteningLp(const TighteningLp& other)
    : n_(other.n_), objective_(other.objective_), sign_(other.sign_), cost_(other.cost_), mode_(other.mode_),
      column_(other.column_), tab_(other.tab_ ? std::make_unique<Tableau>(*other.tab_) : nullptr),
      dual_infeasible_(other.dual_infeasible_) {}

TighteningLp& TighteningLp::operator=(const TighteningLp& other) {
    if (this != &other) *this = TighteningLp(other);
    return *this;
}

TighteningLp::TighteningLp(TighteningLp&&) noexcept = default;
TighteningLp& TighteningLp::operator=(TighteningLp&&) noexcept = default;
TighteningLp::~TighteningLp() = default;

void TighteningLp::make_equal(std::size_t row) {
    const long c = column_.at(row);
    if (c < 0) throw std::invalid_argument("lp: row is already an equality");
    mode_[static_cast<std::size_t>(c)] = ColumnMode::Free;
    column_[row] = -1;
}

Solution TighteningLp::solve(double cutoff) {
    // Dual infeasible: the primal is unbounded (callers pass feasible primals).
    if (dual_infeasible_) return Solution{Status::Unbounded, 0.0, {}};
    const Status st = tab_->run(mode_, cutoff);
    if (st == Status::Unbounded) return Solution{Status::Infeasible, 0.0, {}};
    if (st == Status::IterationLimit) return Solution{st, 0.0, {}};
    if (st == Status::Cutoff) return Solution{st, tab_->objective(), {}};

    // Primal values are the simplex multipliers of the dual rows.
    Solution sol;
    sol.status = Status::Optimal;
    sol.x.assign(n_, 0.0);
    // Artificial columns cost nothing in phase 2, so their reduced costs are
    // the negated multipliers.
    for (std::size_t i = 0; i < n_; ++i) sol.x[i] = -sign_[i] * tab_->reduced(tab_->artificial(i));
    for (std::size_t i = 0; i < n_; ++i) sol.objective += objective_[i] * sol.x[i];
    return sol;
}

Solution solve(const Problem& problem) {
    for (std::size_t j = 0; j < problem.num_vars && j < problem.lower.size() && j < problem.upper.size(); ++j)
        if (problem.lower[j] > problem.upper[j]) return Solution{Status::Infeasible, 0.0, {}};
    TighteningLp lp(problem);
    return lp.solve();
}

}  // namespace qfa::lp
