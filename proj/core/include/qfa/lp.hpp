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

#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <vector>

namespace qfa::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense { LessEq, GreaterEq, Equal };

struct Row {
    std::vector<double> coeffs;  // dense, one entry per variable
    Sense sense = Sense::LessEq;
    double rhs = 0.0;
};

// maximize objective . x  subject to rows and lower <= x <= upper.
// Bounds may be infinite.
struct Problem {
    std::size_t num_vars = 0;
    std::vector<double> objective;
    std::vector<double> lower;
    std::vector<double> upper;
    std::vector<Row> rows;

    explicit Problem(std::size_t n = 0)
        : num_vars(n), objective(n, 0.0), lower(n, -kInf), upper(n, kInf) {}

    void add_row(std::vector<double> coeffs, Sense sense, double rhs) {
        rows.push_back(Row{std::move(coeffs), sense, rhs});
    }
};

enum class Status {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
    Cutoff,  // optimum proven not to exceed the requested cutoff
};

struct Solution {
    Status status = Status::Infeasible;
    double objective = 0.0;
    std::vector<double> x;
};

class Tableau;
enum class ColumnMode : std::uint8_t;

/// Re-solvable LP whose inequality rows may later be tightened to
/// equalities. Each tightening only enables one more column of the dual
/// tableau, so the previous optimal basis stays feasible and a re-solve
/// takes a handful of pivots. Copies are independent snapshots.
class TighteningLp {
  public:
    explicit TighteningLp(const Problem& problem);
    TighteningLp(const TighteningLp& other);
    TighteningLp& operator=(const TighteningLp& other);
    TighteningLp(TighteningLp&&) noexcept;
    TighteningLp& operator=(TighteningLp&&) noexcept;
    ~TighteningLp();

    // `row` indexes problem.rows and must not be an equality already.
    void make_equal(std::size_t row);
    // With a finite cutoff the solve may stop with Status::Cutoff as soon as
    // the optimum is known to be <= cutoff.
    Solution solve(double cutoff = -kInf);

  private:
    std::size_t n_ = 0;
    std::vector<double> objective_;
    std::vector<double> sign_;
    std::vector<double> cost_;
    std::vector<ColumnMode> mode_;
    std::vector<long> column_;  // per problem row, its inequality dual column or -1
    std::unique_ptr<Tableau> tab_;
    bool dual_infeasible_ = false;
};

/// Dense two-phase simplex. The problem is solved through its dual, which
/// has one equality row per primal variable; our penalty LPs have a few
/// dozen variables and hundreds of constraints, so the dual tableau is small.
/// Bland's rule keeps the heavily degenerate penalty systems from cycling.
Solution solve(const Problem& problem);

}  // namespace qfa::lp
