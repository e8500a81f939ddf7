#pragma once

#include <utility>
#include <vector>

namespace calpkit::lp {

enum class Sense { LessEqual, Equal, GreaterEqual };

struct Row {
    std::vector<std::pair<int, double>> coef;
    Sense sense = Sense::LessEqual;
    double rhs = 0.0;
};

// Variables are non-negative.
struct Problem {
    int num_vars = 0;
    std::vector<double> objective;
    bool maximize = false;
    std::vector<Row> rows;
};

enum class Status { Optimal, Infeasible, Unbounded, IterationLimit };

struct Result {
    Status status = Status::Infeasible;
    double value = 0.0;
    std::vector<double> x;
    // Row duals with value == sum(rhs * dual); sign follows the row sense and objective direction
    // (maximize with <= rows gives dual >= 0).
    std::vector<double> dual;
    long iterations = 0;
};

// Dense two-phase tableau simplex with Bland's pivoting rule.
Result solve(const Problem& problem, double tol = 1e-9, long max_iterations = 2'000'000);

}  // namespace calpkit::lp
