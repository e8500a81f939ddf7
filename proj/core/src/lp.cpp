#include "calpkit/lp.hpp"

#include <cmath>
#include <limits>

#include "calpkit/error.hpp"

namespace calpkit::lp {

namespace {

class Tableau {
public:
    Tableau(int rows, int cols) : m_(rows), n_(cols), a_(static_cast<size_t>(rows + 1) * (cols + 1), 0.0) {}

    double& at(int i, int j) { return a_[static_cast<size_t>(i) * (n_ + 1) + j]; }
    double at(int i, int j) const { return a_[static_cast<size_t>(i) * (n_ + 1) + j]; }
    double& rhs(int i) { return at(i, n_); }
    double& rc(int j) { return at(m_, j); }
    double& value() { return at(m_, n_); }

    void pivot(int r, int c) {
        const int w = n_ + 1;
        double* pr = &a_[static_cast<size_t>(r) * w];
        double inv = 1.0 / pr[c];
        for (int j = 0; j < w; ++j) pr[j] *= inv;
        pr[c] = 1.0;
        for (int i = 0; i <= m_; ++i) {
            if (i == r) continue;
            double* pi = &a_[static_cast<size_t>(i) * w];
            double f = pi[c];
            if (f == 0.0) continue;
            for (int j = 0; j < w; ++j) pi[j] -= f * pr[j];
            pi[c] = 0.0;
        }
    }

    int rows() const { return m_; }
    int cols() const { return n_; }

private:
    int m_, n_;
    std::vector<double> a_;
};

}  // namespace

Result solve(const Problem& P, double tol, long max_iterations) {
    require(static_cast<int>(P.objective.size()) == P.num_vars, "objective length differs from variable count");
    const int m = static_cast<int>(P.rows.size());
    const int n = P.num_vars;

    std::vector<char> flipped(m, 0);
    std::vector<Sense> sense(m);
    int extra = 0;
    for (int i = 0; i < m; ++i) {
        sense[i] = P.rows[i].sense;
        if (P.rows[i].rhs < 0.0) {
            flipped[i] = 1;
            if (sense[i] == Sense::LessEqual)
                sense[i] = Sense::GreaterEqual;
            else if (sense[i] == Sense::GreaterEqual)
                sense[i] = Sense::LessEqual;
        }
        extra += sense[i] == Sense::GreaterEqual ? 2 : 1;
    }
    const int ncols = n + extra;
    Tableau T(m, ncols);
    std::vector<int> basis(m), id_col(m);
    std::vector<char> artificial(ncols, 0);
    int next = n;
    for (int i = 0; i < m; ++i) {
        double s = flipped[i] ? -1.0 : 1.0;
        for (auto [j, v] : P.rows[i].coef) {
            require(j >= 0 && j < n, "constraint references unknown variable");
            T.at(i, j) += s * v;
        }
        T.rhs(i) = s * P.rows[i].rhs;
        if (sense[i] == Sense::GreaterEqual) T.at(i, next++) = -1.0;
        T.at(i, next) = 1.0;
        if (sense[i] != Sense::LessEqual) artificial[next] = 1;
        id_col[i] = basis[i] = next++;
    }

    Result res;
    auto run = [&](const std::vector<double>& cost, bool block_artificial) -> Status {
        for (int j = 0; j <= ncols; ++j) T.rc(j) = j < ncols ? cost[j] : 0.0;
        for (int i = 0; i < m; ++i) {
            double cb = cost[basis[i]];
            if (cb == 0.0) continue;
            for (int j = 0; j <= ncols; ++j) T.rc(j) -= cb * T.at(i, j);
        }
        while (true) {
            if (res.iterations >= max_iterations) return Status::IterationLimit;
            int enter = -1;
            for (int j = 0; j < ncols; ++j) {
                if (block_artificial && artificial[j]) continue;
                if (T.rc(j) < -tol) {
                    enter = j;
                    break;
                }
            }
            if (enter < 0) return Status::Optimal;
            int leave = -1;
            double best = std::numeric_limits<double>::infinity();
            for (int i = 0; i < m; ++i) {
                double a = T.at(i, enter);
                if (a <= tol) continue;
                double ratio = T.rhs(i) / a;
                if (leave < 0 || ratio < best - tol || (ratio <= best + tol && basis[i] < basis[leave])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (leave < 0) return Status::Unbounded;
            T.pivot(leave, enter);
            basis[leave] = enter;
            ++res.iterations;
        }
    };

    bool any_art = false;
    std::vector<double> c1(ncols, 0.0);
    for (int j = 0; j < ncols; ++j)
        if (artificial[j]) c1[j] = 1.0, any_art = true;
    if (any_art) {
        Status s = run(c1, false);
        if (s == Status::IterationLimit) {
            res.status = s;
            return res;
        }
        if (-T.value() > tol * 10 * (1.0 + m)) {
            res.status = Status::Infeasible;
            return res;
        }
        for (int i = 0; i < m; ++i) {
            if (!artificial[basis[i]]) continue;
            for (int j = 0; j < ncols; ++j) {
                if (artificial[j] || std::abs(T.at(i, j)) <= tol) continue;
                T.pivot(i, j);
                basis[i] = j;
                break;
            }
        }
    }

    std::vector<double> c2(ncols, 0.0);
    for (int j = 0; j < n; ++j) c2[j] = P.maximize ? -P.objective[j] : P.objective[j];
    Status s = run(c2, true);
    res.status = s;
    if (s != Status::Optimal) return res;

    res.x.assign(n, 0.0);
    for (int i = 0; i < m; ++i)
        if (basis[i] < n) res.x[basis[i]] = std::max(0.0, T.rhs(i));
    double val = 0.0;
    for (int j = 0; j < n; ++j) val += P.objective[j] * res.x[j];
    res.value = val;
    res.dual.assign(m, 0.0);
    for (int i = 0; i < m; ++i) {
        double y = -T.rc(id_col[i]);
        if (flipped[i]) y = -y;
        if (P.maximize) y = -y;
        res.dual[i] = y;
    }
    return res;
}

}  // namespace calpkit::lp
