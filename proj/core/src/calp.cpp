#include "calpkit/calp.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "calpkit/emlp.hpp"
#include "calpkit/error.hpp"
#include "calpkit/lp.hpp"
#include "calpkit/oracle.hpp"
#include "calpkit/structured.hpp"

namespace calpkit {

const char* to_string(RateStatus s) {
    switch (s) {
        case RateStatus::Optimal: return "optimal";
        case RateStatus::Approximate: return "approx";
        case RateStatus::Unbounded: return "unbounded";
        case RateStatus::RoundLimit: return "round_limit";
    }
    return "?";
}

const char* to_string(Pricing p) {
    switch (p) {
        case Pricing::None: return "none";
        case Pricing::Oracle: return "oracle";
        case Pricing::Tree: return "tree";
        case Pricing::Layered: return "layered";
        case Pricing::SpanTree: return "spantree";
        case Pricing::EmLp: return "emlp";
    }
    return "?";
}

std::optional<Pricing> parse_pricing(const std::string& s) {
    for (Pricing p : {Pricing::None, Pricing::Oracle, Pricing::Tree, Pricing::Layered, Pricing::SpanTree, Pricing::EmLp})
        if (s == to_string(p)) return p;
    return std::nullopt;
}

std::vector<double> column_usage(const NetworkGraph& net, const ComputationDag& dag, const Embedding& emb) {
    return edge_usage(net, dag, emb).total;
}

namespace {

bool uses_nothing(const std::vector<double>& r) {
    return std::all_of(r.begin(), r.end(), [](double v) { return v == 0.0; });
}

struct Master {
    double R = 0.0;
    std::vector<double> x;
    std::vector<double> duals;
};

Master solve_master(const NetworkGraph& net, const std::vector<std::vector<double>>& usage) {
    lp::Problem P;
    P.maximize = true;
    P.num_vars = static_cast<int>(usage.size());
    P.objective.assign(usage.size(), 1.0);
    for (int e = 0; e < net.m(); ++e) {
        lp::Row r{{}, lp::Sense::LessEqual, net.edge(e).capacity};
        for (size_t j = 0; j < usage.size(); ++j)
            if (usage[j][e] != 0.0) r.coef.push_back({static_cast<int>(j), usage[j][e]});
        P.rows.push_back(std::move(r));
    }
    auto res = lp::solve(P);
    if (res.status != lp::Status::Optimal) fail(ErrorKind::Infeasible, "packing LP did not reach an optimum");
    Master m;
    m.R = res.value;
    m.x = res.x;
    for (auto& x : m.x)
        if (std::abs(x) < 1e-12) x = 0.0;
    m.duals.resize(net.m());
    for (int e = 0; e < net.m(); ++e) m.duals[e] = std::max(0.0, res.dual[e]);
    return m;
}

double dual_objective(const NetworkGraph& net, const std::vector<double>& y) {
    double s = 0.0;
    for (int e = 0; e < net.m(); ++e)
        if (y[e] != 0.0 && net.edge(e).capacity > 0.0) s += net.edge(e).capacity * y[e];
    return s;
}

RateSolution unbounded_solution(const NetworkGraph& net, std::vector<RateColumn> cols, size_t j) {
    RateSolution s;
    for (auto& c : cols) c.flow = 0.0;
    cols[j].flow = kInf;
    s.columns = std::move(cols);
    s.R = kInf;
    s.duals.assign(net.m(), 0.0);
    s.status = RateStatus::Unbounded;
    s.upper_bound = kInf;
    return s;
}

}  // namespace

RateSolution solve_packing_lp(const NetworkGraph& net, const ComputationDag& dag, const std::vector<RateColumn>& columns) {
    require_valid_instance(net, dag);
    std::vector<std::vector<double>> usage;
    for (size_t j = 0; j < columns.size(); ++j) {
        auto rep = validate_embedding(net, dag, columns[j].emb);
        if (!rep.ok())
            fail(ErrorKind::InvalidInput, "column '" + columns[j].name + "' is not a valid embedding: " + rep.str());
        usage.push_back(column_usage(net, dag, columns[j].emb));
        if (uses_nothing(usage.back())) return unbounded_solution(net, columns, j);
    }
    RateSolution s;
    s.columns = columns;
    s.duals.assign(net.m(), 0.0);
    s.pricing = to_string(Pricing::None);
    if (columns.empty()) return s;
    auto m = solve_master(net, usage);
    for (size_t j = 0; j < columns.size(); ++j) s.columns[j].flow = m.x[j];
    s.R = m.R;
    s.duals = m.duals;
    s.upper_bound = m.R;
    return s;
}

PricedColumn price_column(const NetworkGraph& net, const ComputationDag& dag, const std::vector<double>& duals,
                          const PricingOptions& opt) {
    require(static_cast<int>(duals.size()) == net.m(), "price vector length differs from edge count");
    for (double y : duals) require(y >= 0.0, "prices must be non-negative");
    const double D = std::max(1, dag.max_out_degree());
    DistanceMatrix dist(net, duals);
    SteinerCache cache(net, dist);
    PricedColumn out;
    // CC solvers give an assignment; routing each function on its Steiner tree only lowers C.
    auto finish = [&](const std::vector<int>& assignment) {
        out.emb = steiner_rembedding(net, dag, assignment, cache);
        out.cost = assignment_cost_c(dag, assignment, cache);
    };
    switch (opt.strategy) {
        case Pricing::None: fail(ErrorKind::InvalidInput, "no pricing strategy selected");
        case Pricing::Oracle: {
            auto r = mincost_c_exact(net, dag, duals);
            out.emb = std::move(r.emb);
            out.cost = r.cost;
            out.lower_bound = r.cost;
            out.ratio = 1.0;
            break;
        }
        case Pricing::Tree: {
            auto r = tree_dp_mincost_cc(net, dag, duals);
            finish(r.emb.assignment);
            out.lower_bound = r.cost / D;
            out.ratio = D;
            break;
        }
        case Pricing::Layered: {
            auto r = layered_dp_mincost_cc(net, dag, duals, opt.layered_max_width);
            finish(r.emb.assignment);
            out.lower_bound = r.cost / D;
            out.ratio = layered_rcalp_ratio(dag);
            break;
        }
        case Pricing::SpanTree: {
            auto r = spanning_tree_approx_mincost_cc(net, dag, duals);
            finish(r.emb.assignment);
            out.lower_bound = r.tree_cost / D;
            out.ratio = (1.0 + r.F) * D;
            break;
        }
        case Pricing::EmLp: {
            auto lp = solve_earthmover_lp(net, dag, duals);
            double best = kInf;
            std::vector<int> arg;
            for (int t = 0; t < std::max(1, opt.rounding_trials); ++t) {
                auto r = ckr_round(net, dag, lp.placement, dist, opt.seed + static_cast<std::uint64_t>(t));
                double c = assignment_cost_c(dag, r.assignment, cache);
                if (c < best) best = c, arg = r.assignment;
            }
            finish(arg);
            out.lower_bound = lp.lp_value / D;
            out.ratio = kInf;
            break;
        }
    }
    out.lower_bound = std::min(out.lower_bound, out.cost);
    return out;
}

namespace {

using EmbKey = std::vector<std::vector<Path>>;

RateSolution finalize(const NetworkGraph& net, std::vector<RateColumn> cols, const Master& m, double lb,
                      const PricingOptions& opt, int rounds, bool hit_limit) {
    RateSolution s;
    for (size_t j = 0; j < cols.size(); ++j) cols[j].flow = j < m.x.size() ? m.x[j] : 0.0;
    s.columns = std::move(cols);
    s.R = m.R;
    s.rounds = rounds;
    s.pricing = to_string(opt.strategy);
    double scale = std::min(1.0, lb);
    s.duals = m.duals;
    if (scale > 0.0)
        for (double& y : s.duals) y /= scale;
    s.upper_bound = scale > 0.0 ? dual_objective(net, s.duals) : kInf;
    s.ratio = s.R > 0.0 ? std::max(1.0, s.upper_bound / s.R) : (s.upper_bound > 0.0 ? kInf : 1.0);
    if (hit_limit)
        s.status = RateStatus::RoundLimit;
    else
        s.status = s.ratio <= 1.0 + 1e-9 ? RateStatus::Optimal : RateStatus::Approximate;
    return s;
}

}  // namespace

RateSolution solve_rcalp_colgen(const NetworkGraph& net, const ComputationDag& dag, const PricingOptions& opt,
                                const std::vector<RateColumn>& initial) {
    require_valid_instance(net, dag);
    if (opt.strategy == Pricing::None) return solve_packing_lp(net, dag, initial);
    std::vector<RateColumn> cols;
    std::vector<std::vector<double>> usage;
    std::map<EmbKey, size_t> seen;
    auto add = [&](RateColumn c) -> bool {
        auto key = c.emb.normalized().paths;
        if (seen.count(key)) return false;
        seen.emplace(std::move(key), cols.size());
        usage.push_back(column_usage(net, dag, c.emb));
        cols.push_back(std::move(c));
        return true;
    };
    for (const auto& c : initial) {
        auto rep = validate_embedding(net, dag, c.emb);
        if (!rep.ok()) fail(ErrorKind::InvalidInput, "column '" + c.name + "' is not a valid embedding: " + rep.str());
        add(c);
        if (uses_nothing(usage.back())) return unbounded_solution(net, cols, cols.size() - 1);
    }
    const int limit = std::max(10, 10 * net.m() * dag.size());
    Master m;
    m.duals.assign(net.m(), 0.0);
    double lb = 0.0;
    int round = 0;
    int generated = 0;
    for (;; ++round) {
        if (!cols.empty()) m = solve_master(net, usage);
        auto pc = price_column(net, dag, m.duals, opt);
        lb = pc.lower_bound;
        if (pc.cost >= 1.0 - 1e-9) break;
        if (round >= limit) return finalize(net, cols, m, lb, opt, round, true);
        RateColumn c{"gen" + std::to_string(generated++), pc.emb.general(), 0.0};
        if (!add(std::move(c))) break;  // numerically stalled
        if (uses_nothing(usage.back())) {
            auto s = unbounded_solution(net, cols, cols.size() - 1);
            s.pricing = to_string(opt.strategy);
            return s;
        }
    }
    return finalize(net, cols, m, lb, opt, round, false);
}

RateSolution solve_rcalp_mwu(const NetworkGraph& net, const ComputationDag& dag, double epsilon,
                             const PricingOptions& opt) {
    require_valid_instance(net, dag);
    if (!(epsilon > 0.0 && epsilon < 0.5)) fail(ErrorKind::InvalidInput, "epsilon must lie in (0, 0.5)");
    require(opt.strategy != Pricing::None, "MWU needs a pricing strategy");
    const double eps = epsilon / 3.0;
    const int m = net.m();
    int active = 0;
    for (int e = 0; e < m; ++e) active += net.edge(e).capacity > 0.0;

    RateSolution s;
    s.pricing = to_string(opt.strategy);
    s.duals.assign(m, 0.0);
    s.upper_bound = kInf;
    if (active == 0) {
        // Only capacity-free columns can carry flow.
        auto pc = price_column(net, dag, std::vector<double>(m, 1.0), opt);
        if (pc.cost == 0.0) {
            s.columns.push_back({"gen0", pc.emb.general(), kInf});
            s.R = kInf;
            s.status = RateStatus::Unbounded;
        } else {
            s.upper_bound = 0.0;
        }
        return s;
    }
    const double delta = (1.0 + eps) * std::pow((1.0 + eps) * active, -1.0 / eps);
    std::vector<double> y(m);
    for (int e = 0; e < m; ++e) y[e] = net.edge(e).capacity > 0.0 ? delta / net.edge(e).capacity : kInf;

    std::vector<RateColumn> cols;
    std::vector<std::vector<double>> usage;
    std::map<EmbKey, size_t> seen;
    double best_ub = kInf;
    std::vector<double> best_duals(m, 0.0);
    auto Dy = [&] { return dual_objective(net, y); };
    auto cost_under = [&](const std::vector<double>& r) {
        double c = 0.0;
        for (int e = 0; e < m; ++e)
            if (r[e] != 0.0) c += r[e] * y[e];
        return c;
    };
    const long guard = 5'000'000;
    long steps = 0;
    // Fleischer: the minimum column cost only grows, so a cached column within (1 + eps) of the
    // last priced minimum is still good enough and the oracle can be skipped.
    double threshold = -1.0;
    std::vector<double> load(m, 0.0);
    double total = 0.0;
    // Flow after scaling to feasibility.
    auto scaled = [&] {
        double congestion = 0.0;
        for (int e = 0; e < m; ++e)
            if (load[e] > 0.0) congestion = std::max(congestion, load[e] / net.edge(e).capacity);
        return congestion > 0.0 ? total / congestion : 0.0;
    };
    while (Dy() < 1.0 && steps < guard) {
        size_t j = cols.size();
        if (threshold >= 0.0) {
            double best = kInf;
            for (size_t k = 0; k < cols.size(); ++k) {
                double c = cost_under(usage[k]);
                if (c <= threshold && c < best) best = c, j = k;
            }
        }
        if (j == cols.size()) {
            PricedColumn pc;
            try {
                pc = price_column(net, dag, y, opt);
            } catch (const Error& err) {
                if (err.kind() != ErrorKind::Infeasible) throw;
                break;  // every remaining column crosses a zero-capacity edge
            }
            if (!(pc.cost < kInf)) break;
            if (pc.lower_bound > 0.0) {
                double ub = Dy() / pc.lower_bound;
                if (ub < best_ub) {
                    best_ub = ub;
                    for (int e = 0; e < m; ++e) best_duals[e] = std::isfinite(y[e]) ? y[e] / pc.lower_bound : 0.0;
                }
            }
            // Certified within the requested accuracy already.
            if (total > 0.0 && scaled() * (1.0 + epsilon) >= best_ub) break;
            auto key = pc.emb.general().normalized().paths;
            if (auto it = seen.find(key); it != seen.end()) {
                j = it->second;
            } else {
                j = cols.size();
                seen.emplace(std::move(key), j);
                cols.push_back({"gen" + std::to_string(j), pc.emb.general(), 0.0});
                usage.push_back(column_usage(net, dag, cols.back().emb));
            }
            if (uses_nothing(usage[j])) {
                auto u = unbounded_solution(net, cols, j);
                u.pricing = s.pricing;
                return u;
            }
            threshold = (1.0 + eps) * pc.cost;
        }
        const auto& r = usage[j];
        double amount = kInf;
        for (int e = 0; e < m; ++e)
            if (r[e] > 0.0) amount = std::min(amount, net.edge(e).capacity / r[e]);
        cols[j].flow += amount;
        total += amount;
        for (int e = 0; e < m; ++e)
            if (r[e] > 0.0) {
                y[e] *= 1.0 + eps * amount * r[e] / net.edge(e).capacity;
                load[e] += amount * r[e];
            }
        ++steps;
    }
    double congestion = 0.0;
    for (int e = 0; e < m; ++e) {
        double load = 0.0;
        for (size_t j = 0; j < cols.size(); ++j) load += usage[j][e] * cols[j].flow;
        if (load > 0.0) congestion = std::max(congestion, load / net.edge(e).capacity);
    }
    double R = 0.0;
    for (auto& c : cols) {
        if (congestion > 0.0) c.flow /= congestion;
        R += c.flow;
    }
    s.columns = std::move(cols);
    s.R = R;
    s.rounds = static_cast<int>(std::min<long>(steps, 2'000'000'000));
    if (best_ub < kInf) {
        s.duals = best_duals;
        s.upper_bound = best_ub;
    }
    s.ratio = R > 0.0 ? std::max(1.0, s.upper_bound / R) : (s.upper_bound > 0.0 ? kInf : 1.0);
    s.status = s.ratio <= 1.0 + 1e-9 ? RateStatus::Optimal : RateStatus::Approximate;
    return s;
}

double capacity_violation(const NetworkGraph& net, const ComputationDag& dag, const RateSolution& sol) {
    std::vector<double> load(net.m(), 0.0);
    for (const auto& c : sol.columns) {
        if (c.flow == 0.0) continue;
        auto r = column_usage(net, dag, c.emb);
        for (int e = 0; e < net.m(); ++e) load[e] += r[e] * c.flow;
    }
    double worst = -kInf;
    for (int e = 0; e < net.m(); ++e) worst = std::max(worst, (load[e] - net.edge(e).capacity) / std::max(1.0, net.edge(e).capacity));
    return net.m() == 0 ? 0.0 : worst;
}

}  // namespace calpkit
