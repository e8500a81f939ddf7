#include <atomic>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include "calpkit/calpkit.hpp"
#include "cli.hpp"

namespace calpkit::cli {

namespace {

struct Row {
    std::string solver;
    double value = 0.0;
    std::optional<double> oracle;
    std::optional<double> bound;
    std::optional<double> stddev;
    double wall_ms = 0.0;
};

std::string cell(double v) {
    if (v == kInf) return "inf";
    std::ostringstream os;
    os << std::setprecision(10) << v;
    return os.str();
}

std::string cell(const std::optional<double>& v) { return v ? cell(*v) : std::string(); }

template <typename F>
double timed(F&& f) {
    auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<Row> bench_instance(const Instance& I, const BenchConfig& cfg) {
    std::vector<Row> rows;
    const auto prices = I.net.weights();
    std::optional<double> opt_cc, opt_c, opt_rate;

    auto attempt = [&](const std::string& solver, auto&& body) {
        Row row;
        row.solver = solver;
        try {
            row.wall_ms = timed([&] { body(row); });
        } catch (const Error&) {
            return;  // solver not applicable or over budget
        }
        rows.push_back(row);
    };

    attempt("oracle_cc", [&](Row& row) {
        row.value = mincost_cc_exact(I.net, I.dag, prices).cost;
        opt_cc = row.value;
        row.bound = 1.0;
    });
    attempt("oracle_c", [&](Row& row) {
        row.value = mincost_c_exact(I.net, I.dag, prices).cost;
        opt_c = row.value;
        row.bound = 1.0;
    });
    if (is_in_tree(I.dag))
        attempt("tree", [&](Row& row) {
            row.value = tree_dp_mincost_cc(I.net, I.dag, prices).cost;
            row.bound = 1.0;
        });
    if (layer_dag(I.dag).layered)
        attempt("layered", [&](Row& row) {
            row.value = layered_dp_mincost_cc(I.net, I.dag, prices).cost;
            row.bound = 1.0;
        });
    attempt("spantree", [&](Row& row) {
        auto r = spanning_tree_approx_mincost_cc(I.net, I.dag, prices, I.tree);
        row.value = r.cost;
        row.bound = 1.0 + r.F;
    });
    std::optional<EarthmoverSolution> lp;
    attempt("emlp_lp", [&](Row& row) {
        lp = solve_earthmover_lp(I.net, I.dag, prices);
        row.value = lp->lp_value;
    });
    if (lp)
        attempt("emlp_round", [&](Row& row) {
            DistanceMatrix dist(I.net, prices);
            double sum = 0.0, sq = 0.0;
            for (int k = 0; k < cfg.trials; ++k) {
                double c = ckr_round(I.net, I.dag, lp->placement, dist, static_cast<std::uint64_t>(k) + 1).cost;
                sum += c;
                sq += c * c;
            }
            const double mean = sum / cfg.trials;
            row.value = mean;
            row.stddev = std::sqrt(std::max(0.0, sq / cfg.trials - mean * mean));
            row.bound = 4.0 * std::log(std::max(I.net.n(), 2));
        });
    if (I.net.n() == 2 && I.net.m() == 1)
        attempt("twonode", [&](Row& row) {
            row.value = mincost_twonode(I.net, I.dag, prices).cost;
            row.bound = 1.0;
        });
    for (auto& row : rows) {
        if (row.solver == "oracle_c" || row.solver == "twonode")
            row.oracle = opt_c;
        else
            row.oracle = opt_cc;
    }

    const size_t rate_start = rows.size();
    attempt("rate_colgen", [&](Row& row) {
        PricingOptions opt;
        auto sol = solve_rcalp_colgen(I.net, I.dag, opt);
        row.value = sol.R;
        if (sol.status == RateStatus::Optimal) opt_rate = sol.R;
        row.bound = 1.0;
    });
    attempt("rate_mwu", [&](Row& row) {
        PricingOptions opt;
        row.value = solve_rcalp_mwu(I.net, I.dag, 0.1, opt).R;
        row.bound = 1.0 / (1.0 - 0.1);
    });
    attempt("rate_spantree", [&](Row& row) {
        PricingOptions opt;
        opt.strategy = Pricing::SpanTree;
        auto sol = solve_rcalp_colgen(I.net, I.dag, opt);
        row.value = sol.R;
        row.bound = sol.ratio;
    });
    for (size_t i = rate_start; i < rows.size(); ++i) rows[i].oracle = opt_rate;
    return rows;
}

std::vector<Instance> suite(const BenchConfig& cfg) {
    std::vector<Instance> out;
    for (const auto& f : cfg.files) out.push_back(io::read_instance(f));
    const DagShape shapes[] = {DagShape::Tree, DagShape::Layered, DagShape::General};
    for (int i = 0; i < cfg.random; ++i) {
        GenOptions opt;
        opt.shape = shapes[i % 3];
        out.push_back(random_instance(cfg.seed + static_cast<std::uint64_t>(i), opt));
    }
    return out;
}

}  // namespace

void bench(const BenchConfig& cfg, std::ostream& csv) {
    if (cfg.trials < 1) fail(ErrorKind::InvalidInput, "--trials must be positive");
    const auto instances = suite(cfg);
    std::vector<std::vector<Row>> results(instances.size());
    std::vector<std::string> errors(instances.size());
    unsigned workers = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads) : std::thread::hardware_concurrency();
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(instances.size())));
    std::atomic<size_t> next{0};
    auto work = [&] {
        for (size_t i = next++; i < instances.size(); i = next++) {
            try {
                results[i] = bench_instance(instances[i], cfg);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    for (const auto& e : errors)
        if (!e.empty()) fail(ErrorKind::InvalidInput, e);

    csv << "instance,solver,value,oracle,ratio,bound,stddev,wall_ms\n";
    for (size_t i = 0; i < instances.size(); ++i) {
        for (const auto& r : results[i]) {
            std::optional<double> ratio;
            if (r.oracle && r.solver.rfind("rate_", 0) == 0) {
                if (r.value > 0.0) ratio = *r.oracle / r.value;
            } else if (r.oracle && *r.oracle > 0.0) {
                ratio = r.value / *r.oracle;
            } else if (r.oracle && r.value == 0.0) {
                ratio = 1.0;
            }
            csv << instances[i].name << ',' << r.solver << ',' << cell(r.value) << ',' << cell(r.oracle) << ','
                << cell(ratio) << ',' << cell(r.bound) << ',' << cell(r.stddev) << ','
                << (cfg.timing ? cell(r.wall_ms) : std::string("0")) << '\n';
        }
    }
}

}  // namespace calpkit::cli
