// Command-line driver: every experiment is reproducible from (flags, seed)
// and emits structured records (CSV or JSON) with the inputs echoed.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dhl/cascade.hpp"
#include "dhl/chaos.hpp"
#include "dhl/gmc.hpp"
#include "dhl/intersection.hpp"
#include "dhl/lattice.hpp"
#include "dhl/operator_y.hpp"
#include "dhl/parallel.hpp"
#include "dhl/paths.hpp"
#include "dhl/polymer.hpp"
#include "dhl/verify.hpp"

#ifndef DHL_BUILD_DESCRIBE
#define DHL_BUILD_DESCRIBE "unknown"
#endif

namespace {

using dhl::LatticeParams;

struct Record {
    std::string experiment;
    int b = 0, s = 0;
    std::optional<int> n;
    std::optional<double> beta;
    std::string extra;  // semicolon-separated key=value pairs
    std::uint64_t seed = 0;
    std::optional<std::uint64_t> samples;
    std::string value_name;
    std::string value;
    std::optional<double> std_error;
    bool exact = true;
    double wall_ms = 0.0;
};

struct Output {
    std::string format = "csv";
    std::string path;  // empty = stdout
    std::vector<Record> records;

    void add(Record r) { records.push_back(std::move(r)); }

    static std::string csv_escape(const std::string& s) {
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string out = "\"";
        for (char c : s) {
            if (c == '"') out += '"';
            out += c;
        }
        out += '"';
        return out;
    }

    void flush() const {
        std::ostringstream os;
        if (format == "json") {
            nlohmann::json arr = nlohmann::json::array();
            for (const auto& r : records) {
                nlohmann::json j;
                j["experiment"] = r.experiment;
                j["b"] = r.b;
                j["s"] = r.s;
                if (r.n) j["n"] = *r.n;
                if (r.beta) j["beta"] = *r.beta;
                if (!r.extra.empty()) j["extra"] = r.extra;
                j["seed"] = r.seed;
                if (r.samples) j["samples"] = *r.samples;
                j["value_name"] = r.value_name;
                j["value"] = r.value;
                if (r.std_error) j["std_error"] = *r.std_error;
                j["exact"] = r.exact;
                j["wall_ms"] = r.wall_ms;
                j["build"] = DHL_BUILD_DESCRIBE;
                arr.push_back(std::move(j));
            }
            os << arr.dump(2) << "\n";
        } else {
            os << "experiment,b,s,n,beta,extra,seed,samples,value_name,value,std_error,exact,"
                  "wall_ms,build\n";
            for (const auto& r : records) {
                os << csv_escape(r.experiment) << ',' << r.b << ',' << r.s << ',';
                if (r.n) os << *r.n;
                os << ',';
                if (r.beta) os << *r.beta;
                os << ',' << csv_escape(r.extra) << ',' << r.seed << ',';
                if (r.samples) os << *r.samples;
                os << ',' << csv_escape(r.value_name) << ',' << csv_escape(r.value) << ',';
                if (r.std_error) os << *r.std_error;
                os << ',' << (r.exact ? 1 : 0) << ',' << r.wall_ms << ',' << DHL_BUILD_DESCRIBE
                   << "\n";
            }
        }
        if (path.empty()) {
            std::cout << os.str();
        } else {
            std::ofstream f(path);
            if (!f) throw std::runtime_error("cannot open output file: " + path);
            f << os.str();
        }
    }
};

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
            .count();
    }
};

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(15);
    os << v;
    return os.str();
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) out.push_back(std::stoi(part));
    return out;
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) out.push_back(std::stod(part));
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"diamond-lattice chaos/polymer toolbox"};
    app.set_config("--config");
    app.require_subcommand(1);

    int b = 2, s = 3, n = 2;
    double beta = 0.5, t_arg = 0.0, alpha = 0.0;
    std::uint64_t seed = 1, samples = 100000;
    unsigned workers = 1;
    Output out;
    app.add_option("--b", b, "branching number");
    app.add_option("--s", s, "segmenting number");
    app.add_option("--seed", seed, "base seed");
    app.add_option("--workers", workers, "worker threads for sharded Monte Carlo");
    app.add_option("--out", out.path, "output file (default stdout)");
    app.add_option("--format", out.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));

    // ---- lattice ----
    auto* lat = app.add_subcommand("lattice", "lattice counting, dimension, metric");
    auto* lat_count = lat->add_subcommand("count", "edge and path counts");
    lat_count->add_option("--n", n, "level");
    auto* lat_dim = lat->add_subcommand("dim", "Hausdorff dimension");
    std::string v1 = "A", v2 = "B";
    auto* lat_dist = lat->add_subcommand("dist", "geodesic distance between vertices");
    lat_dist->add_option("--v1", v1, "first vertex (A, B or <prefix>:i,c)");
    lat_dist->add_option("--v2", v2, "second vertex");
    lat_dist->add_option("--n", n, "graph level");

    // ---- paths ----
    auto* pth = app.add_subcommand("paths", "coarse path sampling and counting");
    auto* pth_sample = pth->add_subcommand("sample", "uniform coarse path");
    pth_sample->add_option("--n", n, "level");
    std::string p_str, q_str, cells_str;
    auto* pth_shared = pth->add_subcommand("shared", "shared bonds of two paths");
    pth_shared->add_option("--n", n, "level");
    pth_shared->add_option("--p", p_str, "first path digits")->required();
    pth_shared->add_option("--q", q_str, "second path digits")->required();
    auto* pth_through = pth->add_subcommand("through", "paths through a cell set");
    pth_through->add_option("--n", n, "level");
    pth_through->add_option("--cells", cells_str, "comma-separated cells, e.g. 1.1/2.3,2.1/1.2")
        ->required();
    bool do_sample = false;
    pth_through->add_flag("--sample", do_sample, "also sample one conditioned path");

    // ---- intersect ----
    auto* its = app.add_subcommand("intersect", "intersection branching process");
    auto* its_pgf = its->add_subcommand("pgf", "exact shared-bond PGF coefficients");
    its_pgf->add_option("--n", n, "level");
    auto* its_phi = its->add_subcommand("phi", "MGF of the rescaled count");
    its_phi->add_option("--n", n, "level");
    its_phi->add_option("--t", t_arg, "argument")->required();
    bool phi_limit = false;
    its_phi->add_flag("--limit", phi_limit, "iterate to the limit MGF");
    its->add_subcommand("extinction", "extinction probability fixed point");
    auto* its_dim = its->add_subcommand("dim", "Hausdorff exponent of the intersection set");
    bool dim_mc = false;
    its_dim->add_flag("--mc", dim_mc, "Monte Carlo slope estimate");
    its_dim->add_option("--n", n, "generations");
    its_dim->add_option("--samples", samples, "survival-conditioned runs");

    // ---- spectrum ----
    auto* spec = app.add_subcommand("spectrum", "singular values of Y^(n) with multiplicities");
    spec->add_option("--n", n, "level");

    // ---- gmc ----
    auto* g = app.add_subcommand("gmc", "Gaussian multiplicative chaos diagnostics");
    auto* g_mass = g->add_subcommand("mass", "total mass of one realization or MC mean");
    g_mass->add_option("--n", n, "level");
    g_mass->add_option("--beta", beta, "inverse temperature");
    std::uint64_t trials = 1;
    g_mass->add_option("--trials", trials, "Monte Carlo trees (1 = single realization)");
    int replica_m = 2;
    auto* g_rep = g->add_subcommand("replica", "exact replica moments");
    g_rep->add_option("--m", replica_m, "moment order (2 or 3)")->check(CLI::IsMember({2, 3}));
    g_rep->add_option("--n", n, "level");
    g_rep->add_option("--beta", beta, "inverse temperature");
    auto* g_shift = g->add_subcommand("shift-check", "random-shift identity Monte Carlo");
    int psi_level = 1;
    g_shift->add_option("--n", n, "level");
    g_shift->add_option("--beta", beta, "inverse temperature");
    g_shift->add_option("--k", psi_level, "level of the cell function");
    g_shift->add_option("--samples", samples, "trials");
    auto* g_frac = g->add_subcommand("fractional", "fractional moment vs the decay bound");
    g_frac->add_option("--n", n, "level");
    g_frac->add_option("--beta", beta, "inverse temperature");
    g_frac->add_option("--samples", samples, "trials");
    auto* g_loc = g->add_subcommand("localize", "median max cylinder share per beta");
    std::string beta_list = "1,2,4,8";
    int coarse_m = 1;
    g_loc->add_option("--n", n, "level");
    g_loc->add_option("--m", coarse_m, "cylinder level");
    g_loc->add_option("--beta-list", beta_list, "comma-separated betas");
    g_loc->add_option("--samples", samples, "trees");
    auto* g_tilt = g->add_subcommand("tilted", "tilted two-replica moment, exact and MC");
    g_tilt->add_option("--n", n, "level");
    g_tilt->add_option("--beta", beta, "inverse temperature");
    g_tilt->add_option("--alpha", alpha, "tilt");
    g_tilt->add_option("--samples", samples, "trials (0 = exact only)");

    // ---- polymer ----
    auto* pol = app.add_subcommand("polymer", "discrete polymer partition functions");
    std::string dist_name = "gaussian";
    auto* pol_z = pol->add_subcommand("z", "partition function of one environment");
    pol_z->add_option("--dist", dist_name, "gaussian|rademacher|centered-uniform");
    pol_z->add_option("--n", n, "level");
    pol_z->add_option("--beta", beta, "inverse temperature");
    auto* pol_conv = pol->add_subcommand("converge", "replica moments along the scaling");
    std::string n_list = "1,2,4,8";
    pol_conv->add_option("--dist", dist_name, "weight family");
    pol_conv->add_option("--beta", beta, "base inverse temperature");
    pol_conv->add_option("--n-list", n_list, "comma-separated levels");

    // ---- chaos ----
    auto* ch = app.add_subcommand("chaos", "chaos-expansion combinatorics");
    auto* ch_gamma = ch->add_subcommand("gamma", "coalescence exponent of a cell set");
    ch_gamma->add_option("--n", n, "cell level");
    ch_gamma->add_option("--cells", cells_str, "comma-separated cells")->required();
    auto* ch_check = ch->add_subcommand("check", "exact marginalization identities");
    int chaos_k = 2;
    ch_check->add_option("--k", chaos_k, "tuple size");
    ch_check->add_option("--n", n, "cell level");
    auto* ch_trunc = ch->add_subcommand("truncate", "truncation variance, exact vs MC");
    int max_order = 3;
    ch_trunc->add_option("--K", max_order, "truncation order");
    ch_trunc->add_option("--n", n, "level");
    ch_trunc->add_option("--beta", beta, "inverse temperature");
    ch_trunc->add_option("--samples", samples, "trees");

    // ---- verify ----
    auto* ver = app.add_subcommand("verify", "acceptance battery");
    std::string level_name = "full";
    ver->add_option("--level", level_name, "fast or full")
        ->check(CLI::IsMember({"fast", "full"}));

    // let global flags (--seed, --format, ...) appear after any subcommand
    auto enable_fallthrough = [](auto&& self, CLI::App* cmd) -> void {
        for (CLI::App* sub : cmd->get_subcommands({})) {
            sub->fallthrough();
            self(self, sub);
        }
    };
    enable_fallthrough(enable_fallthrough, &app);

    CLI11_PARSE(app, argc, argv);

    try {
        LatticeParams params(b, s);
        Record base;
        base.b = b;
        base.s = s;
        base.seed = seed;

        auto record_value = [&](std::string experiment, std::string name, std::string value,
                                double wall, bool exact = true,
                                std::optional<double> se = std::nullopt,
                                std::string extra = std::string()) {
            Record r = base;
            r.experiment = std::move(experiment);
            r.n = n;
            r.beta = beta;
            r.value_name = std::move(name);
            r.value = std::move(value);
            r.wall_ms = wall;
            r.exact = exact;
            r.std_error = se;
            r.extra = std::move(extra);
            if (se) r.samples = samples;
            out.add(std::move(r));
        };

        if (*lat_count) {
            Timer tm;
            auto edges = dhl::lattice::edge_count(params, n);
            auto pths = dhl::lattice::path_count(params, n);
            record_value("lattice.count", "edge_count", edges.str(), tm.ms());
            record_value("lattice.count", "path_count", pths.str(), tm.ms());
        } else if (*lat_dim) {
            Timer tm;
            record_value("lattice.dim", "dimension", fmt(dhl::lattice::lattice_dimension(params)),
                         tm.ms());
        } else if (*lat_dist) {
            Timer tm;
            auto a = dhl::lattice::VertexAddress::parse(v1);
            auto c = dhl::lattice::VertexAddress::parse(v2);
            auto d = dhl::lattice::metric_distance(params, a, c, n);
            std::ostringstream os;
            os << d;
            record_value("lattice.dist", "distance", os.str(), tm.ms(), true, std::nullopt,
                         "v1=" + v1 + ";v2=" + v2);
        } else if (*pth_sample) {
            Timer tm;
            dhl::SplitRng rng(seed);
            auto p = dhl::paths::sample_uniform_path(params, n, rng);
            record_value("paths.sample", "path", p.to_string(), tm.ms(), false);
        } else if (*pth_shared) {
            Timer tm;
            auto p = dhl::paths::CoarsePath::parse(params, n, p_str);
            auto q = dhl::paths::CoarsePath::parse(params, n, q_str);
            record_value("paths.shared", "shared_bonds",
                         std::to_string(dhl::paths::shared_bonds(p, q)), tm.ms());
        } else if (*pth_through) {
            Timer tm;
            std::vector<dhl::lattice::EdgeAddress> cells;
            std::stringstream ss(cells_str);
            std::string part;
            while (std::getline(ss, part, ',')) cells.push_back(dhl::lattice::EdgeAddress::parse(part));
            dhl::paths::CellSet set(params, n, std::move(cells));
            auto count = dhl::paths::count_paths_through(set);
            record_value("paths.through", "count", count.str(), tm.ms(), true, std::nullopt,
                         "cells=" + cells_str);
            if (do_sample && count != 0) {
                dhl::SplitRng rng(seed);
                record_value("paths.through", "sampled_path",
                             dhl::paths::sample_path_through(set, rng).to_string(), tm.ms(), false);
            }
        } else if (*its_pgf) {
            Timer tm;
            auto g_n = dhl::intersection::intersection_pgf(params, n);
            for (std::size_t k = 0; k < g_n.coeff.size(); ++k) {
                if (g_n.coeff[k] == 0) continue;
                std::ostringstream os;
                os << g_n.coeff[k];
                record_value("intersect.pgf", "P[N=" + std::to_string(k) + "]", os.str(), tm.ms());
            }
        } else if (*its_phi) {
            Timer tm;
            double v = phi_limit ? dhl::intersection::mgf_phi_limit(params, t_arg)
                                 : dhl::intersection::mgf_phi(params, n, t_arg);
            record_value("intersect.phi", phi_limit ? "phi_inf" : "phi_n", fmt(v), tm.ms(), true,
                         std::nullopt, "t=" + fmt(t_arg));
        } else if (app.get_subcommand("intersect")->get_subcommand("extinction")->parsed()) {
            Timer tm;
            record_value("intersect.extinction", "p",
                         fmt(dhl::intersection::extinction_probability(params)), tm.ms());
        } else if (*its_dim) {
            Timer tm;
            if (dim_mc) {
                dhl::SplitRng rng(seed);
                double est = dhl::intersection::estimate_dimension_mc(params, n, samples, rng);
                record_value("intersect.dim", "h_mc", fmt(est), tm.ms(), false, 0.0);
            } else {
                record_value("intersect.dim", "h", fmt(dhl::intersection::hausdorff_exponent(params)),
                             tm.ms());
            }
        } else if (*spec) {
            Timer tm;
            auto matrix = dhl::operator_y::build_y_matrix(params, n);
            auto summary = dhl::operator_y::singular_values(matrix);
            for (auto [v, m] : summary.values)
                record_value("spectrum", "sigma x" + std::to_string(m), fmt(v), tm.ms(), false);
            record_value("spectrum", "hs_norm", fmt(dhl::operator_y::hs_norm_yyt(params, n)),
                         tm.ms());
            if (params.gmc_regime())
                record_value("spectrum", "hs_gap", fmt(dhl::operator_y::hs_gap(params, n)), tm.ms());
        } else if (*g_mass) {
            Timer tm;
            if (trials <= 1) {
                auto tree = dhl::gmc::NoiseTree::sample(params, n, seed);
                record_value("gmc.mass", "Z", fmt(dhl::gmc::total_mass(tree, n, beta)), tm.ms(),
                             false);
            } else {
                samples = trials;
                auto st = dhl::sharded_stat(trials, workers, [&](std::uint64_t lo, std::uint64_t hi,
                                                                 dhl::RunningStat& acc) {
                    for (std::uint64_t i = lo; i < hi; ++i) {
                        auto tree = dhl::gmc::NoiseTree::sample(
                            params, n, dhl::SplitRng(seed).derive(i).next_u64());
                        acc.add(dhl::gmc::total_mass(tree, n, beta));
                    }
                });
                record_value("gmc.mass", "mean_Z", fmt(st.mean), tm.ms(), false, st.std_error());
            }
        } else if (*g_rep) {
            Timer tm;
            double v = replica_m == 2 ? dhl::gmc::two_replica_moment(params, n, beta)
                                      : dhl::gmc::three_replica_moment(params, n, beta);
            record_value("gmc.replica", "E[Z^" + std::to_string(replica_m) + "]", fmt(v), tm.ms());
        } else if (*g_shift) {
            Timer tm;
            std::vector<double> psi(params.cells(psi_level));
            dhl::SplitRng prng(seed ^ 0x9e3779b97f4a7c15ull);
            for (auto& x : psi) x = prng.normal();
            auto rep = dhl::gmc::shift_identity_check(params, n, beta, psi, psi_level, samples, seed);
            record_value("gmc.shift", "mc_mean", fmt(rep.mc_mean), tm.ms(), false, rep.mc_se,
                         "psi_level=" + std::to_string(psi_level));
            record_value("gmc.shift", "exact", fmt(rep.exact), tm.ms());
        } else if (*g_frac) {
            Timer tm;
            auto rep = dhl::gmc::fractional_moment_mc(params, n, beta, samples, seed);
            record_value("gmc.fractional", "E[sqrt(Z)]", fmt(rep.mc_mean), tm.ms(), false, rep.mc_se);
            record_value("gmc.fractional", "bound", fmt(rep.bound), tm.ms());
        } else if (*g_loc) {
            Timer tm;
            auto betas = parse_double_list(beta_list);
            auto medians = dhl::gmc::median_max_share(params, n, coarse_m, betas, samples, seed);
            for (std::size_t i = 0; i < betas.size(); ++i) {
                Record r = base;
                r.experiment = "gmc.localize";
                r.n = n;
                r.beta = betas[i];
                r.samples = samples;
                r.value_name = "median_max_share";
                r.value = fmt(medians[i]);
                r.exact = false;
                r.wall_ms = tm.ms();
                out.add(std::move(r));
            }
        } else if (*g_tilt) {
            Timer tm;
            if (samples == 0) {
                record_value("gmc.tilted", "exact",
                             fmt(dhl::gmc::tilted_intersection_moment(params, n, beta, alpha)),
                             tm.ms(), true, std::nullopt, "alpha=" + fmt(alpha));
            } else {
                auto rep =
                    dhl::gmc::tilted_intersection_moment_mc(params, n, beta, alpha, samples, seed);
                record_value("gmc.tilted", "mc_mean", fmt(rep.mc_mean), tm.ms(), false, rep.mc_se,
                             "alpha=" + fmt(alpha));
                record_value("gmc.tilted", "exact", fmt(rep.exact), tm.ms(), true, std::nullopt,
                             "alpha=" + fmt(alpha));
            }
        } else if (*pol_z) {
            Timer tm;
            auto kind = dhl::polymer::weight_kind_from_string(dist_name);
            auto env = dhl::polymer::Environment::sample(params, n, kind, seed);
            record_value("polymer.z", "Z", fmt(dhl::polymer::partition_function(env, beta)),
                         tm.ms(), false, std::nullopt, "dist=" + dist_name);
        } else if (*pol_conv) {
            Timer tm;
            auto kind = dhl::polymer::weight_kind_from_string(dist_name);
            auto rows = dhl::polymer::convergence_experiment(params, beta, kind, parse_int_list(n_list));
            for (const auto& row : rows) {
                Record r = base;
                r.experiment = "polymer.converge";
                r.n = row.n;
                r.beta = beta;
                r.extra = "dist=" + dist_name + ";exact_m2=" + fmt(row.exact_m2) +
                          ";exact_m3=" + fmt(row.exact_m3) + ";gmc_m2=" + fmt(row.gmc_m2) +
                          ";gmc_m3=" + fmt(row.gmc_m3) + ";err_m3=" + fmt(row.err_m3);
                r.value_name = "err_m2";
                r.value = fmt(row.err_m2);
                r.wall_ms = tm.ms();
                out.add(std::move(r));
            }
        } else if (*ch_gamma) {
            Timer tm;
            std::vector<dhl::lattice::EdgeAddress> cells;
            std::stringstream ss(cells_str);
            std::string part;
            while (std::getline(ss, part, ',')) cells.push_back(dhl::lattice::EdgeAddress::parse(part));
            dhl::paths::CellSet set(params, n, std::move(cells));
            auto gr = dhl::chaos::gamma(set);
            record_value("chaos.gamma", "gamma", std::to_string(gr.value), tm.ms(), true,
                         std::nullopt,
                         "stabilization=" + std::to_string(gr.stabilization_level) + ";cells=" +
                             cells_str);
        } else if (*ch_check) {
            Timer tm;
            auto rep = dhl::chaos::consistency_check(params, chaos_k, n, dhl::chaos::PathEvent::all());
            std::ostringstream os1, os2;
            os1 << rep.max_marginal_residual;
            os2 << rep.total_mass_residual;
            record_value("chaos.check", "max_marginal_residual", os1.str(), tm.ms(), true,
                         std::nullopt, "k=" + std::to_string(chaos_k));
            record_value("chaos.check", "total_mass_residual", os2.str(), tm.ms(), true,
                         std::nullopt, "k=" + std::to_string(chaos_k));
        } else if (*ch_trunc) {
            Timer tm;
            double exact = dhl::chaos::truncation_variance_exact(params, n, beta, max_order);
            dhl::RunningStat st;
            for (std::uint64_t i = 0; i < samples; ++i) {
                auto tree = dhl::gmc::NoiseTree::sample(params, n,
                                                        dhl::SplitRng(seed).derive(i).next_u64());
                double z = dhl::gmc::total_mass(tree, n, beta);
                auto sum = dhl::chaos::chaos_partial_sum(tree, n, beta, dhl::chaos::PathEvent::all(),
                                                         max_order);
                double d = z - sum.total;
                st.add(d * d);
            }
            record_value("chaos.truncate", "mc_tail_variance", fmt(st.mean), tm.ms(), false,
                         st.std_error(), "K=" + std::to_string(max_order));
            record_value("chaos.truncate", "exact_tail_variance", fmt(exact), tm.ms(), true,
                         std::nullopt, "K=" + std::to_string(max_order));
        } else if (*ver) {
            Timer tm;
            auto level = level_name == "fast" ? dhl::verify::Level::fast : dhl::verify::Level::full;
            auto results = dhl::verify::run_acceptance(level, workers);
            int fails = 0;
            for (const auto& cr : results) {
                std::cerr << dhl::verify::format_result(cr) << "\n";
                Record r = base;
                r.experiment = "verify";
                r.extra = cr.name;
                r.value_name = "C" + std::to_string(cr.id);
                r.value = cr.pass ? "pass" : "fail";
                r.exact = false;
                r.wall_ms = cr.wall_ms;
                out.add(std::move(r));
                if (!cr.pass) ++fails;
            }
            out.flush();
            return fails == 0 ? 0 : 2;
        }

        out.flush();
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 0;
}
