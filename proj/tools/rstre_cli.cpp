#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "rstre/clusters.hpp"
#include "rstre/environment.hpp"
#include "rstre/errors.hpp"
#include "rstre/log_weight_graph.hpp"
#include "rstre/samplers.hpp"
#include "rstre/sweep.hpp"
#include "rstre/verify.hpp"
#include "rstre/walk_stats.hpp"

using nlohmann::json;

namespace {

int cmd_gen(std::uint32_t n, std::uint64_t seed, const std::string& out) {
    const auto env = rstre::gen_environment(n, seed);
    if (out.empty() || out == "-")
        rstre::save_environment(env, std::cout);
    else
        rstre::save_environment(env, out);
    return 0;
}

int cmd_sample(const std::string& sampler, double beta, std::uint32_t n, std::uint64_t seed,
               const std::string& out, std::uint32_t exact_cap, const std::string& transition,
               const std::string& env_file) {
    rstre::Environment env = env_file.empty() ? rstre::gen_environment(n, seed)
                                              : rstre::load_environment(env_file);
    rstre::Rng rng(rstre::mix64(seed ^ 0x54524545ULL));
    rstre::SpanningTree tree;
    if (sampler == "mst") {
        tree = rstre::mst_kruskal(env);
    } else if (sampler == "exact") {
        rstre::SequentialOptions opts;
        opts.size_cap = exact_cap;
        tree = rstre::sequential_exact_sample(rstre::log_weight_view(env, beta), rng, opts);
    } else if (sampler == "wilson") {
        rstre::WilsonOptions opts;
        opts.transition =
            transition == "alias" ? rstre::Transition::kAlias : rstre::Transition::kGumbel;
        tree = rstre::wilson_sample(rstre::log_weight_view(env, beta), 0, rng, opts);
    } else {
        throw rstre::invalid_parameter("sample: sampler must be wilson, exact or mst");
    }
    if (out.empty() || out == "-")
        rstre::save_tree(tree, std::cout);
    else
        rstre::save_tree(tree, out);
    std::cerr << "diam=" << tree.diameter() << "\n";
    return 0;
}

int cmd_sweep(const std::string& config) {
    const auto cfg = rstre::parse_sweep_config_file(config);
    const auto records = rstre::run_sweep(cfg);
    if (cfg.out.empty()) std::cout << rstre::to_csv(records);
    std::uint64_t ok = 0, budget = 0, error = 0;
    for (const auto& r : records) {
        ok += r.status == "ok";
        budget += r.status == "budget";
        error += r.status == "error";
    }
    std::cerr << "rows=" << records.size() << " ok=" << ok << " budget=" << budget
              << " error=" << error << "\n";
    return budget + error > 0 ? 3 : 0;
}

int cmd_fit(const std::string& csv, const std::string& filter) {
    const auto records = rstre::parse_csv_file(csv);
    const auto fit = rstre::fit_exponent(records, rstre::parse_filter(filter));
    json per_n = json::array();
    for (auto [n, mean] : fit.per_n_mean) per_n.push_back({{"n", n}, {"mean_diam", mean}});
    json out = {{"slope", fit.slope},
                {"intercept", fit.intercept},
                {"stderr", fit.stderr_slope},
                {"n_lo", fit.n_lo},
                {"n_hi", fit.n_hi},
                {"per_n", per_n}};
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_er_stats(std::uint32_t n, double p, std::uint32_t seeds, std::uint64_t seed0, bool sparse,
                 double beta) {
    json out = json::array();
    for (std::uint32_t s = 0; s < seeds; ++s) {
        rstre::ClusterDecomposition dec;
        if (sparse) {
            dec = rstre::clusters_from(rstre::sample_open_edges_sparse(n, seed0 + s, p), p);
        } else {
            dec = rstre::clusters_at(rstre::gen_environment(n, seed0 + s), p);
        }
        const auto st = rstre::component_stats(dec, 0);
        json row = {{"seed", seed0 + s},
                    {"c1_size", st.size},
                    {"c1_excess", st.excess},
                    {"c1_diameter", st.diameter},
                    {"diameter_exact", st.diameter_exact},
                    {"c2_size", dec.component_count() > 1 ? dec.sizes[1] : 0}};
        out.push_back(row);
    }
    json report = {{"n", n}, {"p", p}, {"rows", out}};
    if (beta > 0.0) {
        // admissible eps for the p-ladder reduction: n^{-1/3} <= eps <= 1/log n
        // with beta * eps >= n log n
        const double lo = std::max(std::cbrt(1.0 / n), n * std::log(n) / beta);
        const double hi = 1.0 / std::log(n);
        report["admissible_eps"] = {{"lo", lo}, {"hi", hi}, {"empty", lo > hi}};
    }
    std::cout << report.dump(2) << "\n";
    return 0;
}

int cmd_walk_stats(std::uint32_t n, double beta, double alpha, std::uint64_t seed) {
    const auto env = rstre::gen_environment(n, seed);
    const auto rep = rstre::check_conditions(rstre::log_weight_view(env, beta), alpha);
    json out = {{"n", n},
                {"beta", beta},
                {"alpha", rep.alpha},
                {"seed", seed},
                {"d_ratio", rep.d_ratio},
                {"log_d", rep.log_d},
                {"tmix", rep.tmix == rstre::kMixingInfinite ? json(nullptr) : json(rep.tmix)},
                {"tmix_exact", rep.tmix_exact},
                {"alpha_slack", rep.alpha_slack},
                {"theta", rep.theta_exact ? json(rep.theta) : json(nullptr)},
                {"balanced", rep.balanced},
                {"mixing", rep.mixing},
                {"mixing_known", rep.mixing_known},
                {"escaping", rep.escaping},
                {"pass", rep.pass}};
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_verify(const std::string& level, const std::string& out_path) {
    bool all_pass = false;
    const auto ids = rstre::verify_checks_for_level(level);
    json checks = json::array();
    for (int id : ids) {
        const auto r = rstre::run_acceptance_check(id);
        std::printf("[%s] criterion %d: %s\n", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str());
        std::fflush(stdout);
        checks.push_back(
            {{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"details", r.details}});
    }
    all_pass = std::all_of(checks.begin(), checks.end(),
                           [](const json& c) { return c.at("pass").get<bool>(); });
    const json report = {{"level", level}, {"checks", checks}, {"pass", all_pass}};
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        out << report.dump(2) << "\n";
    } else {
        std::cout << report.dump(2) << "\n";
    }
    return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"RSTRE simulation toolkit: samplers, ER coupling, walk statistics, sweeps"};
    app.require_subcommand(1);

    std::uint32_t n = 16;
    std::uint64_t seed = 1;
    double beta = 0.0, p = 0.0, alpha = 0.25;
    std::uint32_t seeds = 10, exact_cap = 128;
    std::string out, sampler = "wilson", config, csv, filter = "status=ok", level = "fast";
    std::string transition = "gumbel", env_file;
    bool sparse = false;

    auto* gen = app.add_subcommand("gen", "write an environment file");
    gen->add_option("--n", n, "vertex count")->required();
    gen->add_option("--seed", seed, "environment seed")->required();
    gen->add_option("--out", out, "output path (- for stdout)");

    auto* sample = app.add_subcommand("sample", "sample one spanning tree");
    sample->add_option("--sampler", sampler, "wilson | exact | mst");
    sample->add_option("--beta", beta, "disorder strength");
    sample->add_option("--n", n, "vertex count");
    sample->add_option("--seed", seed, "environment seed");
    sample->add_option("--env", env_file, "read the environment from a file instead");
    sample->add_option("--out", out, "output path (- for stdout)");
    sample->add_option("--exact-cap", exact_cap, "size cap for the exact sampler");
    sample->add_option("--transition", transition, "wilson step sampling: gumbel | alias");

    auto* sweep = app.add_subcommand("sweep", "run a configured sweep");
    sweep->add_option("--config", config, "key=value config file")->required();

    auto* fit = app.add_subcommand("fit", "fit the diameter exponent from a sweep CSV");
    fit->add_option("--csv", csv, "sweep CSV")->required();
    fit->add_option("--filter", filter, "sampler=..,status=..,n_min=..,n_max=..");

    auto* er = app.add_subcommand("er-stats", "p-cluster statistics per seed");
    er->add_option("--n", n, "vertex count")->required();
    er->add_option("--p", p, "threshold")->required();
    er->add_option("--seeds", seeds, "number of seeds");
    er->add_option("--seed0", seed, "first seed");
    er->add_flag("--sparse", sparse, "use the sparse geometric-skip generator");
    er->add_option("--beta", beta, "also report the admissible eps interval for this beta");

    auto* walk = app.add_subcommand("walk-stats", "lazy-chain condition report");
    walk->add_option("--n", n, "vertex count")->required();
    walk->add_option("--beta", beta, "disorder strength")->required();
    walk->add_option("--alpha", alpha, "mixing condition exponent");
    walk->add_option("--seed", seed, "environment seed");

    auto* verify = app.add_subcommand("verify", "run the acceptance checks");
    verify->add_option("--level", level, "fast | full");
    verify->add_option("--out", out, "write the JSON report here");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return cmd_gen(n, seed, out);
        if (sample->parsed())
            return cmd_sample(sampler, beta, n, seed, out, exact_cap, transition, env_file);
        if (sweep->parsed()) return cmd_sweep(config);
        if (fit->parsed()) return cmd_fit(csv, filter);
        if (er->parsed()) return cmd_er_stats(n, p, seeds, seed, sparse, beta);
        if (walk->parsed()) return cmd_walk_stats(n, beta, alpha, seed);
        if (verify->parsed()) return cmd_verify(level, out);
    } catch (const rstre::invalid_parameter& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const rstre::size_cap_error& e) {
        std::cerr << "cap exceeded: " << e.what() << "\n";
        return 3;
    } catch (const rstre::budget_exceeded& e) {
        std::cerr << "budget exceeded: " << e.what() << " (steps=" << e.steps_taken
                  << ", attached=" << e.vertices_attached << ")\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
