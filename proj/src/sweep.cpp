#include "rstre/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include "rstre/clusters.hpp"
#include "rstre/errors.hpp"
#include "rstre/log_weight_graph.hpp"
#include "rstre/samplers.hpp"

namespace rstre {

double SweepConfig::beta_for(std::uint32_t n) const {
    const double nd = n;
    const double ln = std::log(nd);
    switch (beta_rule) {
        case BetaRule::kZero: return 0.0;
        case BetaRule::kLow: return beta_c * nd / ln;
        case BetaRule::kBoundary: return beta_c * nd;
        case BetaRule::kIntermediate: return beta_c * std::pow(nd, 1.0 + beta_gamma);
        case BetaRule::kHigh: return beta_c * std::pow(nd, 4.0 / 3.0) * ln;
        case BetaRule::kCollapse: {
            const double m = nd * (nd - 1.0) / 2.0;
            return 10.0 * m * m * nd * ln;
        }
        case BetaRule::kFixed: return beta_c;
        case BetaRule::kCustom: return beta_c * std::pow(nd, beta_a) * std::pow(ln, beta_b);
    }
    throw invalid_parameter("beta_for: unknown rule");
}

void SweepConfig::validate() const {
    if (n_list.empty()) throw invalid_parameter("sweep config: n_list is empty");
    for (auto n : n_list)
        if (n < 2) throw invalid_parameter("sweep config: all n must be >= 2");
    if (replicates < 1) throw invalid_parameter("sweep config: replicates must be >= 1");
    if (threads < 1) throw invalid_parameter("sweep config: threads must be >= 1");
    for (auto n : n_list) {
        const double b = beta_for(n);
        if (!(b >= 0.0) || !std::isfinite(b))
            throw invalid_parameter("sweep config: beta rule must be finite and nonnegative");
    }
    if (p0_mode == P0Mode::kValue && !(p0_value >= 0.0 && p0_value <= 1.0))
        throw invalid_parameter("sweep config: p0_value must be in [0,1]");
}

namespace {

BetaRule parse_beta_rule(const std::string& s) {
    if (s == "zero") return BetaRule::kZero;
    if (s == "low") return BetaRule::kLow;
    if (s == "boundary") return BetaRule::kBoundary;
    if (s == "intermediate") return BetaRule::kIntermediate;
    if (s == "high") return BetaRule::kHigh;
    if (s == "collapse") return BetaRule::kCollapse;
    if (s == "fixed") return BetaRule::kFixed;
    if (s == "custom") return BetaRule::kCustom;
    throw invalid_parameter("sweep config: unknown beta_rule " + s);
}

SamplerKind parse_sampler(const std::string& s) {
    if (s == "wilson") return SamplerKind::kWilson;
    if (s == "exact") return SamplerKind::kExact;
    if (s == "mst") return SamplerKind::kMst;
    throw invalid_parameter("sweep config: unknown sampler " + s);
}

const char* sampler_name(SamplerKind k) {
    switch (k) {
        case SamplerKind::kWilson: return "wilson";
        case SamplerKind::kExact: return "exact";
        case SamplerKind::kMst: return "mst";
    }
    return "?";
}

}  // namespace

SweepConfig parse_sweep_config(std::istream& in) {
    SweepConfig cfg;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        // trim
        auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
        while (!line.empty() && is_space(line.back())) line.pop_back();
        std::size_t start = 0;
        while (start < line.size() && is_space(line[start])) ++start;
        line.erase(0, start);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw invalid_parameter("sweep config line " + std::to_string(lineno) +
                                    ": expected key=value");
        const std::string key = line.substr(0, eq);
        const std::string val = line.substr(eq + 1);
        try {
            if (key == "master_seed") cfg.master_seed = std::stoull(val);
            else if (key == "n_list") {
                cfg.n_list.clear();
                std::stringstream ss(val);
                std::string tok;
                while (std::getline(ss, tok, ','))
                    if (!tok.empty()) cfg.n_list.push_back(static_cast<std::uint32_t>(std::stoul(tok)));
            } else if (key == "replicates") cfg.replicates = static_cast<std::uint32_t>(std::stoul(val));
            else if (key == "sampler") cfg.sampler = parse_sampler(val);
            else if (key == "beta_rule") cfg.beta_rule = parse_beta_rule(val);
            else if (key == "beta_c") cfg.beta_c = std::stod(val);
            else if (key == "beta_a") cfg.beta_a = std::stod(val);
            else if (key == "beta_b") cfg.beta_b = std::stod(val);
            else if (key == "beta_gamma") cfg.beta_gamma = std::stod(val);
            else if (key == "p0_mode") {
                if (val == "off") cfg.p0_mode = SweepConfig::P0Mode::kOff;
                else if (val == "critical") cfg.p0_mode = SweepConfig::P0Mode::kCritical;
                else if (val == "value") cfg.p0_mode = SweepConfig::P0Mode::kValue;
                else throw invalid_parameter("sweep config: unknown p0_mode " + val);
            } else if (key == "p0_g0") cfg.p0_g0 = std::stod(val);
            else if (key == "p0_value") cfg.p0_value = std::stod(val);
            else if (key == "overlap") cfg.overlap = (val == "1" || val == "true");
            else if (key == "out") cfg.out = val;
            else if (key == "threads") cfg.threads = static_cast<std::uint32_t>(std::stoul(val));
            else if (key == "wilson_budget_factor") cfg.wilson_budget_factor = std::stod(val);
            else if (key == "wilson_transition") cfg.wilson_alias = (val == "alias");
            else if (key == "exact_cap") cfg.exact_cap = static_cast<std::uint32_t>(std::stoul(val));
            else if (key == "record_wall_time") cfg.record_wall_time = (val == "1" || val == "true");
            else throw invalid_parameter("sweep config: unknown key " + key);
        } catch (const std::invalid_argument& e) {
            throw invalid_parameter("sweep config line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    cfg.validate();
    return cfg;
}

SweepConfig parse_sweep_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw invalid_parameter("cannot open config " + path);
    return parse_sweep_config(in);
}

std::uint64_t replicate_seed(std::uint64_t master_seed, std::uint32_t n_index,
                             std::uint32_t replicate_index) {
    const std::uint64_t a = mix64(master_seed ^ (kGolden * (n_index + 1ULL)));
    return mix64(a ^ (kGolden * (replicate_index + 1ULL)));
}

namespace {

struct TaskResult {
    ExperimentRecord rec;
};

ExperimentRecord run_one(const SweepConfig& cfg, std::uint64_t run_id, std::uint32_t n_index,
                         std::uint32_t rep_index) {
    const std::uint32_t n = cfg.n_list[n_index];
    ExperimentRecord rec;
    rec.run_id = run_id;
    rec.n = n;
    rec.beta = cfg.beta_for(n);
    rec.seed = replicate_seed(cfg.master_seed, n_index, rep_index);
    rec.sampler = sampler_name(cfg.sampler);
    rec.status = "ok";

    const auto t0 = std::chrono::steady_clock::now();
    try {
        const Environment env = gen_environment(n, rec.seed);
        Rng rng(mix64(rec.seed ^ 0x54524545ULL));  // tree-sampling stream

        auto sample_tree = [&]() -> SpanningTree {
            switch (cfg.sampler) {
                case SamplerKind::kMst: return mst_kruskal(env);
                case SamplerKind::kExact: {
                    SequentialOptions opts;
                    opts.size_cap = cfg.exact_cap;
                    return sequential_exact_sample(
                        LogWeightGraph::complete_view(env, rec.beta), rng, opts);
                }
                case SamplerKind::kWilson:
                default: {
                    WilsonOptions opts;
                    opts.transition = cfg.wilson_alias ? Transition::kAlias : Transition::kGumbel;
                    opts.step_budget = static_cast<std::uint64_t>(
                        cfg.wilson_budget_factor * 1e4 * n * std::max(1.0, std::log(n)));
                    return wilson_sample(LogWeightGraph::complete_view(env, rec.beta), 0, rng,
                                         opts);
                }
            }
        };

        const SpanningTree tree = sample_tree();
        rec.diam = tree.diameter();

        if (cfg.p0_mode != SweepConfig::P0Mode::kOff) {
            const double p0 = cfg.p0_mode == SweepConfig::P0Mode::kValue
                                  ? cfg.p0_value
                                  : std::min(1.0, (1.0 + cfg.p0_g0 * std::cbrt(1.0 / n)) / n);
            const auto dec = clusters_at(env, p0);
            if (!dec.sizes.empty() && dec.sizes[0] >= 2)
                rec.diam_c1p0 = minimal_subtree(tree, dec.vertices_of(0)).diameter();
            else
                rec.diam_c1p0 = 0;
        }
        if (cfg.overlap) {
            const SpanningTree second = sample_tree();
            rec.overlap = static_cast<std::int64_t>(edge_overlap(tree, second));
        }
    } catch (const budget_exceeded& e) {
        rec.status = "budget";
        rec.steps = e.steps_taken;
    } catch (const std::exception&) {
        rec.status = "error";
    }
    if (cfg.record_wall_time) {
        const auto t1 = std::chrono::steady_clock::now();
        rec.wall_ms = static_cast<std::uint64_t>(
            std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count());
    }
    return rec;
}

void format_record(std::string& out, const ExperimentRecord& r) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%llu,%u,%.17g,%llu,", (unsigned long long)r.run_id, r.n,
                  r.beta, (unsigned long long)r.seed);
    out += buf;
    out += r.sampler;
    auto put_i64 = [&](std::int64_t v) {
        out += ',';
        if (v >= 0) out += std::to_string(v);
    };
    put_i64(r.diam);
    put_i64(r.diam_c1p0);
    put_i64(r.overlap);
    out += ',';
    out += std::to_string(r.steps);
    out += ',';
    out += std::to_string(r.wall_ms);
    out += ',';
    out += r.status;
    out += '\n';
}

}  // namespace

std::vector<ExperimentRecord> run_sweep(const SweepConfig& cfg) {
    cfg.validate();
    const std::uint64_t total =
        static_cast<std::uint64_t>(cfg.n_list.size()) * cfg.replicates;
    std::vector<ExperimentRecord> records(total);
    std::atomic<std::uint64_t> next{0};

    auto worker = [&]() {
        for (;;) {
            const std::uint64_t i = next.fetch_add(1);
            if (i >= total) return;
            const auto n_index = static_cast<std::uint32_t>(i / cfg.replicates);
            const auto rep_index = static_cast<std::uint32_t>(i % cfg.replicates);
            records[i] = run_one(cfg, i, n_index, rep_index);
        }
    };
    if (cfg.threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::uint32_t t = 0; t < cfg.threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    if (!cfg.out.empty()) {
        std::ofstream out(cfg.out, std::ios::binary);
        if (!out) throw invalid_parameter("run_sweep: cannot open " + cfg.out);
        out << to_csv(records);
    }
    return records;
}

std::string to_csv(const std::vector<ExperimentRecord>& records) {
    std::string out(kCsvHeader);
    out += '\n';
    for (const auto& r : records) format_record(out, r);
    return out;
}

std::vector<ExperimentRecord> parse_csv(std::istream& in) {
    std::vector<ExperimentRecord> out;
    std::string line;
    if (!std::getline(in, line)) return out;
    if (line != kCsvHeader) throw invalid_parameter("parse_csv: unexpected header: " + line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) f.push_back(tok);
        while (f.size() < 11) f.emplace_back();
        ExperimentRecord r;
        r.run_id = std::stoull(f[0]);
        r.n = static_cast<std::uint32_t>(std::stoul(f[1]));
        r.beta = std::stod(f[2]);
        r.seed = std::stoull(f[3]);
        r.sampler = f[4];
        r.diam = f[5].empty() ? -1 : std::stoll(f[5]);
        r.diam_c1p0 = f[6].empty() ? -1 : std::stoll(f[6]);
        r.overlap = f[7].empty() ? -1 : std::stoll(f[7]);
        r.steps = f[8].empty() ? 0 : std::stoull(f[8]);
        r.wall_ms = f[9].empty() ? 0 : std::stoull(f[9]);
        r.status = f[10];
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<ExperimentRecord> parse_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw invalid_parameter("parse_csv: cannot open " + path);
    return parse_csv(in);
}

bool RecordFilter::matches(const ExperimentRecord& r) const {
    if (sampler && r.sampler != *sampler) return false;
    if (!status.empty() && r.status != status) return false;
    if (n_min && r.n < *n_min) return false;
    if (n_max && r.n > *n_max) return false;
    return true;
}

RecordFilter parse_filter(const std::string& expr) {
    RecordFilter f;
    std::stringstream ss(expr);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        const auto eq = tok.find('=');
        if (eq == std::string::npos)
            throw invalid_parameter("filter: expected key=value, got " + tok);
        const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
        if (key == "sampler") f.sampler = val;
        else if (key == "status") f.status = val;
        else if (key == "n_min") f.n_min = static_cast<std::uint32_t>(std::stoul(val));
        else if (key == "n_max") f.n_max = static_cast<std::uint32_t>(std::stoul(val));
        else throw invalid_parameter("filter: unknown key " + key);
    }
    return f;
}

FitResult fit_exponent(const std::vector<ExperimentRecord>& records, const RecordFilter& filter) {
    std::map<std::uint32_t, std::pair<double, std::uint64_t>> cells;  // n -> (sum diam, count)
    for (const auto& r : records) {
        if (!filter.matches(r) || r.diam < 1) continue;
        auto& c = cells[r.n];
        c.first += static_cast<double>(r.diam);
        c.second += 1;
    }
    std::vector<std::string> deficient;
    for (const auto& [n, c] : cells)
        if (c.second < 10) deficient.push_back("n=" + std::to_string(n) + " has " +
                                               std::to_string(c.second) + " rows");
    std::size_t good = 0;
    for (const auto& [n, c] : cells) good += (c.second >= 10);
    if (good < 3) {
        std::string msg = "fit_exponent: need >= 3 distinct n with >= 10 successful replicates";
        for (const auto& d : deficient) msg += "; " + d;
        msg += "; usable cells: " + std::to_string(good);
        throw invalid_parameter(msg);
    }

    FitResult fit;
    std::vector<std::pair<double, double>> pts;  // (log n, log mean)
    for (const auto& [n, c] : cells) {
        if (c.second < 10) continue;
        const double mean = c.first / static_cast<double>(c.second);
        fit.per_n_mean.emplace_back(n, mean);
        pts.emplace_back(std::log(static_cast<double>(n)), std::log(mean));
        fit.n_lo = fit.n_lo == 0 ? n : std::min(fit.n_lo, n);
        fit.n_hi = std::max(fit.n_hi, n);
    }
    const auto k = static_cast<double>(pts.size());
    double sx = 0, sy = 0;
    for (auto [x, y] : pts) { sx += x; sy += y; }
    const double mx = sx / k, my = sy / k;
    double sxx = 0, sxy = 0;
    for (auto [x, y] : pts) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0;
    for (auto [x, y] : pts) {
        const double r = y - (fit.intercept + fit.slope * x);
        ss_res += r * r;
    }
    fit.stderr_slope = pts.size() > 2 ? std::sqrt(ss_res / (k - 2.0) / sxx) : 0.0;
    return fit;
}

std::vector<std::string> emit_report(const std::vector<ExperimentRecord>& records,
                                     const std::string& prefix) {
    if (records.empty()) throw invalid_parameter("emit_report: no records");
    std::map<std::string, std::map<std::uint32_t, std::vector<double>>> groups;
    for (const auto& r : records)
        if (r.status == "ok" && r.diam >= 1)
            groups[r.sampler][r.n].push_back(static_cast<double>(r.diam));
    if (groups.empty()) throw invalid_parameter("emit_report: no successful records");

    std::vector<std::string> files;
    for (const auto& [sampler, by_n] : groups) {
        const std::string path = prefix + "_" + sampler + ".dat";
        std::ofstream out(path);
        if (!out) throw invalid_parameter("emit_report: cannot open " + path);
        out << "# n mean lo hi\n";
        char buf[160];
        for (const auto& [n, xs] : by_n) {
            double mean = 0;
            for (double x : xs) mean += x;
            mean /= static_cast<double>(xs.size());
            double var = 0;
            for (double x : xs) var += (x - mean) * (x - mean);
            var = xs.size() > 1 ? var / static_cast<double>(xs.size() - 1) : 0.0;
            const double half = 1.96 * std::sqrt(var / static_cast<double>(xs.size()));
            std::snprintf(buf, sizeof(buf), "%u %.6g %.6g %.6g\n", n, mean, mean - half,
                          mean + half);
            out << buf;
        }
        files.push_back(path);
    }
    return files;
}

}  // namespace rstre
