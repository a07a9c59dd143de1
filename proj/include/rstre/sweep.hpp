#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rstre/environment.hpp"
#include "rstre/rng.hpp"

namespace rstre {

enum class SamplerKind { kWilson, kExact, kMst };

enum class BetaRule { kZero, kLow, kBoundary, kIntermediate, kHigh, kCollapse, kFixed, kCustom };

struct SweepConfig {
    std::uint64_t master_seed = 1;
    std::vector<std::uint32_t> n_list;
    std::uint32_t replicates = 1;
    SamplerKind sampler = SamplerKind::kWilson;

    BetaRule beta_rule = BetaRule::kZero;
    double beta_c = 1.0;      // multiplier for every rule
    double beta_a = 0.0;      // custom: beta = c * n^a * (log n)^b
    double beta_b = 0.0;
    double beta_gamma = 0.0;  // intermediate: beta = c * n^{1+gamma}

    // T_{C_1(p0)} statistics: off, the critical window p0 = (1 + g0 n^{-1/3})/n,
    // or an explicit threshold
    enum class P0Mode { kOff, kCritical, kValue } p0_mode = P0Mode::kOff;
    double p0_g0 = 1.0;
    double p0_value = 0.0;

    bool overlap = false;  // sample a second tree, record the edge overlap

    std::string out;
    std::uint32_t threads = 1;
    double wilson_budget_factor = 1.0;
    bool wilson_alias = false;
    std::uint32_t exact_cap = 128;
    bool record_wall_time = false;  // measured times break byte-determinism; default off

    double beta_for(std::uint32_t n) const;
    void validate() const;
};

// Flat key=value text, '#' comments. Unknown keys are an error.
SweepConfig parse_sweep_config(std::istream& in);
SweepConfig parse_sweep_config_file(const std::string& path);

struct ExperimentRecord {
    std::uint64_t run_id = 0;
    std::uint32_t n = 0;
    double beta = 0.0;
    std::uint64_t seed = 0;
    std::string sampler;
    std::int64_t diam = -1;          // -1 => missing
    std::int64_t diam_c1p0 = -1;
    std::int64_t overlap = -1;
    std::uint64_t steps = 0;
    std::uint64_t wall_ms = 0;
    std::string status;              // ok | budget | error
};

// Deterministic per-replicate stream: two rounds of the 64-bit avalanche mix
// over (master_seed, n index, replicate index).
std::uint64_t replicate_seed(std::uint64_t master_seed, std::uint32_t n_index,
                             std::uint32_t replicate_index);

inline constexpr const char* kCsvHeader =
    "run_id,n,beta,seed,sampler,diam,diam_c1p0,overlap,steps,wall_ms,status";

// Runs the sweep on a worker pool; rows come out sorted by (n, replicate) and
// the bytes are independent of the thread count (wall_ms is 0 unless
// record_wall_time). Returns the records and, when cfg.out is set, writes the
// CSV there.
std::vector<ExperimentRecord> run_sweep(const SweepConfig& cfg);

std::string to_csv(const std::vector<ExperimentRecord>& records);
std::vector<ExperimentRecord> parse_csv(std::istream& in);
std::vector<ExperimentRecord> parse_csv_file(const std::string& path);

struct RecordFilter {
    std::optional<std::string> sampler;
    std::string status = "ok";
    std::optional<std::uint32_t> n_min;
    std::optional<std::uint32_t> n_max;

    bool matches(const ExperimentRecord& r) const;
};

// "key=value,key=value" over sampler / status / n_min / n_max.
RecordFilter parse_filter(const std::string& expr);

struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double stderr_slope = 0.0;
    std::uint32_t n_lo = 0;
    std::uint32_t n_hi = 0;
    std::vector<std::pair<std::uint32_t, double>> per_n_mean;
};

// Least squares of log(mean diam) on log n. pre: >= 3 distinct n with >= 10
// successful replicates each; otherwise throws listing the deficient cells.
FitResult fit_exponent(const std::vector<ExperimentRecord>& records, const RecordFilter& filter);

// Per-sampler aggregate tables `n mean lo hi` (95% normal CI), one file per
// sampler named <prefix>_<sampler>.dat. Returns the file names.
std::vector<std::string> emit_report(const std::vector<ExperimentRecord>& records,
                                     const std::string& prefix);

}  // namespace rstre
