#include "rstre/environment.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rstre/errors.hpp"

namespace rstre {

Environment gen_environment(std::uint32_t n, std::uint64_t seed) {
    if (n < 2) throw invalid_parameter("gen_environment: n must be >= 2");
    return Environment::procedural(n, seed);
}

void save_environment(const Environment& env, std::ostream& out) {
    out << "rstre-env v1 n=" << env.n() << " seed=" << env.seed() << "\n";
    char buf[64];
    const std::uint64_t m = env.edges();
    for (EdgeId e = 0; e < m; ++e) {
        std::snprintf(buf, sizeof(buf), "%.17g\n", env.omega(e));
        out << buf;
    }
}

void save_environment(const Environment& env, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw invalid_parameter("save_environment: cannot open " + path);
    save_environment(env, out);
}

Environment load_environment(std::istream& in) {
    std::string header;
    if (!std::getline(in, header)) throw invalid_parameter("load_environment: empty input");
    std::uint32_t n = 0;
    std::uint64_t seed = 0;
    if (std::sscanf(header.c_str(), "rstre-env v1 n=%" SCNu32 " seed=%" SCNu64, &n, &seed) != 2)
        throw invalid_parameter("load_environment: bad header: " + header);
    if (n < 2) throw invalid_parameter("load_environment: n must be >= 2");
    const std::uint64_t m = edge_count(n);
    std::vector<double> omega(m);
    for (std::uint64_t e = 0; e < m; ++e) {
        if (!(in >> omega[e]))
            throw invalid_parameter("load_environment: truncated at edge " + std::to_string(e));
        if (!(omega[e] >= 0.0 && omega[e] <= 1.0))
            throw invalid_parameter("load_environment: omega out of [0,1]");
    }
    return Environment::stored(n, seed, std::move(omega));
}

Environment load_environment(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw invalid_parameter("load_environment: cannot open " + path);
    return load_environment(in);
}

}  // namespace rstre
