#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <random>
#include <string>
#include <vector>

#include <doctest.h>

#include "sabcp/data.hpp"
#include "sabcp/gate_mixture.hpp"

namespace sabcp_test {

inline doctest::Approx exact(double v) { return doctest::Approx(v).epsilon(1e-9); }

inline sabcp::SabcpConfig absolute_config(double alpha = 0.1, double k = 1.0, double r_max = 10.0,
                                          std::size_t dim = 1) {
    sabcp::SabcpConfig c;
    c.alpha = alpha;
    c.k = k;
    c.r_max = r_max;
    c.state_dim = dim;
    c.score_mode = sabcp::ScoreMode::absolute;
    return c;
}

inline sabcp::IntervalForecast feed(sabcp::Predictor& p, std::uint64_t t, double x, double y) {
    const sabcp::StepInput in{t, 0.0, 1.0, std::span<const double>(&x, 1), true};
    return sabcp::stream_step(p, in, y);
}

// 2000 steps of the two-regime generator with four shocks
inline sabcp::SyntheticStream mixed_stream(std::uint64_t seed = 1) {
    sabcp::SyntheticSpec spec;
    spec.total_steps = 2000;
    spec.shock_starts = {300, 700, 1100, 1500};
    spec.seed = seed;
    return sabcp::synth_stream(spec);
}

/// Largest |q_hat| gap between SA-BCP at huge K and BCP over a stream.
inline double degeneration_gap(const sabcp::SyntheticStream& s, double k = 1e12) {
    sabcp::SabcpEngine sa(absolute_config(0.1, k), false);
    sabcp::SabcpEngine bcp(absolute_config(0.1, k), true);
    double worst = 0.0;
    for (std::size_t t = 0; t < s.size(); ++t) {
        const auto a = feed(sa, t, s.x[t], s.y[t]);
        const auto b = feed(bcp, t, s.x[t], s.y[t]);
        worst = std::max({worst, std::abs(a.q_hat - b.q_hat), std::abs(a.lower - b.lower),
                          std::abs(a.upper - b.upper)});
    }
    return worst;
}

/// yyyy-mm-dd of the n-th day after 2000-01-01.
inline std::string iso_day(std::size_t n) {
    using namespace std::chrono;
    const year_month_day d{sys_days{year{2000} / January / 1} + days{static_cast<int>(n)}};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()), static_cast<unsigned>(d.month()),
                  static_cast<unsigned>(d.day()));
    return buf;
}

enum class Clustering { garch_t, switching, leverage };

/// Daily closes whose returns show volatility clustering: GARCH with t(5)
/// shocks, a two-state switching volatility, or an asymmetric GARCH.
inline sabcp::ReturnSeries clustered_series(const std::string& asset, Clustering kind, std::uint64_t seed,
                                            std::size_t n) {
    std::mt19937_64 rng(seed);
    std::student_t_distribution<double> shock(5.0);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> unif;
    const double t_scale = std::sqrt(3.0 / 5.0);
    double s2 = 1.0;
    bool calm = true;
    double price = 100.0;
    std::vector<double> closes;
    std::vector<std::string> dates;
    for (std::size_t i = 0; i < n; ++i) {
        double r = 0.0;
        switch (kind) {
            case Clustering::garch_t:
                r = std::sqrt(s2) * shock(rng) * t_scale;
                s2 = 2.0 * 0.02 + 0.1 * r * r + 0.88 * s2;
                break;
            case Clustering::switching:
                if (unif(rng) < 0.01) calm = !calm;
                r = (calm ? 0.8 : 2.5) * normal(rng);
                break;
            case Clustering::leverage:
                r = std::sqrt(s2) * shock(rng) * t_scale;
                s2 = 0.4 * 0.01 + 0.03 * r * r + (r < 0 ? 0.12 * r * r : 0.0) + 0.9 * s2;
                break;
        }
        price *= std::exp(r / 100.0);
        closes.push_back(price);
        dates.push_back(iso_day(i));
    }
    return sabcp::series_from_closes(asset, std::move(dates), std::move(closes));
}

/// Fresh, empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& tag) {
    static std::atomic<int> counter{0};
    std::random_device rd;
    const auto dir = std::filesystem::temp_directory_path() /
                     ("sabcp_" + tag + "_" + std::to_string(rd()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

/// Writes a clustered series as a price CSV and returns its path.
inline std::filesystem::path write_price_csv(const std::filesystem::path& dir, const sabcp::ReturnSeries& s) {
    const auto path = dir / (s.asset + ".csv");
    std::ofstream out(path, std::ios::binary);
    sabcp::write_prices(out, s);
    return path;
}

/// Relative path -> file contents for every regular file under `root`.
inline std::map<std::string, std::string> read_tree(const std::filesystem::path& root) {
    std::map<std::string, std::string> files;
    for (const auto& e : std::filesystem::recursive_directory_iterator(root)) {
        if (!e.is_regular_file()) continue;
        std::ifstream in(e.path(), std::ios::binary);
        std::ostringstream os;
        os << in.rdbuf();
        files[std::filesystem::relative(e.path(), root).generic_string()] = os.str();
    }
    return files;
}

}  // namespace sabcp_test
