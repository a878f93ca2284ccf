#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <set>
#include <string>
#include <thread>

#include "cli.hpp"

namespace sabcp_cli {

namespace {

const std::vector<double> kDefaultAlphas{0.1, 0.2, 0.3};
const std::vector<double> kDefaultKGrid{0.01, 0.1, 1.0, 10.0, 100.0, 1000.0};
constexpr double kSynthK = 10.0;
constexpr double kSynthRMax = 10.0;

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

double parse_real(const std::string& text, const std::string& what) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        throw PlanError(what + ": not a number: '" + text + "'");
    }
    if (used != text.size() || !std::isfinite(v)) throw PlanError(what + ": not a number: '" + text + "'");
    return v;
}

bool valid_asset(const std::string& name) {
    if (name.empty()) return false;
    return std::all_of(name.begin(), name.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '-' || c == '_' || c == '.';
    });
}

Dataset parse_dataset(const std::string& spec) {
    Dataset d;
    const auto eq = spec.find('=');
    if (eq == std::string::npos) {
        d.source = spec;
        d.asset = lower(spec) == "synthetic" ? "synthetic" : std::filesystem::path(spec).stem().string();
    } else {
        d.asset = spec.substr(0, eq);
        d.source = spec.substr(eq + 1);
    }
    if (d.source.empty()) throw PlanError("--data '" + spec + "': missing source");
    if (!valid_asset(d.asset)) {
        throw PlanError("--data '" + spec + "': asset names may only use letters, digits, '-', '_' and '.'");
    }
    d.synthetic = lower(d.source) == "synthetic";
    return d;
}

void check_open_unit(double v, const char* what) {
    if (!(v > 0.0 && v < 1.0)) throw PlanError(std::string(what) + " must lie in (0, 1), got " + fmt(v));
}

void check_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) throw PlanError(std::string(what) + " must be a positive number, got " + fmt(v));
}

}  // namespace

double Plan::k_for(const std::string& asset) const {
    const auto it = k_overrides.find(asset);
    return it == k_overrides.end() ? k : it->second;
}

Plan build_plan(const RawOptions& raw, Mode mode) {
    Plan plan;

    if (mode == Mode::synth) {
        if (raw.data.empty()) {
            plan.datasets.push_back({"synthetic", "synthetic", true});
        } else {
            for (const auto& s : raw.data) plan.datasets.push_back(parse_dataset(s));
        }
        for (const auto& d : plan.datasets) {
            if (!d.synthetic) throw PlanError("synth only accepts synthetic datasets, got '" + d.source + "'");
        }
    } else {
        if (raw.data.empty()) throw PlanError("no datasets given (use --data ASSET=path or NAME=synthetic)");
        for (const auto& s : raw.data) plan.datasets.push_back(parse_dataset(s));
    }
    std::set<std::string> names;
    for (const auto& d : plan.datasets) {
        if (!names.insert(d.asset).second) throw PlanError("duplicate asset name '" + d.asset + "'");
    }

    std::vector<std::string> models = raw.models;
    if (models.empty()) {
        if (mode == Mode::synth) models = {"sabcp", "bcp"};
        else if (mode == Mode::sweep) models = {"sabcp"};
        else models = {"sabcp", "bcp", "aci", "agaci", "dtaci"};
    }
    for (const auto& name : models) {
        sabcp_method m{};
        if (sabcp_method_parse(lower(name).c_str(), &m) != SABCP_OK) {
            throw PlanError("unknown model '" + name + "' (expected sabcp, bcp, aci, agaci or dtaci)");
        }
        if (std::find(plan.methods.begin(), plan.methods.end(), m) != plan.methods.end()) {
            throw PlanError("model '" + name + "' listed twice");
        }
        plan.methods.push_back(m);
    }
    if (mode == Mode::sweep && (plan.methods.size() != 1 || plan.methods[0] != SABCP_METHOD_SABCP)) {
        throw PlanError("sweep-k only runs the sabcp model");
    }

    plan.alphas = raw.alphas;
    if (plan.alphas.empty()) plan.alphas = mode == Mode::synth ? std::vector<double>{0.1} : kDefaultAlphas;
    std::set<double> seen_alpha;
    for (double a : plan.alphas) {
        check_open_unit(a, "alpha");
        if (!seen_alpha.insert(a).second) throw PlanError("alpha " + fmt(a) + " listed twice");
    }

    if (mode == Mode::synth) plan.k = kSynthK;
    for (const auto& spec : raw.k) {
        const auto eq = spec.find('=');
        if (eq == std::string::npos) {
            plan.k = parse_real(spec, "--k");
            check_positive(plan.k, "k");
            continue;
        }
        const std::string asset = spec.substr(0, eq);
        if (!names.count(asset)) throw PlanError("--k '" + spec + "': no dataset named '" + asset + "'");
        const double v = parse_real(spec.substr(eq + 1), "--k " + asset);
        check_positive(v, "k");
        plan.k_overrides[asset] = v;
    }

    if (mode == Mode::sweep) {
        plan.k_grid = raw.k_grid.empty() ? kDefaultKGrid : raw.k_grid;
        for (double k : plan.k_grid) check_positive(k, "k-grid value");
        plan.r_grid = raw.r_grid;
        for (double r : plan.r_grid) check_positive(r, "r-grid value");
    } else if (!raw.k_grid.empty() || !raw.r_grid.empty()) {
        throw PlanError("--k-grid and --r-grid only apply to sweep-k");
    }

    if (raw.beta) plan.beta = *raw.beta;
    check_open_unit(plan.beta, "beta");
    plan.r_max = raw.r_max;
    if (!plan.r_max && mode == Mode::synth) plan.r_max = kSynthRMax;
    if (plan.r_max) check_positive(*plan.r_max, "r-max");

    if (raw.score_mode) {
        const std::string m = lower(*raw.score_mode);
        if (m == "scaled") plan.score_mode = SABCP_SCORE_SCALED;
        else if (m == "absolute") plan.score_mode = SABCP_SCORE_ABSOLUTE;
        else throw PlanError("unknown score mode '" + *raw.score_mode + "' (expected scaled or absolute)");
    }
    if (raw.high_vol) {
        const std::string m = lower(*raw.high_vol);
        if (m == "hindsight") plan.high_vol = SABCP_HIGH_VOL_HINDSIGHT;
        else if (m == "expanding") plan.high_vol = SABCP_HIGH_VOL_EXPANDING;
        else throw PlanError("unknown high-vol rule '" + *raw.high_vol + "' (expected hindsight or expanding)");
    }
    if (raw.state_dim) plan.state_dim = *raw.state_dim;
    if (plan.state_dim == 0) throw PlanError("state-dim must be at least 1");
    if (raw.history_cap) {
        if (*raw.history_cap == 0) throw PlanError("history-cap must be at least 1");
        plan.history_cap = *raw.history_cap;
    }
    if (raw.seed) plan.seed = *raw.seed;
    if (raw.out) plan.out = *raw.out;
    if (plan.out.empty()) throw PlanError("output directory is empty");
    if (raw.jobs) plan.jobs = *raw.jobs;
    if (plan.jobs == 0) plan.jobs = std::max(1u, std::thread::hardware_concurrency());
    if (raw.warmup) plan.warmup = *raw.warmup;
    if (plan.warmup < 30) throw PlanError("warmup must be at least 30 returns");
    if (raw.min_rows) plan.min_rows = *raw.min_rows;
    if (plan.min_rows < 2) throw PlanError("min-rows must be at least 2");
    if (raw.synth_steps) plan.synth_steps = *raw.synth_steps;
    if (!raw.shock_starts.empty()) plan.shock_starts = raw.shock_starts;
    if (raw.shock_len) plan.shock_len = *raw.shock_len;
    std::vector<std::size_t> starts = plan.shock_starts;
    std::sort(starts.begin(), starts.end());
    for (std::size_t i = 0; i < starts.size(); ++i) {
        if (starts[i] + plan.shock_len > plan.synth_steps) throw PlanError("shock window runs past the synthetic stream");
        if (i > 0 && starts[i - 1] + plan.shock_len > starts[i]) throw PlanError("synthetic shock windows overlap");
    }
    return plan;
}

std::string fmt(double v) {
    if (std::isnan(v)) return "NA";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string fmt_alpha(double alpha) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", alpha);
    return buf;
}

std::string cell_id(const std::string& asset, sabcp_method m, double alpha) {
    return asset + "__" + sabcp_method_name(m) + "__a" + fmt_alpha(alpha);
}

}  // namespace sabcp_cli
