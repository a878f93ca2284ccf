#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "cli.hpp"
#include "fixtures.hpp"

using namespace sabcp_cli;
namespace fs = std::filesystem;
using sabcp_test::Clustering;

namespace {

// Small price files so whole plans finish quickly.
std::vector<std::string> make_assets(const fs::path& dir, int n_assets, std::size_t rows = 420) {
    const Clustering kinds[] = {Clustering::garch_t, Clustering::switching, Clustering::leverage};
    std::vector<std::string> specs;
    for (int i = 0; i < n_assets; ++i) {
        const std::string name = "A" + std::to_string(i);
        const auto s = sabcp_test::clustered_series(name, kinds[i % 3], 100 + i, rows);
        specs.push_back(name + "=" + sabcp_test::write_price_csv(dir, s).string());
    }
    return specs;
}

RawOptions base_options(const std::vector<std::string>& data, const fs::path& out) {
    RawOptions raw;
    raw.data = data;
    raw.out = out.string();
    return raw;
}

std::vector<std::vector<std::string>> read_rows(const fs::path& path) {
    std::ifstream in(path);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> f;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) f.push_back(cell);
        rows.push_back(f);
    }
    return rows;
}

std::size_t column(const std::vector<std::string>& header, const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    FAIL("missing column " << name);
    return 0;
}

}  // namespace

TEST_SUITE("examples") {

TEST_CASE("two runs of the same plan give byte-identical outputs") {
    const auto dir = sabcp_test::temp_dir("cli_det");
    const auto data = make_assets(dir, 2);
    auto raw = base_options(data, dir / "first");
    raw.alphas = {0.1};
    CHECK(run_plan(build_plan(raw, Mode::run)) == exit_ok);
    raw.out = (dir / "second").string();
    CHECK(run_plan(build_plan(raw, Mode::run)) == exit_ok);
    CHECK(sabcp_test::read_tree(dir / "first") == sabcp_test::read_tree(dir / "second"));
    fs::remove_all(dir);
}

TEST_CASE("plan with K=1e12 gives equal Winkler for sabcp and bcp") {
    const auto dir = sabcp_test::temp_dir("cli_deg");
    auto raw = base_options(make_assets(dir, 2), dir / "out");
    raw.models = {"sabcp", "bcp"};
    raw.alphas = {0.1, 0.3};
    raw.k = {"1e12"};
    REQUIRE(run_plan(build_plan(raw, Mode::run)) == exit_ok);
    const auto rows = read_rows(dir / "out" / "summary.csv");
    const auto wk = column(rows[0], "winkler");
    REQUIRE(rows.size() == 1 + 2 * 2 * 2);
    for (std::size_t i = 1; i < rows.size(); i += 2) {
        CHECK(rows[i][column(rows[0], "model")] == "sabcp");
        CHECK(std::abs(std::stod(rows[i][wk]) - std::stod(rows[i + 1][wk])) <= 1e-6);
    }
    fs::remove_all(dir);
}

TEST_CASE("synthetic plan logs the pi_s trajectory") {
    const auto dir = sabcp_test::temp_dir("cli_synth");
    RawOptions raw;
    raw.out = dir.string();
    REQUIRE(synth_plan(build_plan(raw, Mode::synth)) == exit_ok);
    const auto rows = read_rows(dir / "cells" / "synthetic__sabcp__a0.1.steps.csv");
    REQUIRE(rows.size() == 901);
    const auto pi = column(rows[0], "pi_s");
    double lo = 1.0, hi = 0.0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double v = std::stod(rows[i][pi]);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    CHECK(lo < 0.1);
    CHECK(hi > 0.5);
    CHECK(fs::exists(dir / "synthetic.stream.csv"));
    fs::remove_all(dir);
}

TEST_CASE("sweep uses the default K grid") {
    RawOptions raw;
    raw.data = {"X=synthetic"};
    const Plan plan = build_plan(raw, Mode::sweep);
    CHECK(plan.k_grid == std::vector<double>{0.01, 0.1, 1.0, 10.0, 100.0, 1000.0});
}

TEST_CASE("single-point sweep matches run") {
    const auto dir = sabcp_test::temp_dir("cli_one");
    const auto data = make_assets(dir, 1);
    auto raw = base_options(data, dir / "run");
    raw.models = {"sabcp"};
    raw.alphas = {0.2};
    raw.k = {"3"};
    REQUIRE(run_plan(build_plan(raw, Mode::run)) == exit_ok);
    auto sweep = base_options(data, dir / "sweep");
    sweep.alphas = {0.2};
    sweep.k_grid = {3.0};
    REQUIRE(sweep_plan(build_plan(sweep, Mode::sweep)) == exit_ok);
    const auto a = read_rows(dir / "run" / "summary.csv");
    const auto b = read_rows(dir / "sweep" / "sweep.csv");
    REQUIRE(a.size() == 2);
    REQUIRE(b.size() == 2);
    for (const char* name : {"marginal", "high_vol", "width", "winkler", "r_max"}) {
        CHECK(a[1][column(a[0], name)] == b[1][column(b[0], name)]);
    }
    fs::remove_all(dir);
}

TEST_CASE("report on an empty directory lists zero cells") {
    const auto dir = sabcp_test::temp_dir("cli_empty");
    const auto res = collect_report(dir);
    CHECK(res.rows.empty());
    REQUIRE(res.problems.size() == 1);
    CHECK(res.problems[0].find("0 cells") != std::string::npos);
    CHECK(report_dir(dir) != exit_ok);
    fs::remove_all(dir);
}

TEST_CASE("report of one cell has one row") {
    const auto dir = sabcp_test::temp_dir("cli_cell");
    auto raw = base_options(make_assets(dir, 1), dir / "out");
    raw.models = {"bcp"};
    raw.alphas = {0.1};
    REQUIRE(run_plan(build_plan(raw, Mode::run)) == exit_ok);
    CHECK(collect_report(dir / "out").rows.size() == 1);
    REQUIRE(report_dir(dir / "out") == exit_ok);
    CHECK(read_rows(dir / "out" / "report.csv").size() == 2);
    fs::remove_all(dir);
}

TEST_CASE("report of a three-asset, four-model, three-alpha plan has 36 rows") {
    const auto dir = sabcp_test::temp_dir("cli_full");
    auto raw = base_options(make_assets(dir, 3), dir / "out");
    raw.models = {"sabcp", "bcp", "agaci", "dtaci"};
    REQUIRE(run_plan(build_plan(raw, Mode::run)) == exit_ok);
    const auto res = collect_report(dir / "out");
    CHECK(res.problems.empty());
    CHECK(res.rows.size() == 36);
    REQUIRE(report_dir(dir / "out") == exit_ok);
    const auto csv = read_rows(dir / "out" / "report.csv");
    CHECK(csv.size() == 37);
    CHECK(csv[0] == std::vector<std::string>{"asset", "target", "model", "marginal", "high_vol", "width", "winkler"});
    fs::remove_all(dir);
}

}
