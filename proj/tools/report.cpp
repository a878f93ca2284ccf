#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "cli.hpp"

namespace fs = std::filesystem;

namespace sabcp_cli {

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream is(line);
    while (std::getline(is, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot read " + path.string());
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(f, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        rows.push_back(split(line));
    }
    return rows;
}

double number(const std::string& s) {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
}

std::vector<ReportRow> parse_summary(const fs::path& path) {
    const auto rows = read_csv(path);
    if (rows.empty()) throw std::runtime_error(path.filename().string() + " is empty");
    std::map<std::string, std::size_t> col;
    for (std::size_t i = 0; i < rows[0].size(); ++i) col[rows[0][i]] = i;
    for (const char* name : {"asset", "target", "model", "marginal", "high_vol", "width", "winkler"}) {
        if (!col.count(name)) throw std::runtime_error(path.filename().string() + " lacks column " + name);
    }
    if (rows.size() < 2) throw std::runtime_error(path.filename().string() + " has no data row");
    std::vector<ReportRow> out;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& r = rows[i];
        if (r.size() != rows[0].size()) throw std::runtime_error(path.filename().string() + " has a short row");
        try {
            ReportRow row;
            row.asset = r[col["asset"]];
            row.target = number(r[col["target"]]);
            row.model = r[col["model"]];
            row.marginal = number(r[col["marginal"]]);
            if (r[col["high_vol"]] != "NA") row.high_vol = number(r[col["high_vol"]]);
            row.width = number(r[col["width"]]);
            row.winkler = number(r[col["winkler"]]);
            out.push_back(std::move(row));
        } catch (const std::invalid_argument&) {
            throw std::runtime_error(path.filename().string() + " has a malformed number");
        }
    }
    return out;
}

}  // namespace

std::string render_table(const std::vector<ReportRow>& rows) {
    std::string out;
    char line[256];
    std::snprintf(line, sizeof line, "%-12s %-7s %-7s %-9s %-9s %-10s %-10s\n", "Asset", "Target", "Model",
                  "Marginal", "High-Vol", "Width", "Winkler");
    out += line;
    for (const auto& r : rows) {
        char hv[32] = "NA";
        if (r.high_vol) std::snprintf(hv, sizeof hv, "%.4f", *r.high_vol);
        std::snprintf(line, sizeof line, "%-12s %-7.2f %-7s %-9.4f %-9s %-10.4f %-10.4f\n", r.asset.c_str(),
                      r.target, r.model.c_str(), r.marginal, hv, r.width, r.winkler);
        out += line;
    }
    return out;
}

ReportResult collect_report(const fs::path& dir) {
    ReportResult res;
    if (!fs::is_directory(dir)) {
        res.problems.push_back(dir.string() + " is not a directory (0 cells found)");
        return res;
    }
    std::vector<fs::path> files;
    const fs::path status = dir / "status.csv";
    if (fs::exists(status)) {
        const auto rows = read_csv(status);
        for (std::size_t i = 1; i < rows.size(); ++i) {
            const auto& r = rows[i];
            if (r.size() < 2) {
                res.problems.push_back("status.csv line " + std::to_string(i + 1) + " is malformed");
                continue;
            }
            if (r[1] != "ok") {
                res.problems.push_back("cell " + r[0] + " failed: " + (r.size() > 2 ? r[2] : std::string()));
                continue;
            }
            const fs::path p = dir / "cells" / (r[0] + ".summary.csv");
            if (!fs::exists(p)) res.problems.push_back("cell " + r[0] + " has no summary file");
            else files.push_back(p);
        }
    } else if (fs::is_directory(dir / "cells")) {
        for (const auto& e : fs::directory_iterator(dir / "cells")) {
            const std::string name = e.path().filename().string();
            if (name.size() > 12 && name.ends_with(".summary.csv")) files.push_back(e.path());
        }
        std::sort(files.begin(), files.end());
    }
    for (const auto& f : files) {
        try {
            auto rows = parse_summary(f);
            res.rows.insert(res.rows.end(), rows.begin(), rows.end());
        } catch (const std::exception& e) {
            res.problems.push_back(e.what());
        }
    }
    if (res.rows.empty() && res.problems.empty()) {
        res.problems.push_back("no completed cells in " + dir.string() + " (0 cells found)");
    }
    return res;
}

int report_dir(const fs::path& dir) {
    const ReportResult res = collect_report(dir);
    for (const auto& p : res.problems) std::cerr << p << '\n';
    if (res.rows.empty()) return exit_partial;

    std::ostringstream csv;
    csv << "asset,target,model,marginal,high_vol,width,winkler\n";
    for (const auto& r : res.rows) {
        csv << r.asset << ',' << fmt(r.target) << ',' << r.model << ',' << fmt(r.marginal) << ','
            << (r.high_vol ? fmt(*r.high_vol) : "NA") << ',' << fmt(r.width) << ',' << fmt(r.winkler) << '\n';
    }
    const std::string table = render_table(res.rows);
    std::ofstream(dir / "report.csv", std::ios::binary | std::ios::trunc) << csv.str();
    std::ofstream(dir / "report.txt", std::ios::binary | std::ios::trunc) << table;
    std::cout << table;
    return res.problems.empty() ? exit_ok : exit_partial;
}

}  // namespace sabcp_cli
