#include "sabcp/data.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

#include "sabcp/core.hpp"

namespace sabcp {

void validate_synthetic_spec(const SyntheticSpec& spec) {
    if (spec.total_steps == 0) throw Error(ErrorCode::invalid_argument, "synthetic stream needs steps");
    if (spec.shock_len == 0) throw Error(ErrorCode::invalid_argument, "shock length must be positive");
    std::vector<std::size_t> starts = spec.shock_starts;
    std::sort(starts.begin(), starts.end());
    for (std::size_t i = 0; i < starts.size(); ++i) {
        if (starts[i] + spec.shock_len > spec.total_steps) {
            throw Error(ErrorCode::invalid_argument, "shock window runs past the end of the stream");
        }
        if (i > 0 && starts[i - 1] + spec.shock_len > starts[i]) {
            throw Error(ErrorCode::invalid_argument, "shock windows overlap");
        }
    }
    for (const auto* p : {&spec.normal, &spec.shock}) {
        if (!(p->x_sd >= 0.0) || !(p->y_sd >= 0.0)) {
            throw Error(ErrorCode::invalid_argument, "regime standard deviations must be non-negative");
        }
    }
}

SyntheticStream synth_stream(const SyntheticSpec& spec) {
    validate_synthetic_spec(spec);
    SyntheticStream out;
    out.x.resize(spec.total_steps);
    out.y.resize(spec.total_steps);
    out.shock.assign(spec.total_steps, false);
    for (std::size_t s : spec.shock_starts) {
        for (std::size_t t = s; t < s + spec.shock_len; ++t) out.shock[t] = true;
    }
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> z(0.0, 1.0);
    for (std::size_t t = 0; t < spec.total_steps; ++t) {
        const RegimeParams& p = out.shock[t] ? spec.shock : spec.normal;
        out.x[t] = p.x_mean + p.x_sd * z(rng);
        out.y[t] = p.y_mean + p.y_sd * z(rng);
    }
    return out;
}

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && (std::isspace(static_cast<unsigned char>(s[b])) || s[b] == '"')) ++b;
    while (e > b && (std::isspace(static_cast<unsigned char>(s[e - 1])) || s[e - 1] == '"')) --e;
    return std::string(s.substr(b, e - b));
}

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    fields.push_back(trim(cur));
    return fields;
}

bool iso_date(const std::string& s) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
    for (std::size_t i : {0, 1, 2, 3, 5, 6, 8, 9}) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    }
    const int month = std::stoi(s.substr(5, 2));
    const int day = std::stoi(s.substr(8, 2));
    return month >= 1 && month <= 12 && day >= 1 && day <= 31;
}

bool missing_value(const std::string& s) {
    const std::string l = lower(s);
    return l.empty() || l == "nan" || l == "null" || l == "na";
}

std::string at_line(std::size_t line) { return " (line " + std::to_string(line) + ")"; }

}  // namespace

ReturnSeries series_from_closes(std::string asset, std::vector<std::string> dates,
                                std::vector<double> closes) {
    if (dates.size() != closes.size()) throw Error(ErrorCode::invalid_argument, "dates and closes differ in length");
    ReturnSeries s;
    s.asset = std::move(asset);
    s.dates = std::move(dates);
    s.closes = std::move(closes);
    if (s.closes.size() >= 2) {
        s.returns.resize(s.closes.size() - 1);
        for (std::size_t i = 1; i < s.closes.size(); ++i) {
            s.returns[i - 1] = 100.0 * std::log(s.closes[i] / s.closes[i - 1]);
        }
    }
    return s;
}

ReturnSeries parse_prices(std::istream& in, std::string asset, std::size_t min_rows) {
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorCode::parse, "price file is empty");
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    if (!line.empty() && line.back() == '\r') line.pop_back();

    const auto header = split_csv(line);
    std::optional<std::size_t> date_col;
    std::optional<std::size_t> close_col;
    for (std::size_t i = 0; i < header.size(); ++i) {
        const std::string name = lower(header[i]);
        if (name == "date" && !date_col) date_col = i;
        if (name == "close" && !close_col) close_col = i;
    }
    if (!date_col || !close_col) throw Error(ErrorCode::parse, "price file needs `date` and `close` columns");

    struct Row {
        std::string date;
        double close;
    };
    std::vector<Row> rows;
    std::size_t dropped = 0;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        const auto fields = split_csv(line);
        const std::size_t need = std::max(*date_col, *close_col) + 1;
        if (fields.size() < need) throw Error(ErrorCode::parse, "short row" + at_line(line_no));
        const std::string& date = fields[*date_col];
        if (!iso_date(date)) throw Error(ErrorCode::parse, "bad date `" + date + "`" + at_line(line_no));
        const std::string& text = fields[*close_col];
        if (missing_value(text)) {
            ++dropped;
            continue;
        }
        char* end = nullptr;
        const double close = std::strtod(text.c_str(), &end);
        if (end != text.c_str() + text.size() || std::isnan(close)) {
            throw Error(ErrorCode::parse, "bad close `" + text + "`" + at_line(line_no));
        }
        if (!(close > 0.0) || !std::isfinite(close)) {
            ++dropped;
            continue;
        }
        rows.push_back({date, close});
    }

    std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.date < b.date; });
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].date == rows[i - 1].date) throw Error(ErrorCode::parse, "duplicate date " + rows[i].date);
    }
    if (rows.size() < min_rows) {
        throw Error(ErrorCode::insufficient_data, "only " + std::to_string(rows.size()) +
                                                      " usable price rows, need " + std::to_string(min_rows));
    }

    std::vector<std::string> dates;
    std::vector<double> closes;
    dates.reserve(rows.size());
    closes.reserve(rows.size());
    for (auto& r : rows) {
        dates.push_back(std::move(r.date));
        closes.push_back(r.close);
    }
    ReturnSeries s = series_from_closes(std::move(asset), std::move(dates), std::move(closes));
    s.dropped_rows = dropped;
    return s;
}

ReturnSeries load_prices(const std::filesystem::path& path, std::string asset, std::size_t min_rows) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::io, "cannot open " + path.string());
    if (asset.empty()) asset = path.stem().string();
    return parse_prices(in, std::move(asset), min_rows);
}

void write_prices(std::ostream& out, const ReturnSeries& series) {
    out << "date,close\n";
    char buf[64];
    for (std::size_t i = 0; i < series.closes.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", series.closes[i]);
        out << series.dates[i] << ',' << buf << '\n';
    }
}

StateBuilder::StateBuilder(std::size_t dim) : dim_(dim), moments_(1) {
    if (dim == 0) throw Error(ErrorCode::invalid_argument, "state dimension must be positive");
}

void StateBuilder::push(double r) {
    const double a = std::abs(r);
    moments_.push(std::span<const double>(&a, 1));
    recent_.push_back(a);
    if (recent_.size() > dim_) recent_.erase(recent_.begin());
}

SpatialState StateBuilder::build() const {
    if (recent_.size() < dim_) return {std::vector<double>(dim_, 0.0), true};
    std::vector<double> newest_first(recent_.rbegin(), recent_.rend());
    return build_state(newest_first, moments_);
}

SpatialState build_state(std::span<const double> window_newest_first, const OnlineMoments& moments) {
    if (moments.dim() != 1) throw Error(ErrorCode::invalid_argument, "state moments track one |r| stream");
    SpatialState s;
    s.cold = false;
    s.values.resize(window_newest_first.size());
    const double mean = moments.mean()[0];
    const double sd = std::max(moments.stddev(0), 1e-8);
    for (std::size_t j = 0; j < window_newest_first.size(); ++j) {
        s.values[j] = (std::abs(window_newest_first[j]) - mean) / sd;
    }
    return s;
}

}  // namespace sabcp
