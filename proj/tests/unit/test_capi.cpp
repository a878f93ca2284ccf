#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include <doctest.h>

#include "fixtures.hpp"
#include "sabcp/sabcp.h"

TEST_SUITE("capi") {

TEST_CASE("version and status strings") {
    CHECK(std::strlen(sabcp_version()) > 0);
    CHECK(std::string(sabcp_status_string(SABCP_OK)) != std::string(sabcp_status_string(SABCP_E_IO)));
}

TEST_CASE("method names round-trip") {
    for (sabcp_method m : {SABCP_METHOD_SABCP, SABCP_METHOD_BCP, SABCP_METHOD_ACI, SABCP_METHOD_AGACI,
                           SABCP_METHOD_DTACI}) {
        sabcp_method back{};
        REQUIRE(sabcp_method_parse(sabcp_method_name(m), &back) == SABCP_OK);
        CHECK(back == m);
    }
    sabcp_method out{};
    CHECK(sabcp_method_parse("enbpi", &out) == SABCP_E_INVALID_ARGUMENT);
}

TEST_CASE("config validation reports the bad field") {
    sabcp_config c;
    sabcp_config_init(&c);
    CHECK(sabcp_config_validate(&c) == SABCP_OK);
    c.beta = 1.0;
    CHECK(sabcp_config_validate(&c) == SABCP_E_INVALID_CONFIG);
    CHECK(std::string(sabcp_last_error()).find("beta") != std::string::npos);
    CHECK(sabcp_config_validate(nullptr) == SABCP_E_INVALID_ARGUMENT);
}

TEST_CASE("predictor protocol through the C interface") {
    sabcp_config c;
    sabcp_config_init(&c);
    c.score_mode = SABCP_SCORE_ABSOLUTE;
    sabcp_predictor* p = nullptr;
    REQUIRE(sabcp_predictor_create(SABCP_METHOD_SABCP, &c, nullptr, &p) == SABCP_OK);
    const double x = 0.5;
    sabcp_step_input in{0, 0.0, 1.0, &x, 1, 1};
    sabcp_interval out{};
    REQUIRE(sabcp_predictor_step(p, &in, 0.3, &out) == SABCP_OK);
    CHECK(out.q_hat == doctest::Approx(9.0).epsilon(1e-8));
    CHECK(out.lower == doctest::Approx(-9.0).epsilon(1e-8));

    in.t = 1;
    CHECK(sabcp_predictor_step(p, &in, NAN, &out) == SABCP_E_INVALID_ARGUMENT);
    CHECK(std::strlen(sabcp_last_error()) > 0);
    in.t = 3;
    CHECK(sabcp_predictor_step(p, &in, 0.1, &out) == SABCP_E_OUT_OF_ORDER);
    in.t = 1;
    REQUIRE(sabcp_predictor_predict(p, &in, &out) == SABCP_OK);
    CHECK(sabcp_predictor_predict(p, &in, &out) == SABCP_E_OUT_OF_ORDER);
    CHECK(sabcp_predictor_update(p, 0.2) == SABCP_OK);
    sabcp_predictor_destroy(p);

    c.alpha = 2.0;
    p = nullptr;
    CHECK(sabcp_predictor_create(SABCP_METHOD_BCP, &c, nullptr, &p) == SABCP_E_INVALID_CONFIG);
    CHECK(p == nullptr);
}

TEST_CASE("garch through the C interface") {
    std::vector<double> warm;
    for (int i = 0; i < 40; ++i) warm.push_back(i % 2 ? 1.0 : -1.0);
    sabcp_garch* g = nullptr;
    REQUIRE(sabcp_garch_create(warm.data(), warm.size(), 0.05, 0.9, &g) == SABCP_OK);
    const double s2 = sabcp_garch_sigma2(g);
    double center = 1.0, scale = 0.0;
    REQUIRE(sabcp_garch_step(g, 2.0, &center, &scale) == SABCP_OK);
    CHECK(center == 0.0);
    CHECK(scale == doctest::Approx(std::sqrt(s2)));
    CHECK(sabcp_garch_sigma2(g) == doctest::Approx(sabcp_garch_omega(g) + 0.05 * 4.0 + 0.9 * s2));
    sabcp_garch_destroy(g);
    CHECK(sabcp_garch_create(warm.data(), 5, 0.05, 0.9, &g) == SABCP_E_INSUFFICIENT_DATA);
}

TEST_CASE("series and runs through the C interface") {
    const auto dir = sabcp_test::temp_dir("capi");
    const auto s = sabcp_test::clustered_series("cx", sabcp_test::Clustering::garch_t, 2, 500);
    const auto path = sabcp_test::write_price_csv(dir, s);
    sabcp_series* series = nullptr;
    REQUIRE(sabcp_series_load(path.string().c_str(), nullptr, 0, &series) == SABCP_OK);
    CHECK(std::string(sabcp_series_asset(series)) == "cx");
    CHECK(sabcp_series_length(series) == 499);
    CHECK(std::string(sabcp_series_return_date(series, 0)) == s.return_date(0));
    CHECK(sabcp_series_dropped_rows(series) == 0);

    sabcp_config c;
    sabcp_config_init(&c);
    c.state_dim = 5;
    sabcp_run_options o;
    sabcp_run_options_init(&o);
    sabcp_run* run = nullptr;
    REQUIRE(sabcp_run_returns(series, SABCP_METHOD_SABCP, &c, &o, &run) == SABCP_OK);
    CHECK(sabcp_run_length(run) == 249);
    sabcp_step_record r{};
    REQUIRE(sabcp_run_record(run, 0, &r) == SABCP_OK);
    CHECK(r.t == 250);
    CHECK(sabcp_run_record(run, 249, &r) == SABCP_E_INVALID_ARGUMENT);
    sabcp_summary sum{};
    sabcp_run_summary(run, &sum);
    CHECK(sum.n_steps == 249);
    CHECK(sum.has_high_vol == 1);
    CHECK(sum.r_max > 0.0);
    sabcp_run_destroy(run);

    CHECK(sabcp_series_save(series, (dir / "copy.csv").string().c_str()) == SABCP_OK);
    sabcp_series_destroy(series);
    series = nullptr;
    CHECK(sabcp_series_load((dir / "missing.csv").string().c_str(), "m", 0, &series) == SABCP_E_IO);
    CHECK(series == nullptr);
    std::filesystem::remove_all(dir);
}

TEST_CASE("synthetic stream through the C interface") {
    sabcp_synth_spec spec;
    sabcp_synth_spec_init(&spec);
    sabcp_synth* s = nullptr;
    REQUIRE(sabcp_synth_generate(&spec, &s) == SABCP_OK);
    CHECK(sabcp_synth_length(s) == 900);
    CHECK(sabcp_synth_is_shock(s, 200) == 1);
    CHECK(sabcp_synth_is_shock(s, 199) == 0);
    sabcp_config c;
    sabcp_config_init(&c);
    c.k = 10.0;
    sabcp_run* run = nullptr;
    REQUIRE(sabcp_run_synthetic(s, SABCP_METHOD_SABCP, &c, nullptr, &run) == SABCP_OK);
    CHECK(sabcp_run_length(run) == 900);
    sabcp_run_destroy(run);
    sabcp_synth_destroy(s);
}

TEST_CASE("math helpers through the C interface") {
    double v = 0.0;
    REQUIRE(sabcp_winkler(0.0, 2.0, 3.0, 0.1, &v) == SABCP_OK);
    CHECK(v == doctest::Approx(22.0));
    REQUIRE(sabcp_mixture_mse(1, 1, 1, 1, &v) == SABCP_OK);
    CHECK(v == doctest::Approx(0.5));
    REQUIRE(sabcp_optimal_k(2.0, 0.5, &v) == SABCP_OK);
    CHECK(v == doctest::Approx(4.0));
    CHECK(sabcp_optimal_k(-1.0, 0.5, &v) == SABCP_E_INVALID_ARGUMENT);
    CHECK(sabcp_winkler(2.0, 0.0, 1.0, 0.1, &v) == SABCP_E_INVALID_ARGUMENT);
}

}
