#include <cmath>
#include <limits>

#include <doctest.h>

#include "fixtures.hpp"
#include "sabcp/core.hpp"
#include "sabcp/gate_mixture.hpp"

using namespace sabcp;
using sabcp_test::absolute_config;
using sabcp_test::feed;

namespace {

bool has_issue(const SabcpConfig& c, const std::string& field) {
    for (const auto& i : config_issues(c)) {
        if (i.field == field) return true;
    }
    return false;
}

}  // namespace

TEST_SUITE("examples") {

TEST_CASE("config with the synthetic experiment settings is accepted") {
    SabcpConfig c;
    c.alpha = 0.1;
    c.beta = 0.99;
    c.k = 10;
    c.r_max = 10;
    c.state_dim = 1;
    CHECK(config_issues(c).empty());
    CHECK_NOTHROW(validate_config(c));
}

TEST_CASE("config rejects alpha of zero") {
    SabcpConfig c;
    c.alpha = 0.0;
    CHECK(has_issue(c, "alpha"));
    CHECK_THROWS_AS(validate_config(c), Error);
}

TEST_CASE("config rejects beta of one") {
    SabcpConfig c;
    c.beta = 1.0;
    CHECK(has_issue(c, "beta"));
    CHECK_THROWS_AS(validate_config(c), Error);
}

TEST_CASE("first step with empty history is a finite prior interval") {
    SabcpEngine e(absolute_config());
    const double x = 0.3;
    const auto f = e.forecast({0, 0.0, 1.0, std::span<const double>(&x, 1), true});
    CHECK(std::isfinite(f.lower));
    CHECK(std::isfinite(f.upper));
    CHECK(f.lambda_t == 1.0);
    CHECK(f.pi_s == 0.0);
    CHECK(f.q_hat == sabcp_test::exact(9.0));
}

TEST_CASE("NaN target is rejected and leaves the predictor unchanged") {
    SabcpEngine a(absolute_config());
    SabcpEngine b(absolute_config());
    for (std::uint64_t t = 0; t < 20; ++t) {
        feed(a, t, 0.1 * t, 0.5 + 0.01 * t);
        feed(b, t, 0.1 * t, 0.5 + 0.01 * t);
    }
    const double x = 1.0;
    const StepInput in{20, 0.0, 1.0, std::span<const double>(&x, 1), true};
    try {
        stream_step(a, in, std::numeric_limits<double>::quiet_NaN());
        FAIL("NaN accepted");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::invalid_argument);
    }
    CHECK(a.steps_observed() == 20);
    CHECK_FALSE(a.awaiting_observation());
    const auto fa = stream_step(a, in, 0.7);
    const auto fb = stream_step(b, in, 0.7);
    CHECK(fa.q_hat == fb.q_hat);
    CHECK(fa.lower == fb.lower);
}

TEST_CASE("identical streams give bit-identical forecasts") {
    const auto s = sabcp_test::mixed_stream(3);
    SabcpEngine a(absolute_config());
    SabcpEngine b(absolute_config());
    bool same = true;
    for (std::size_t t = 0; t < 600; ++t) {
        const auto fa = feed(a, t, s.x[t], s.y[t]);
        const auto fb = feed(b, t, s.x[t], s.y[t]);
        same = same && fa.lower == fb.lower && fa.upper == fb.upper && fa.pi_s == fb.pi_s;
    }
    CHECK(same);
}

}
