#include <cmath>
#include <vector>

#include <doctest.h>

#include "fixtures.hpp"
#include "sabcp/spatial_kde.hpp"
#include "sabcp/temporal_cdf.hpp"

using namespace sabcp;
using sabcp_test::exact;

namespace {

double power_by_multiplication(double base, int n) {
    double v = 1.0;
    for (int i = 0; i < n; ++i) v *= base;
    return v;
}

}  // namespace

TEST_SUITE("examples") {

TEST_CASE("temporal weight of the newest score is one") {
    for (double beta : {0.01, 0.5, 0.9, 0.99}) {
        for (std::size_t t : {1u, 2u, 50u}) CHECK(temporal_weight(t - 1, t, beta) == 1.0);
    }
}

TEST_CASE("temporal weight one step back is beta") {
    CHECK(temporal_weight(0, 2, 0.5) == exact(0.5));
}

TEST_CASE("temporal weight ten steps back") {
    const double w = temporal_weight(0, 11, 0.99);
    CHECK(w == exact(power_by_multiplication(0.99, 10)));
    CHECK(w == doctest::Approx(0.904382).epsilon(1e-6));
}

TEST_CASE("temporal cdf of a single covered score") {
    for (double beta : {0.3, 0.99}) CHECK(temporal_cdf(std::vector<double>{1.0}, beta, 2.0) == 1.0);
}

TEST_CASE("temporal cdf of two scores with beta one half") {
    // weights 0.5 (older score 1) and 1 (newer score 3)
    CHECK(temporal_cdf(std::vector<double>{1.0, 3.0}, 0.5, 2.0) == exact(0.5 / 1.5));
    TemporalArchive a(0.5);
    a.push(1.0);
    a.push(3.0);
    CHECK(a.cdf(2.0) == exact(1.0 / 3.0));
}

TEST_CASE("temporal cdf below every score is zero") {
    CHECK(temporal_cdf(std::vector<double>{1.0, 3.0}, 0.5, 0.5) == 0.0);
}

TEST_CASE("moments after a first sample") {
    OnlineMoments m(1);
    m.push(std::vector<double>{5.0});
    CHECK(m.mean()[0] == 5.0);
    CHECK(m.m2()[0] == 0.0);
}

TEST_CASE("moments of two samples") {
    OnlineMoments m(1);
    m.push(std::vector<double>{1.0});
    m.push(std::vector<double>{3.0});
    // two-pass: mean 2, sum of squared deviations 1 + 1
    CHECK(m.mean()[0] == exact(2.0));
    CHECK(m.m2()[0] == exact(2.0));
    CHECK(m.stddev(0) == exact(std::sqrt(2.0)));
}

TEST_CASE("moments of a constant stream") {
    OnlineMoments m(1);
    for (int i = 0; i < 3; ++i) m.push(std::vector<double>{7.25});
    CHECK(m.stddev(0) == 0.0);
}

TEST_CASE("bandwidth with one sample and unit spread") {
    CHECK(scott_bandwidth(1.0, 1, 1, 1e-8) == exact(1.0));
}

TEST_CASE("bandwidth with 32 samples and spread 2") {
    CHECK(scott_bandwidth(2.0, 32, 1, 1e-8) == exact(1.0));
    // same through the online moments: 16 copies each of +a and -a give sd 2
    const double a = std::sqrt(4.0 * 31.0 / 32.0);
    OnlineMoments m(1);
    for (int i = 0; i < 16; ++i) {
        m.push(std::vector<double>{a});
        m.push(std::vector<double>{-a});
    }
    CHECK(bandwidth(m, 1e-8)[0] == exact(1.0));
}

TEST_CASE("bandwidth floor engages for constant features") {
    OnlineMoments m(1);
    for (int i = 0; i < 10; ++i) m.push(std::vector<double>{3.0});
    const double h = bandwidth(m, 1e-8)[0];
    CHECK(h == exact(1e-8 * std::pow(10.0, -0.2)));
    CHECK(h > 0.0);
}

TEST_CASE("kernel of identical states is one") {
    const std::vector<double> s{0.3, -1.2};
    const std::vector<double> h{0.5, 2.0};
    CHECK(kernel_weight(s, s, h) == 1.0);
}

TEST_CASE("kernel one bandwidth apart in one dimension") {
    CHECK(kernel_weight(std::vector<double>{0.0}, std::vector<double>{0.7}, std::vector<double>{0.7}) ==
          exact(std::exp(-0.5)));
    CHECK(std::exp(-0.5) == doctest::Approx(0.606531).epsilon(1e-6));
}

TEST_CASE("kernel one bandwidth apart in each of two dimensions") {
    const std::vector<double> h{0.4, 3.0};
    CHECK(kernel_weight(std::vector<double>{1.0, 1.0}, std::vector<double>{1.4, 4.0}, h) == exact(std::exp(-1.0)));
    CHECK(std::exp(-1.0) == doctest::Approx(0.367879).epsilon(1e-6));
}

TEST_CASE("evidence of an empty archive is zero") {
    SpatialArchive a(2);
    CHECK(a.evidence(std::vector<double>{0.0, 0.0}, std::vector<double>{1.0, 1.0}) == 0.0);
}

TEST_CASE("evidence of m exact copies is m") {
    SpatialArchive a(1);
    const std::vector<double> s{0.25};
    for (int i = 0; i < 7; ++i) a.push(s, 1.0 + i);
    CHECK(a.evidence(s, std::vector<double>{0.1}) == exact(7.0));
}

TEST_CASE("evidence of a match plus a state one bandwidth away") {
    SpatialArchive a(1);
    const std::vector<double> h{0.5};
    a.push(std::vector<double>{2.0}, 1.0);
    a.push(std::vector<double>{2.5}, 3.0);
    CHECK(a.evidence(std::vector<double>{2.0}, h) == exact(1.0 + std::exp(-0.5)));
    CHECK(1.0 + std::exp(-0.5) == doctest::Approx(1.606531).epsilon(1e-6));
}

TEST_CASE("spatial cdf with one covered entry") {
    SpatialArchive a(1);
    a.push(std::vector<double>{0.0}, 1.0);
    CHECK(a.cdf(std::vector<double>{0.3}, std::vector<double>{1.0}, 2.0) == exact(1.0));
}

TEST_CASE("spatial cdf with two equally weighted entries") {
    SpatialArchive a(1);
    a.push(std::vector<double>{-1.0}, 1.0);
    a.push(std::vector<double>{1.0}, 3.0);
    CHECK(a.cdf(std::vector<double>{0.0}, std::vector<double>{1.0}, 2.0) == exact(0.5));
}

TEST_CASE("spatial cdf with a match and a neighbour one bandwidth away") {
    SpatialArchive a(1);
    const std::vector<double> h{0.8};
    a.push(std::vector<double>{1.0}, 1.0);
    a.push(std::vector<double>{1.8}, 3.0);
    const double expected = 1.0 / (1.0 + std::exp(-0.5));
    CHECK(a.cdf(std::vector<double>{1.0}, h, 2.0) == exact(expected));
    CHECK(expected == doctest::Approx(0.622459).epsilon(1e-6));
}

}
