#include <doctest.h>

#include <cmath>
#include <numeric>

#include "poems/config.hpp"
#include "poems/errors.hpp"
#include "poems/link_sim.hpp"
#include "poems/philox.hpp"
#include "support/gen.hpp"

using namespace poems;

namespace {

const ReceiverModel& model() {
    static const ReceiverModel m = calibrated_model(RunConfig{});
    return m;
}

double half_width(const Interval& i) { return 0.5 * (i.high - i.low); }

}  // namespace

TEST_CASE("Philox4x32-10 known-answer vectors") {
    using C = Philox4x32::Counter;
    CHECK(Philox4x32(Philox4x32::Key{0, 0})(C{0, 0, 0, 0}) == C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(Philox4x32(Philox4x32::Key{0xffffffff, 0xffffffff})(C{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}) ==
          C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(Philox4x32(Philox4x32::Key{0xa4093822, 0x299f31d0})(C{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}) ==
          C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("Philox normals have unit variance") {
    const Philox4x32 g(7);
    double sum = 0.0, sum2 = 0.0;
    const std::uint32_t n = 200000;
    for (std::uint32_t i = 0; i < n; ++i) {
        const auto u = g.uniforms({i, 0, 0, 0});
        CHECK((u[0] > 0.0 && u[0] < 1.0 && u[1] > 0.0 && u[1] < 1.0));
        for (double z : g.normals({i, 1, 0, 0})) {
            sum += z;
            sum2 += z * z;
        }
    }
    const double mean = sum / (2.0 * n);
    CHECK(std::abs(mean) < 0.01);
    CHECK(sum2 / (2.0 * n) - mean * mean == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("Wilson interval") {
    const Interval i = wilson_interval(10, 100);
    CHECK(i.low == doctest::Approx(0.05523).epsilon(1e-3));
    CHECK(i.high == doctest::Approx(0.17437).epsilon(1e-3));
    const Interval z = wilson_interval(0, 1000);
    CHECK(z.low == 0.0);
    CHECK(z.high > 0.0);
    test::Gen gen(51);
    for (int k = 0; k < 200; ++k) {
        const std::size_t n = static_cast<std::size_t>(gen.integer(1, 100000));
        const std::size_t s = static_cast<std::size_t>(gen.integer(0, static_cast<int>(n)));
        const Interval w = wilson_interval(s, n);
        const double p = static_cast<double>(s) / static_cast<double>(n);
        CHECK(w.low <= p + 1e-15);
        CHECK(w.high >= p - 1e-15);
        CHECK(w.low >= 0.0);
        CHECK(w.high <= 1.0);
    }
}

TEST_CASE("OOK levels carry the configured mean power") {
    LinkConfig cfg;
    cfg.signal_power_dbm = -150.0;
    const std::vector<std::uint8_t> bits{0, 1, 1, 0};
    const auto s = ook_modulate(bits, cfg, 75.0);
    REQUIRE(s.size() == 4);
    CHECK(s[0] == 0.0);
    CHECK(s[1] == doctest::Approx(std::sqrt(2.0 * 1e-18 * 75.0)));
    const double mean_power = (s[1] * s[1] + s[2] * s[2]) / 4.0 / 75.0;
    CHECK(mean_power == doctest::Approx(1e-18));
    CHECK(ook_modulate({0, 0, 0}, cfg, 75.0) == std::vector<double>{0.0, 0.0, 0.0});
}

TEST_CASE("injected channel noise carries the configured power") {
    LinkConfig cfg;
    cfg.channel_noise_dbm = -165.0;
    const std::size_t n = 200000;
    const auto x = channel_noise_samples(model(), cfg, n);
    REQUIRE(x.size() == n);
    const double var = std::inner_product(x.begin(), x.end(), x.begin(), 0.0) / static_cast<double>(n);
    const double fs = static_cast<double>(cfg.samples_per_symbol) * cfg.bitrate_bps;
    const double in_band = var * (cfg.bandwidth_hz / (fs / 2.0)) / model().circuit.R_i;
    CHECK(std::abs(10.0 * std::log10(in_band / dbm_to_watts(-165.0))) < 0.1);
}

TEST_CASE("analytic OOK BER limits") {
    CHECK(analytic_ook_ber(0.0) == doctest::Approx(0.5));
    CHECK(analytic_ook_ber(1e4) < 1e-100);
    CHECK(analytic_ook_ber(16.0) == doctest::Approx(0.5 * std::erfc(2.0 / std::sqrt(2.0))));
}

TEST_CASE("chain SNR agrees with the closed form") {
    LinkConfig cfg;
    test::Gen gen(52);
    for (int i = 0; i < 50; ++i) {
        cfg.signal_power_dbm = gen.uniform(-170.0, -130.0);
        cfg.channel_noise_dbm = gen.uniform(-185.0, -145.0);
        cfg.with_lna = gen.coin();
        CHECK(detection_snr(build_link_chain(model(), cfg)) ==
              doctest::Approx(detection_snr(model(), cfg)).epsilon(1e-9));
    }
}

TEST_CASE("channel noise for a target SNR round-trips") {
    LinkConfig cfg;
    for (double snr : {1.0, 4.0, 9.0, 16.0}) {
        cfg.channel_noise_dbm = channel_noise_for_snr(model(), cfg, snr);
        CHECK(detection_snr(model(), cfg) == doctest::Approx(snr).epsilon(1e-9));
    }
    CHECK_THROWS_AS(channel_noise_for_snr(model(), cfg, 1e6), NumericError);
}

TEST_CASE("Monte Carlo BER agrees with the analytic oracle") {
    for (double snr : {4.0, 9.0, 16.0}) {
        CAPTURE(snr);
        LinkConfig cfg;
        cfg.n_bits = 100000;
        cfg.seed = 2024;
        cfg.channel_noise_dbm = channel_noise_for_snr(model(), cfg, snr);
        const BerResult r = run_link(model(), cfg);
        CHECK(r.n_bits == cfg.n_bits);
        CHECK(std::abs(r.ber - analytic_ook_ber(snr)) <= 3.0 * half_width(r.wilson_ci95));
    }
}

TEST_CASE("link simulation is deterministic across runs and threads") {
    LinkConfig cfg;
    cfg.n_bits = 30000;
    cfg.seed = 99;
    const BerResult a = run_link(model(), cfg);
    const BerResult b = run_link(model(), cfg);
    cfg.threads = 3;
    const BerResult c = run_link(model(), cfg);
    CHECK(a == b);
    CHECK(a == c);
    cfg.seed = 100;
    CHECK_FALSE(run_link(model(), cfg) == a);
}

TEST_CASE("BER stays in range and does not worsen with more signal") {
    test::Gen gen(53);
    for (int i = 0; i < 8; ++i) {
        CAPTURE(i);
        LinkConfig cfg;
        cfg.n_bits = 20000;
        cfg.seed = static_cast<std::uint64_t>(gen.integer(1, 1 << 30));
        cfg.signal_power_dbm = gen.uniform(-175.0, -150.0);
        cfg.channel_noise_dbm = gen.uniform(-175.0, -150.0);
        const BerResult base = run_link(model(), cfg);
        const double sigma = std::sqrt(0.25 / static_cast<double>(cfg.n_bits));
        CHECK(base.ber >= 0.0);
        CHECK(base.ber <= 0.5 + 3.0 * sigma);
        cfg.signal_power_dbm += 6.0;
        const BerResult up = run_link(model(), cfg);
        // One-sided 95% test on the difference of two binomial estimates.
        const double sd = std::sqrt(base.ber * (1.0 - base.ber) / base.n_bits + up.ber * (1.0 - up.ber) / up.n_bits);
        CHECK(up.ber - base.ber <= 1.645 * sd + 1e-12);
    }
}

TEST_CASE("SNR curve falls with channel noise and its Monte Carlo estimate is close") {
    LinkConfig cfg;
    cfg.n_bits = 50000;
    const auto pts = snr_curve(model(), cfg, {-180.0, -170.0, -160.0, -150.0});
    REQUIRE(pts.size() == 4);
    for (std::size_t i = 1; i < pts.size(); ++i) CHECK(pts[i].snr_db < pts[i - 1].snr_db);
    for (const auto& p : pts) {
        CHECK(p.mc_ci95_db.low <= p.mc_snr_db);
        CHECK(p.mc_ci95_db.high >= p.mc_snr_db);
        CHECK(std::abs(p.mc_snr_db - p.snr_db) < 0.3);
    }
}

TEST_CASE("capacity bounds are ordered, monotone and vanish without signal") {
    const CapacityBounds zero = capacity_bounds(0.0, 1e-18);
    CHECK(zero.lower == 0.0);
    CHECK(zero.upper == 0.0);
    test::Gen gen(54);
    for (int i = 0; i < 1000; ++i) {
        const double n = gen.log_uniform(1e-22, 1e-12);
        const double s = gen.log_uniform(1e-24, 1e-10);
        const CapacityBounds b = capacity_bounds(s, n);
        CHECK(b.lower <= b.upper);
        const CapacityBounds b2 = capacity_bounds(s * gen.uniform(1.0, 10.0), n);
        CHECK(b2.lower >= b.lower);
        CHECK(b2.upper >= b.upper);
    }
    // High-SNR slope of the half-log bounds.
    const CapacityBounds hi = capacity_bounds(1e6, 1.0), hi10 = capacity_bounds(1e7, 1.0);
    CHECK(hi10.upper - hi.upper == doctest::Approx(0.5 * std::log2(10.0)).epsilon(1e-5));
    CHECK(hi10.lower - hi.lower == doctest::Approx(0.5 * std::log2(10.0)).epsilon(1e-4));
}

TEST_CASE("link config validation") {
    LinkConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.bitrate_bps = 2e3;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg = LinkConfig{};
    cfg.n_bits = 10;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
}
