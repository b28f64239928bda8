#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "vcell/scenario.hpp"

using namespace vcell;

namespace {

SystemConfig desk_config() {
    SystemConfig cfg;
    cfg.num_bs = 10;
    cfg.num_users = 80;
    cfg.side_length = 1000.0;
    cfg.num_bands = 8;
    cfg.band_width = 20e3;
    cfg.noise_psd = -174.0;
    cfg.user_budget = 23.0;
    return cfg;
}

} // namespace

TEST_CASE("db/linear conversions") {
    CHECK(db_to_linear(0.0) == 1.0);
    CHECK(db_to_linear(23.0) == doctest::Approx(199.52623149688797).epsilon(1e-12));
    CHECK(db_to_linear(-174.0) == doctest::Approx(3.9810717055349695e-18).epsilon(1e-12));
    CHECK(linear_to_db(db_to_linear(7.25)) == doctest::Approx(7.25).epsilon(1e-12));
}

TEST_CASE("path loss formula and clamping") {
    const SystemConfig cfg = desk_config();
    CHECK(path_loss_db(1.0, cfg) == doctest::Approx(34.0).epsilon(1e-14));
    CHECK(path_loss_db(100.0, cfg) == doctest::Approx(104.0).epsilon(1e-14));
    CHECK(path_loss_db(1000.0, cfg) == doctest::Approx(139.0).epsilon(1e-14));
    // below the clamp everything looks like min_distance
    CHECK(path_loss_db(0.0, cfg) == path_loss_db(cfg.min_distance, cfg));
    CHECK(path_loss_db(0.5, cfg) == path_loss_db(1.0, cfg));
}

TEST_CASE("path loss monotone beyond the clamp") {
    const SystemConfig cfg = desk_config();
    Rng rng(7);
    for (int i = 0; i < 1000; ++i) {
        const double a = rng.uniform(cfg.min_distance, 2000.0);
        const double b = rng.uniform(cfg.min_distance, 2000.0);
        const double lo = std::min(a, b), hi = std::max(a, b);
        CHECK(path_loss_db(lo, cfg) <= path_loss_db(hi, cfg));
    }
}

TEST_CASE("deployment generation") {
    const SystemConfig cfg = desk_config();
    Rng rng(42);
    const Deployment dep = generate_deployment(cfg, rng);
    REQUIRE(dep.bs.size() == 10);
    REQUIRE(dep.users.size() == 80);
    for (const auto& p : dep.bs) {
        CHECK(p.x >= 0.0);
        CHECK(p.x <= 1000.0);
        CHECK(p.y >= 0.0);
        CHECK(p.y <= 1000.0);
    }

    Rng rng2(42);
    CHECK(dep == generate_deployment(cfg, rng2));

    Rng rng3(43);
    CHECK(dep != generate_deployment(cfg, rng3));

    SystemConfig bad = cfg;
    bad.side_length = 0.0;
    Rng rng4(1);
    CHECK_THROWS_AS(generate_deployment(bad, rng4), std::invalid_argument);
}

TEST_CASE("channel generation") {
    SystemConfig cfg = desk_config();
    cfg.num_users = 6;
    cfg.num_bs = 3;
    Rng rng_d(5);
    const Deployment dep = generate_deployment(cfg, rng_d);

    SUBCASE("per-band noise power") {
        Rng rng(1);
        const ChannelRealization chan = generate_channels(cfg, dep, rng);
        REQUIRE(chan.noise.rows() == 3);
        REQUIRE(chan.noise.cols() == 8);
        // -174 dBm/Hz over 20 kHz
        CHECK(chan.noise(0, 0) == doctest::Approx(7.962143411069938e-14).epsilon(1e-12));
        CHECK(chan.noise(2, 7) == chan.noise(0, 0));
    }

    SUBCASE("shapes, positivity, determinism") {
        Rng a(9), b(9), c(10);
        const ChannelRealization ca = generate_channels(cfg, dep, a);
        REQUIRE(ca.gain.dim0() == 6);
        REQUIRE(ca.gain.dim1() == 3);
        REQUIRE(ca.gain.dim2() == 8);
        for (double g : ca.gain.data()) CHECK(g > 0.0);
        CHECK(ca == generate_channels(cfg, dep, b));
        CHECK(ca != generate_channels(cfg, dep, c));
    }

    SUBCASE("degenerate randomness reduces to pure path loss") {
        SystemConfig det = cfg;
        det.shadowing_sigma = 0.0;
        Rng rng2(3);
        ChannelOptions opt;
        opt.rayleigh_fading = false;
        const ChannelRealization chan = generate_channels(det, dep, rng2, opt);
        for (std::size_t u = 0; u < det.num_users; ++u)
            for (std::size_t b = 0; b < det.num_bs; ++b) {
                const double expected =
                    db_to_linear(-path_loss_db(distance(dep.users[u], dep.bs[b]), det));
                for (std::size_t k = 0; k < det.num_bands; ++k)
                    CHECK(chan.gain(u, b, k) == expected);
            }
    }

    SUBCASE("shadowing shared across bands, fading independent per band") {
        SystemConfig noshadow = cfg;
        noshadow.shadowing_sigma = 0.0;
        Rng rng2(11);
        const ChannelRealization chan = generate_channels(noshadow, dep, rng2);
        bool varies = false;
        for (std::size_t k = 1; k < noshadow.num_bands; ++k)
            if (chan.gain(0, 0, k) != chan.gain(0, 0, 0)) varies = true;
        CHECK(varies);
    }
}

TEST_CASE("fading power factor has unit mean") {
    Rng rng(2024);
    const int n = 200000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += rng.exponential();
    CHECK(std::abs(sum / n - 1.0) < 0.01);
}

TEST_CASE("system config JSON parsing") {
    const std::string good = R"({
        "num_bs": 10, "num_users": 80, "side_length": 1000,
        "num_bands": 8, "band_width": 20000,
        "noise_psd": -174, "user_budget": 23
    })";
    const SystemConfig cfg = parse_system_config(good);
    CHECK(cfg.num_bs == 10);
    CHECK(cfg.band_width == 20000.0);
    CHECK(cfg.pathloss_a == 35.0);
    CHECK(cfg.shadowing_sigma == 8.0);
    CHECK(cfg.budget_mw(0) == doctest::Approx(199.52623149688797));

    const std::string per_user = R"({
        "num_bs": 1, "num_users": 3, "side_length": 100,
        "num_bands": 2, "band_width": 20000,
        "noise_psd": -174, "user_budget": [20, 23, 17]
    })";
    const SystemConfig cfg2 = parse_system_config(per_user);
    CHECK(cfg2.budget_dbm(2) == 17.0);

    CHECK_THROWS_AS(parse_system_config("{"), std::invalid_argument);
    CHECK_THROWS_AS(parse_system_config(R"({"num_bs": 2})"), std::invalid_argument);
    const std::string bad_len = R"({
        "num_bs": 1, "num_users": 3, "side_length": 100,
        "num_bands": 2, "band_width": 20000,
        "noise_psd": -174, "user_budget": [20, 23]
    })";
    CHECK_THROWS_AS(parse_system_config(bad_len), std::invalid_argument);
}
