#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "support/oracles.hpp"
#include "support/toy.hpp"
#include "vcell/rate_core.hpp"

using namespace vcell;
using namespace vcell::test;

TEST_CASE("component SINR on hand instances") {
    SUBCASE("single link is signal over noise") {
        const CellView v = toy_view(1, 1, 1, {4.0}, 0.5, 20e3, 10.0);
        Tensor3 p(1, 1, 1, 2.0);
        const Tensor3 s = sinr(v, p);
        CHECK(s(0, 0, 0) == doctest::Approx(16.0));
    }

    SUBCASE("two users at one BS") {
        // gain*power 4 and 1, noise 1 -> SINRs 2 and 0.2
        const CellView v = toy_view(2, 1, 1, {2.0, 0.5}, 1.0, 20e3, 10.0);
        Tensor3 p(2, 1, 1);
        p(0, 0, 0) = 2.0;
        p(1, 0, 0) = 2.0;
        const Tensor3 s = sinr(v, p);
        CHECK(s(0, 0, 0) == doctest::Approx(2.0));
        CHECK(s(1, 0, 0) == doctest::Approx(0.2));
    }

    SUBCASE("zero powers give zero SINRs") {
        const CellView v = toy_view(2, 2, 2, std::vector<double>(8, 1.0), 1.0, 20e3, 10.0);
        const Tensor3 s = sinr(v, Tensor3(2, 2, 2, 0.0));
        for (double z : s.data()) CHECK(z == 0.0);
    }

    SUBCASE("own power at the other BS counts as interference") {
        const CellView v = toy_view(1, 2, 1, {1.0, 1.0}, 1.0, 20e3, 10.0);
        Tensor3 p(1, 2, 1, 3.0); // one user splitting power across two BSs
        const Tensor3 s = sinr(v, p);
        CHECK(s(0, 0, 0) == doctest::Approx(3.0 / (1.0 + 3.0)));
    }
}

TEST_CASE("aggregate interference") {
    SUBCASE("single user sees none") {
        const CellView v = toy_view(1, 2, 2, {1, 2, 3, 4}, 1.0, 20e3, 10.0);
        Matrix p(1, 2, 5.0);
        const Tensor3 j = intra_cell_interference(v, p);
        for (double x : j.data()) CHECK(x == 0.0);
    }

    SUBCASE("two users see each other") {
        const CellView v = toy_view(2, 1, 1, {2.0, 0.5}, 1.0, 20e3, 10.0);
        Matrix p(2, 1);
        p(0, 0) = 2.0;
        p(1, 0) = 6.0;
        const Tensor3 j = intra_cell_interference(v, p);
        CHECK(j(0, 0, 0) == doctest::Approx(0.5 * 6.0));
        CHECK(j(1, 0, 0) == doctest::Approx(2.0 * 2.0));
    }

    SUBCASE("matches the component denominator at concentrated powers") {
        for (int inst = 0; inst < 20; ++inst) {
            const auto seed = split_seed(7000, inst);
            Rng rng(seed);
            const std::size_t U = 2 + rng.index(3), B = 2 + rng.index(2), K = 1 + rng.index(3);
            CellView v = toy_view(U, B, K, {}, 1e-3, 20e3, 10.0);
            v.gain = Tensor3(U, B, K);
            for (auto& g : v.gain.data()) g = rng.uniform(0.01, 1.0);

            // every user aims all its per-band power at one chosen BS
            Matrix p_uk(U, K);
            Tensor3 p(U, B, K, 0.0);
            std::vector<std::size_t> aim(U);
            for (std::size_t u = 0; u < U; ++u) {
                aim[u] = rng.index(B);
                for (std::size_t k = 0; k < K; ++k) {
                    p_uk(u, k) = rng.uniform(0.1, 2.0);
                    p(u, aim[u], k) = p_uk(u, k);
                }
            }
            const Tensor3 s = sinr(v, p);
            const Tensor3 j = intra_cell_interference(v, p_uk);
            for (std::size_t u = 0; u < U; ++u)
                for (std::size_t k = 0; k < K; ++k) {
                    const std::size_t b = aim[u];
                    const double via_sinr = v.gain(u, b, k) * p(u, b, k) / s(u, b, k);
                    CHECK(via_sinr ==
                          doctest::Approx(v.noise(b, k) + j(u, b, k)).epsilon(1e-9));
                }
        }
    }
}

TEST_CASE("cell sum rate") {
    SUBCASE("SINR 3 on one 20 kHz band is 40 kbit/s") {
        const CellView v = toy_view(1, 1, 1, {3.0}, 1.0, 20e3, 10.0);
        Matrix p(1, 1, 1.0); // gain*P/noise = 3
        ChannelAssignment g(1, 1, 1, 1);
        CHECK(cell_sum_rate(v, g, p) == doctest::Approx(40000.0));
    }

    SUBCASE("nothing assigned, nothing earned") {
        const CellView v = toy_view(2, 2, 2, std::vector<double>(8, 1.0), 1.0, 20e3, 10.0);
        CHECK(cell_sum_rate(v, ChannelAssignment(2, 2, 2, 0), Matrix(2, 2, 1.0)) == 0.0);
    }

    SUBCASE("independent single-user cells add up") {
        const CellView a = toy_view(1, 1, 1, {2.0}, 1.0, 20e3, 10.0);
        const CellView b = toy_view(1, 1, 1, {5.0}, 2.0, 20e3, 10.0);
        ChannelAssignment g(1, 1, 1, 1);
        const double ra = cell_sum_rate(a, g, Matrix(1, 1, 1.0));
        const double rb = cell_sum_rate(b, g, Matrix(1, 1, 1.0));
        CHECK(ra + rb == doctest::Approx(20e3 * (std::log2(3.0) + std::log2(3.5))));
    }

    SUBCASE("invariant under consistent relabeling") {
        Rng rng(123);
        const std::size_t U = 4, B = 3, K = 2;
        CellView v = toy_view(U, B, K, {}, 1e-2, 20e3, 10.0);
        v.gain = Tensor3(U, B, K);
        for (auto& g : v.gain.data()) g = rng.uniform(0.01, 1.0);
        Matrix p(U, K);
        for (auto& x : p.data()) x = rng.uniform(0.0, 3.0);
        ChannelAssignment g(U, B, K, 0);
        for (std::size_t u = 0; u < U; ++u)
            for (std::size_t k = 0; k < K; ++k) g(u, rng.index(B), k) = 1;

        std::vector<std::size_t> up{2, 0, 3, 1}, bp{1, 2, 0};
        CellView w = toy_view(U, B, K, {}, 1e-2, 20e3, 10.0);
        w.gain = Tensor3(U, B, K);
        Matrix q(U, K);
        ChannelAssignment h(U, B, K, 0);
        for (std::size_t u = 0; u < U; ++u) {
            for (std::size_t k = 0; k < K; ++k) q(up[u], k) = p(u, k);
            for (std::size_t b = 0; b < B; ++b)
                for (std::size_t k = 0; k < K; ++k) {
                    w.gain(up[u], bp[b], k) = v.gain(u, b, k);
                    h(up[u], bp[b], k) = g(u, b, k);
                }
        }
        CHECK(cell_sum_rate(w, h, q) == doctest::Approx(cell_sum_rate(v, g, p)).epsilon(1e-12));
    }
}

namespace {

// random two-cell scene with solved-looking powers, for system-level checks
struct Scene {
    SystemConfig cfg;
    ChannelRealization chan;
    VirtualCellPartition part;
    std::vector<CellSolution> sols;
    std::vector<CellView> views;
};

Scene random_scene(std::uint64_t seed, bool with_gamma) {
    Scene s;
    s.cfg.num_bs = 4;
    s.cfg.num_users = 6;
    s.cfg.side_length = 800.0;
    s.cfg.num_bands = 2;
    s.cfg.band_width = 20e3;

    Rng rd(split_seed(seed, 0)), rc(split_seed(seed, 1)), rp(split_seed(seed, 2));
    const Deployment dep = generate_deployment(s.cfg, rd);
    s.chan = generate_channels(s.cfg, dep, rc);

    Clustering cl;
    cl.label = {0, 0, 1, 1};
    cl.num_clusters = 2;
    s.part = affiliate_closest(dep, cl);

    for (const auto& cell : s.part.cells) {
        s.views.push_back(make_cell_view(cell, s.chan, s.cfg));
        const auto& v = s.views.back();
        CellSolution sol;
        sol.power = Tensor3(v.num_users(), v.num_bs(), v.num_bands(), 0.0);
        if (with_gamma) sol.gamma = ChannelAssignment(v.num_users(), v.num_bs(), v.num_bands(), 0);
        for (std::size_t u = 0; u < v.num_users(); ++u)
            for (std::size_t k = 0; k < v.num_bands(); ++k) {
                const std::size_t b = rp.index(v.num_bs());
                sol.power(u, b, k) = rp.uniform(0.0, v.budget_mw[u] / double(v.num_bands()));
                if (with_gamma) (*sol.gamma)(u, b, k) = 1;
            }
        s.sols.push_back(std::move(sol));
    }
    return s;
}

} // namespace

TEST_CASE("system sum rate") {
    SUBCASE("a single cell matches the per-cell rate") {
        for (const bool with_gamma : {true, false}) {
            SystemConfig cfg;
            cfg.num_bs = 3;
            cfg.num_users = 5;
            cfg.side_length = 500.0;
            cfg.num_bands = 2;
            cfg.band_width = 20e3;
            Rng rd(1), rc(2), rp(3);
            const Deployment dep = generate_deployment(cfg, rd);
            const ChannelRealization chan = generate_channels(cfg, dep, rc);
            Clustering one;
            one.label = {0, 0, 0};
            one.num_clusters = 1;
            const VirtualCellPartition part = affiliate_closest(dep, one);
            const CellView v = make_cell_view(part.cells[0], chan, cfg);

            CellSolution sol;
            sol.power = Tensor3(5, 3, 2, 0.0);
            ChannelAssignment g(5, 3, 2, 0);
            for (std::size_t u = 0; u < 5; ++u)
                for (std::size_t k = 0; k < 2; ++k) {
                    const std::size_t b = rp.index(3);
                    sol.power(u, b, k) = rp.uniform(0.0, 50.0);
                    g(u, b, k) = 1;
                }
            if (with_gamma) sol.gamma = g;

            std::vector<CellSolution> sols;
            sols.push_back(sol);
            const double sys = system_sum_rate(part, chan, cfg, sols);
            const double local = with_gamma
                                     ? cell_sum_rate(v, g, aggregate_user_band(sol.power))
                                     : component_sum_rate(v, sol.power);
            CHECK(sys == doctest::Approx(local).epsilon(1e-12));
        }
    }

    SUBCASE("an interferer in another cell strictly lowers a link's rate") {
        const Scene s = random_scene(77, true);
        // count only cell 0's links; cell 1 either transmits or stays silent
        std::vector<CellSolution> loud = s.sols;
        for (auto& x : (*loud[1].gamma).data()) x = 0;
        std::vector<CellSolution> silent = loud;
        for (auto& x : silent[1].power.data()) x = 0.0;

        const double with_interference = system_sum_rate(s.part, s.chan, s.cfg, loud);
        const double alone = system_sum_rate(s.part, s.chan, s.cfg, silent);
        CHECK(with_interference < alone);
    }

    SUBCASE("two-cell toy instance against hand-computed SINRs") {
        SystemConfig cfg;
        cfg.num_bs = 2;
        cfg.num_users = 2;
        cfg.side_length = 10.0;
        cfg.num_bands = 1;
        cfg.band_width = 20e3;

        ChannelRealization chan;
        chan.gain = Tensor3(2, 2, 1);
        chan.noise = Matrix(2, 1, 0.5);
        chan.gain(0, 0, 0) = 1.0;
        chan.gain(0, 1, 0) = 0.2;
        chan.gain(1, 0, 0) = 0.3;
        chan.gain(1, 1, 0) = 2.0;

        VirtualCellPartition part;
        part.cells = {{{0}, {0}}, {{1}, {1}}};

        std::vector<CellSolution> sols(2);
        sols[0].power = Tensor3(1, 1, 1, 4.0);
        sols[0].gamma = ChannelAssignment(1, 1, 1, 1);
        sols[1].power = Tensor3(1, 1, 1, 5.0);
        sols[1].gamma = ChannelAssignment(1, 1, 1, 1);

        const double z0 = 1.0 * 4.0 / (0.5 + 0.3 * 5.0);
        const double z1 = 2.0 * 5.0 / (0.5 + 0.2 * 4.0);
        const double want = 20e3 * (std::log2(1 + z0) + std::log2(1 + z1));
        CHECK(system_sum_rate(part, chan, cfg, sols) == doctest::Approx(want).epsilon(1e-12));
    }

    SUBCASE("never exceeds the sum of per-cell rates") {
        for (int inst = 0; inst < 25; ++inst) {
            for (const bool with_gamma : {true, false}) {
                const Scene s = random_scene(split_seed(8000, inst), with_gamma);
                double local = 0.0;
                for (std::size_t c = 0; c < s.part.cells.size(); ++c)
                    local += with_gamma
                                 ? cell_sum_rate(s.views[c], *s.sols[c].gamma,
                                                 aggregate_user_band(s.sols[c].power))
                                 : component_sum_rate(s.views[c], s.sols[c].power);
                const double sys = system_sum_rate(s.part, s.chan, s.cfg, s.sols);
                CHECK(sys <= local * (1 + 1e-12));
            }
        }
    }
}
