#include "vcell/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace vcell {

double distance(Point a, Point b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

void SystemConfig::validate() const {
    auto fail = [](const std::string& msg) { throw std::invalid_argument("SystemConfig: " + msg); };
    if (num_bs < 1) fail("num_bs must be >= 1");
    if (num_users < 1) fail("num_users must be >= 1");
    if (!(side_length > 0.0)) fail("side_length must be > 0");
    if (num_bands < 1) fail("num_bands must be >= 1");
    if (!(band_width > 0.0)) fail("band_width must be > 0");
    if (!std::isfinite(noise_psd)) fail("noise_psd must be finite");
    if (!std::isfinite(user_budget)) fail("user_budget must be finite");
    if (!user_budget_overrides.empty() && user_budget_overrides.size() != num_users)
        fail("per-user budget list length must equal num_users");
    for (double b : user_budget_overrides)
        if (!std::isfinite(b)) fail("per-user budgets must be finite");
    if (!(shadowing_sigma >= 0.0)) fail("shadowing_sigma must be >= 0");
    if (!(min_distance > 0.0)) fail("min_distance must be > 0");
    if (!std::isfinite(pathloss_a) || !std::isfinite(pathloss_b)) fail("path loss parameters must be finite");
}

double SystemConfig::budget_dbm(std::size_t user) const {
    if (!user_budget_overrides.empty()) return user_budget_overrides.at(user);
    return user_budget;
}

double SystemConfig::budget_mw(std::size_t user) const {
    return db_to_linear(budget_dbm(user));
}

double SystemConfig::noise_mw_per_band() const {
    return db_to_linear(noise_psd + 10.0 * std::log10(band_width));
}

double path_loss_db(double d, const SystemConfig& cfg) {
    const double dc = std::max(d, cfg.min_distance);
    return cfg.pathloss_a * std::log10(dc) + cfg.pathloss_b;
}

Deployment generate_deployment(const SystemConfig& cfg, Rng& rng) {
    cfg.validate();
    Deployment dep;
    dep.bs.reserve(cfg.num_bs);
    dep.users.reserve(cfg.num_users);
    for (std::size_t b = 0; b < cfg.num_bs; ++b)
        dep.bs.push_back({rng.uniform(0.0, cfg.side_length), rng.uniform(0.0, cfg.side_length)});
    for (std::size_t u = 0; u < cfg.num_users; ++u)
        dep.users.push_back({rng.uniform(0.0, cfg.side_length), rng.uniform(0.0, cfg.side_length)});
    return dep;
}

ChannelRealization generate_channels(const SystemConfig& cfg, const Deployment& dep,
                                     Rng& rng, const ChannelOptions& opt) {
    cfg.validate();
    if (dep.bs.size() != cfg.num_bs || dep.users.size() != cfg.num_users)
        throw std::invalid_argument("generate_channels: deployment does not match config");

    const std::size_t U = cfg.num_users, B = cfg.num_bs, K = cfg.num_bands;
    ChannelRealization chan;
    chan.gain = Tensor3(U, B, K);
    chan.noise = Matrix(B, K, cfg.noise_mw_per_band());

    // large-scale part: one shadowing draw per (user, bs) link
    Matrix link_gain_db(U, B);
    for (std::size_t u = 0; u < U; ++u) {
        for (std::size_t b = 0; b < B; ++b) {
            const double pl = path_loss_db(distance(dep.users[u], dep.bs[b]), cfg);
            const double shadow = cfg.shadowing_sigma * rng.normal();
            link_gain_db(u, b) = -pl - shadow;
        }
    }
    // small-scale part: independent unit-mean exponential power factor per band
    for (std::size_t u = 0; u < U; ++u)
        for (std::size_t b = 0; b < B; ++b)
            for (std::size_t k = 0; k < K; ++k) {
                const double fading = opt.rayleigh_fading ? rng.exponential() : 1.0;
                chan.gain(u, b, k) = db_to_linear(link_gain_db(u, b)) * fading;
            }
    return chan;
}

SystemConfig parse_system_config(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("SystemConfig: invalid JSON: ") + e.what());
    }

    SystemConfig cfg;
    try {
        cfg.num_bs = j.at("num_bs").get<std::size_t>();
        cfg.num_users = j.at("num_users").get<std::size_t>();
        cfg.side_length = j.at("side_length").get<double>();
        cfg.num_bands = j.at("num_bands").get<std::size_t>();
        cfg.band_width = j.at("band_width").get<double>();
        cfg.noise_psd = j.at("noise_psd").get<double>();
        // scalar dBm for everyone, or an array of per-user dBm values
        const auto& budget = j.at("user_budget");
        if (budget.is_array()) {
            cfg.user_budget_overrides = budget.get<std::vector<double>>();
            if (!cfg.user_budget_overrides.empty())
                cfg.user_budget = cfg.user_budget_overrides.front();
        } else {
            cfg.user_budget = budget.get<double>();
        }
        if (j.contains("pathloss_a")) cfg.pathloss_a = j.at("pathloss_a").get<double>();
        if (j.contains("pathloss_b")) cfg.pathloss_b = j.at("pathloss_b").get<double>();
        if (j.contains("shadowing_sigma")) cfg.shadowing_sigma = j.at("shadowing_sigma").get<double>();
        if (j.contains("min_distance")) cfg.min_distance = j.at("min_distance").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("SystemConfig: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

SystemConfig load_system_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_system_config(ss.str());
}

} // namespace vcell
