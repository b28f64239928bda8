#pragma once
// Random network deployments and channel realizations, plus the dB/linear
// conversions used at the configuration and reporting boundaries. Everything
// downstream of this module works in linear units (mW, Hz, dimensionless
// gains); dB and dBm appear only in configuration fields.

#include <filesystem>
#include <string>
#include <vector>

#include "vcell/rng.hpp"
#include "vcell/tensor.hpp"

namespace vcell {

struct Point {
    double x = 0.0;
    double y = 0.0;
    friend bool operator==(const Point&, const Point&) = default;
};

double distance(Point a, Point b);

struct SystemConfig {
    std::size_t num_bs = 0;
    std::size_t num_users = 0;
    double side_length = 0.0;      // meters, deployment square is [0, side]^2
    std::size_t num_bands = 0;
    double band_width = 0.0;       // Hz per band
    double noise_psd = -174.0;     // dBm/Hz
    double user_budget = 23.0;     // dBm, per-user transmit power budget
    // optional per-user budgets (dBm); empty means user_budget for everyone
    std::vector<double> user_budget_overrides;
    double pathloss_a = 35.0;      // dB per decade of distance
    double pathloss_b = 34.0;      // dB offset
    double shadowing_sigma = 8.0;  // dB
    double min_distance = 1.0;     // meters, distances clamped below this

    void validate() const; // throws std::invalid_argument on the first bad field

    double budget_dbm(std::size_t user) const;
    double budget_mw(std::size_t user) const;
    // per-band noise power in mW: noise_psd + 10 log10(band_width), linearized
    double noise_mw_per_band() const;
};

struct Deployment {
    std::vector<Point> bs;
    std::vector<Point> users;
    friend bool operator==(const Deployment&, const Deployment&) = default;
};

struct ChannelRealization {
    Tensor3 gain;  // (user, bs, band), linear power gain
    Matrix noise;  // (bs, band), mW
    friend bool operator==(const ChannelRealization&, const ChannelRealization&) = default;
};

struct ChannelOptions {
    // disable to obtain the deterministic path-loss + shadowing gain only
    bool rayleigh_fading = true;
};

double db_to_linear(double db);
double linear_to_db(double lin);

// pathloss_a * log10(max(d, min_distance)) + pathloss_b, in dB
double path_loss_db(double d, const SystemConfig& cfg);

Deployment generate_deployment(const SystemConfig& cfg, Rng& rng);

// Gains: per-(user,bs) log-normal shadowing shared across bands, i.i.d.
// per-(user,bs,band) unit-mean exponential fading on top of path loss.
ChannelRealization generate_channels(const SystemConfig& cfg, const Deployment& dep,
                                     Rng& rng, const ChannelOptions& opt = {});

SystemConfig parse_system_config(const std::string& json_text);
SystemConfig load_system_config(const std::filesystem::path& path);

} // namespace vcell
