#pragma once

#include <vector>

#include "sagin/rng.hpp"

namespace sagin {

/// Satellite-to-HAP optical link. Gains and losses in dB, powers in W.
struct FsoLinkParams {
    double tx_gain_db = 116.0;
    double rx_gain_db = 116.0;
    double free_space_loss_db = 255.0;
    double atmospheric_attenuation_db = 3.0;
    double lens_loss_db = 3.0;
    double system_margin_db = 3.0;
    double sat_tx_power = 1.0;
    double oe_conversion = 0.8;
    int num_apertures = 4;
    double noise_power = 1.0e-3;
    double bandwidth = 1.0e9;
    double snr_threshold = 2.0;
    double gg_alpha = 4.0;
    double gg_beta = 2.0;
};

/// HAP-to-user RF link.
struct RfLinkParams {
    double hap_tx_gain_db = 10.0;
    double user_rx_gain_db = 5.0;
    double path_loss_exponent = 2.0;
    double carrier_wavelength = 0.1;
    double noise_power = 1.0e-9;
    double bandwidth = 1.0e6;
    double nakagami_m = 2.0;
    double snr_threshold = 2.0;
    double p_min = 0.1;
    double p_max = 2.0;
    double p_total = 10.0;
};

/// Per-slot channel realisation.
struct ChannelDraw {
    double fso_gain = 0.0;  // h_EGC
    double fso_snr = 0.0;
    bool fso_decodable = false;
    std::vector<double> rf_gains;  // |h_j|, amplitude
    std::vector<double> rf_snrs;
    long slot = 0;
};

void validate(const FsoLinkParams& p);
/// `num_users` is needed for the N_U * P_min <= P_HAP check.
void validate(const RfLinkParams& p, int num_users);

double db_to_amplitude(double db);
double amplitude_to_db(double amplitude);

/// Link-loss amplitude h_l: half of (gains - losses) in dB, then dB -> amplitude.
double fso_link_loss(const FsoLinkParams& p);

/// Unit-mean Gamma-Gamma turbulence draw X*Y, X~Gamma(a,1/a), Y~Gamma(b,1/b).
double sample_gamma_gamma(double alpha, double beta, Rng& rng);

/// Equal-gain-combined amplitude: sum over apertures of h_l * h_a,q.
double sample_fso_egc(const FsoLinkParams& p, Rng& rng);

/// Average SNR P_S * eta^2 / (N_A * N_q).
double fso_average_snr(const FsoLinkParams& p);
double fso_snr(const FsoLinkParams& p, double h_egc);

/// Shannon rate bandwidth * log2(1 + snr).
double shannon_rate(double bandwidth, double snr);
inline double fso_rate(const FsoLinkParams& p, double snr) { return shannon_rate(p.bandwidth, snr); }
inline double rf_rate(double bandwidth, double snr) { return shannon_rate(bandwidth, snr); }

/// Selective decode-and-forward indicator, inclusive at the boundary.
inline bool decode_indicator(double snr, double threshold) { return snr >= threshold; }

/// Large-scale RF amplitude C_j at distance `distance` (m).
/// Throws std::domain_error for non-positive distance.
double rf_large_scale_db(const RfLinkParams& p, double distance);
double rf_large_scale(const RfLinkParams& p, double distance);

/// Nakagami-m amplitude with E[g^2] = 1.
double sample_nakagami(double m, Rng& rng);

/// P * |h|^2 / sigma^2. Throws std::domain_error if noise_power <= 0.
double rf_snr(double power, double gain_amplitude, double noise_power);

}  // namespace sagin
