#include "sagin/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace sagin {

void validate(const FsoLinkParams& p) {
    if (!(p.sat_tx_power > 0.0) || !(p.noise_power > 0.0) || !(p.bandwidth > 0.0)) {
        throw std::invalid_argument("fso: powers and bandwidth must be positive");
    }
    if (!(p.oe_conversion > 0.0)) throw std::invalid_argument("fso: oe_conversion must be positive");
    if (!(p.gg_alpha > 0.0) || !(p.gg_beta > 0.0)) {
        throw std::invalid_argument("fso: gamma-gamma alpha and beta must be positive");
    }
    if (p.num_apertures < 1) throw std::invalid_argument("fso: num_apertures must be >= 1");
    if (p.snr_threshold < 0.0) throw std::invalid_argument("fso: snr_threshold must be >= 0");
}

void validate(const RfLinkParams& p, int num_users) {
    if (!(p.noise_power > 0.0) || !(p.bandwidth > 0.0) || !(p.carrier_wavelength > 0.0)) {
        throw std::invalid_argument("rf: noise power, bandwidth and wavelength must be positive");
    }
    if (p.nakagami_m < 0.5) throw std::invalid_argument("rf: nakagami_m must be >= 0.5");
    if (p.snr_threshold < 0.0) throw std::invalid_argument("rf: snr_threshold must be >= 0");
    if (!(p.p_min >= 0.0) || p.p_min > p.p_max) throw std::invalid_argument("rf: need 0 <= p_min <= p_max");
    if (num_users * p.p_min > p.p_total) throw std::invalid_argument("rf: num_users * p_min exceeds p_total");
}

double db_to_amplitude(double db) { return std::pow(10.0, db / 20.0); }
double amplitude_to_db(double amplitude) { return 20.0 * std::log10(amplitude); }

double fso_link_loss(const FsoLinkParams& p) {
    const double db = 0.5 * (p.tx_gain_db + p.rx_gain_db - p.free_space_loss_db -
                             p.atmospheric_attenuation_db - p.lens_loss_db - p.system_margin_db);
    return db_to_amplitude(db);
}

double sample_gamma_gamma(double alpha, double beta, Rng& rng) {
    const double x = rng.gamma(alpha, 1.0 / alpha);
    const double y = rng.gamma(beta, 1.0 / beta);
    return x * y;
}

double sample_fso_egc(const FsoLinkParams& p, Rng& rng) {
    const double hl = fso_link_loss(p);
    double sum = 0.0;
    for (int q = 0; q < p.num_apertures; ++q) sum += hl * sample_gamma_gamma(p.gg_alpha, p.gg_beta, rng);
    return sum;
}

double fso_average_snr(const FsoLinkParams& p) {
    return p.sat_tx_power * p.oe_conversion * p.oe_conversion / (p.num_apertures * p.noise_power);
}

double fso_snr(const FsoLinkParams& p, double h_egc) { return fso_average_snr(p) * h_egc * h_egc; }

double shannon_rate(double bandwidth, double snr) { return bandwidth * std::log2(1.0 + snr); }

double rf_large_scale_db(const RfLinkParams& p, double distance) {
    if (!(distance > 0.0) || !std::isfinite(distance)) {
        throw std::domain_error("rf_large_scale: distance must be positive");
    }
    return p.hap_tx_gain_db + p.user_rx_gain_db +
           0.5 * (20.0 * std::log10(p.carrier_wavelength) -
                  10.0 * p.path_loss_exponent * std::log10(distance) - 20.0 * std::log10(4.0 * M_PI));
}

double rf_large_scale(const RfLinkParams& p, double distance) {
    return db_to_amplitude(rf_large_scale_db(p, distance));
}

double sample_nakagami(double m, Rng& rng) { return std::sqrt(rng.gamma(m, 1.0 / m)); }

double rf_snr(double power, double gain_amplitude, double noise_power) {
    if (!(noise_power > 0.0)) throw std::domain_error("rf_snr: noise power must be positive");
    return power * gain_amplitude * gain_amplitude / noise_power;
}

}  // namespace sagin
