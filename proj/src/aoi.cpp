#include "sagin/aoi.hpp"

#include <cmath>
#include <stdexcept>

namespace sagin {

std::optional<Age> transfer_delay(double bits, double rate, double slot_duration) {
    if (bits <= 0.0) return Age{0};
    if (!(rate > 0.0) || !(slot_duration > 0.0)) return std::nullopt;
    return static_cast<Age>(std::ceil(bits / (rate * slot_duration)));
}

AoiLedger::AoiLedger(int num_satellites, int num_users) { reset(num_satellites, num_users); }

void AoiLedger::reset(int num_satellites, int num_users) {
    if (num_satellites < 1 || num_users < 1) throw std::invalid_argument("AoiLedger: sizes must be >= 1");
    ns_ = num_satellites;
    nu_ = num_users;
    theta_.assign(1, std::vector<Age>(static_cast<std::size_t>(ns_), 0));
    delta_.assign(1, std::vector<Age>(static_cast<std::size_t>(ns_), 0));
    user_.assign(1, std::vector<Age>(static_cast<std::size_t>(ns_) * nu_, 0));
}

std::size_t AoiLedger::clamp_index(std::int64_t t, std::size_t size) {
    if (t < 0) return 0;
    const auto u = static_cast<std::size_t>(t);
    if (u >= size) throw std::out_of_range("AoiLedger: history index beyond current slot");
    return u;
}

Age AoiLedger::theta(std::int64_t t, int i) const { return theta_[clamp_index(t, theta_.size())][i]; }
Age AoiLedger::delta(std::int64_t t, int i) const { return delta_[clamp_index(t, delta_.size())][i]; }
Age AoiLedger::user(std::int64_t t, int i, int j) const {
    return user_[clamp_index(t, user_.size())][static_cast<std::size_t>(i) * nu_ + j];
}

void AoiLedger::advance(const SlotEvents& ev) {
    if (static_cast<int>(ev.generated.size()) != ns_ || static_cast<int>(ev.user_delay.size()) != nu_ ||
        static_cast<int>(ev.delivered.size()) != nu_) {
        throw std::invalid_argument("AoiLedger::advance: event dimensions do not match the ledger");
    }
    const std::int64_t t = slots() + 1;

    std::vector<Age> theta_next(theta_.back());
    for (int i = 0; i < ns_; ++i) theta_next[i] = step_satellite_aoi(theta_next[i], ev.generated[i]);
    theta_.push_back(std::move(theta_next));

    std::vector<Age> delta_next(delta_.back());
    for (int i = 0; i < ns_; ++i) {
        const bool served = ev.served && *ev.served == i;
        const Age snap = served ? theta(t - ev.hap_delay, i) : 0;
        delta_next[i] = step_hap_aoi(delta_next[i], served, snap, ev.hap_delay);
    }
    delta_.push_back(std::move(delta_next));

    std::vector<Age> user_next(user_.back());
    std::vector<bool> hit(static_cast<std::size_t>(ns_));
    for (int j = 0; j < nu_; ++j) {
        std::fill(hit.begin(), hit.end(), false);
        for (int src : ev.delivered[j]) {
            if (src < 0 || src >= ns_) throw std::out_of_range("AoiLedger::advance: bad source index");
            hit[src] = true;
        }
        for (int i = 0; i < ns_; ++i) {
            auto& cell = user_next[static_cast<std::size_t>(i) * nu_ + j];
            const Age snap = hit[i] ? delta(t - ev.user_delay[j], i) : 0;
            cell = step_user_aoi(cell, hit[i], snap, ev.user_delay[j]);
        }
    }
    user_.push_back(std::move(user_next));
}

double AoiLedger::user_mean(std::int64_t t, int i) const {
    const auto& row = user_[clamp_index(t, user_.size())];
    Age s = 0;
    for (int j = 0; j < nu_; ++j) s += row[static_cast<std::size_t>(i) * nu_ + j];
    return static_cast<double>(s) / nu_;
}

double AoiLedger::aoi_sum(std::int64_t t) const {
    double s = 0.0;
    for (int i = 0; i < ns_; ++i) s += user_mean(t, i);
    return s;
}

double objective_f1(std::span<const double> per_slot_aoi_sum) {
    if (per_slot_aoi_sum.empty()) throw std::invalid_argument("objective_f1: empty trace");
    double s = 0.0;
    for (double v : per_slot_aoi_sum) s += v;
    return s / static_cast<double>(per_slot_aoi_sum.size());
}

double objective_f1(const AoiLedger& ledger) {
    std::vector<double> sums;
    sums.reserve(static_cast<std::size_t>(ledger.slots()));
    for (std::int64_t t = 1; t <= ledger.slots(); ++t) sums.push_back(ledger.aoi_sum(t));
    return objective_f1(sums);
}

}  // namespace sagin
