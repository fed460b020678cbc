// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.
// Oracles are re-derived here rather than borrowed from the library.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "../support/line_client.hpp"
#include "sagin/channel.hpp"
#include "sagin/hap_queue.hpp"
#include "sagin/metrics.hpp"
#include "sagin/orbital.hpp"
#include "sagin/policies.hpp"
#include "sagin/power_alloc.hpp"
#include "sagin/protocol.hpp"
#include "sagin/rng.hpp"
#include "sagin/rollout.hpp"
#include "sagin/server.hpp"

using namespace sagin;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------- power

PowerAllocProblem random_problem(Rng& r) {
    PowerAllocProblem p;
    for (int j = 0; j < 3; ++j) {
        p.effective_gain.push_back(std::exp(r.uniform(std::log(0.05), std::log(20.0))));
        p.bandwidth.push_back(r.uniform(0.5e6, 2e6));
    }
    p.p_min = r.uniform(0.0, 0.3);
    p.p_max = r.uniform(1.0, 5.0);
    p.p_total = r.uniform(3 * p.p_min + 0.1, 3 * p.p_max * 1.1);
    return p;
}

double rate(double b, double a, double x) { return b * std::log2(1.0 + a * x); }

Verdict power_allocator() {
    constexpr int kGrid = 101;
    const auto t0 = std::chrono::steady_clock::now();
    Rng r(20240501);
    int below = 0;
    double worst_shortfall = 0.0;
    for (int k = 0; k < 50; ++k) {
        const PowerAllocProblem p = random_problem(r);
        const PowerAllocation s = solve_max_min(p);
        const PowerAllocation o = brute_force_oracle(p, kGrid);
        // Largest step a grid point can lose against the continuum, per user.
        const double step = (p.p_max - p.p_min) / (kGrid - 1);
        double slack = 0.0;
        for (int j = 0; j < 3; ++j) {
            slack = std::max(slack, rate(p.bandwidth[j], p.effective_gain[j], p.p_min + step) -
                                        rate(p.bandwidth[j], p.effective_gain[j], p.p_min));
        }
        double sum = 0.0;
        bool box = true;
        for (double x : s.powers) {
            sum += x;
            box = box && x >= p.p_min && x <= p.p_max;
        }
        const double shortfall = o.min_rate - s.min_rate;
        worst_shortfall = std::max(worst_shortfall, shortfall / o.min_rate);
        if (!box || sum > p.p_total || shortfall > slack || s.min_rate > o.min_rate + slack + 1e-6 * o.min_rate) ++below;
    }

    // Instances whose optimum sits exactly on the grid: equal users, budget a
    // multiple of a grid point.
    int sym_fail = 0;
    double worst_gap = 0.0;
    for (int k = 0; k < 10; ++k) {
        PowerAllocProblem p;
        const double a = std::exp(r.uniform(-2.0, 2.0)), b = r.uniform(0.5e6, 2e6);
        p.effective_gain.assign(3, a);
        p.bandwidth.assign(3, b);
        p.p_min = 0.1;
        p.p_max = 5.0;
        const double step = (p.p_max - p.p_min) / (kGrid - 1);
        const double g = p.p_min + step * static_cast<double>(5 + r.uniform_index(90));
        p.p_total = g + g + g;
        const double s = solve_max_min(p).min_rate;
        const double o = brute_force_oracle(p, kGrid).min_rate;
        const double analytic = rate(b, a, g);
        const double gap = std::abs(s - o) / o;
        worst_gap = std::max(worst_gap, gap);
        if (gap > 1e-3 || std::abs(o - analytic) / analytic > 1e-9) ++sym_fail;
    }
    const double elapsed = seconds_since(t0);
    Verdict v;
    v.pass = below == 0 && sym_fail == 0 && elapsed < 5.0;
    v.detail = fmt("50 random: %d violations (max relative shortfall %.2e); 10 on-grid: max gap %.2e <= 1e-3; %.2f s < 5 s",
                   below, worst_shortfall, worst_gap, elapsed);
    return v;
}

// ---------------------------------------------------------------- concavity

Verdict concavity() {
    Rng r(99);
    int violations = 0;
    double worst = 0.0;
    for (int k = 0; k < 10000; ++k) {
        const int n = 2 + static_cast<int>(r.uniform_index(3));
        PowerAllocProblem p;
        p.p_min = r.uniform(0.0, 0.3);
        p.p_max = r.uniform(1.0, 5.0);
        p.p_total = r.uniform(n * p.p_min + 0.1, n * p.p_max);
        for (int j = 0; j < n; ++j) {
            p.effective_gain.push_back(std::exp(r.uniform(-3.0, 3.0)));
            p.bandwidth.push_back(1.0);  // spectral efficiency, bits/s/Hz
        }
        auto draw = [&] {
            std::vector<double> x(n);
            double s;
            do {
                s = 0.0;
                for (auto& v : x) s += (v = r.uniform(p.p_min, p.p_max));
            } while (s > p.p_total);
            return x;
        };
        const auto P = draw(), Q = draw();
        const double lam = r.uniform(0.0, 1.0);
        auto min_rate = [&](const std::vector<double>& x) {
            double m = INFINITY;
            for (int j = 0; j < n; ++j) m = std::min(m, std::log2(1.0 + p.effective_gain[j] * x[j]));
            return m;
        };
        std::vector<double> mix(n);
        for (int j = 0; j < n; ++j) mix[j] = lam * P[j] + (1 - lam) * Q[j];
        const double lib = evaluate_allocation(p, mix).min_rate;
        const double violation = lam * min_rate(P) + (1 - lam) * min_rate(Q) - lib;
        worst = std::max(worst, violation);
        if (violation > 1e-9 || std::abs(lib - min_rate(mix)) > 1e-12) ++violations;
    }
    return {violations == 0, fmt("10000 convex combinations, %d violations, worst %.2e (tolerance 1e-9)", violations, worst)};
}

// ---------------------------------------------------------------- orbits

Verdict orbital_invariants() {
    const PhysicalConstants c;
    const auto elems = default_constellation({});
    Rng r(4);
    double worst_norm = 0.0, worst_wrap = 0.0;
    int samples = 0;
    for (const auto& e : elems) {
        const double h = e.altitude + c.earth_radius;
        const double tau = 2.0 * kPi * std::sqrt(h * h * h / 3.986004418e14);
        for (int k = 0; k < 1000; ++k, ++samples) {
            const auto t = static_cast<std::int64_t>(r.uniform_index(1000000));
            worst_norm = std::max(worst_norm, std::abs(satellite_position(e, t, 1.0, c).norm() / h - 1.0));
            // Slot length chosen so one period is exactly 997 slots.
            const double slot = tau / 997.0;
            const auto s = static_cast<std::int64_t>(r.uniform_index(5000));
            const Position3D a = satellite_position(e, s, slot, c), b = satellite_position(e, s + 997, slot, c);
            worst_wrap = std::max(worst_wrap, (a - b).norm() / h);
        }
    }
    return {worst_norm <= 1e-12 && worst_wrap <= 1e-9,
            fmt("%d slots: max |norm/H - 1| = %.2e (<= 1e-12), max period wrap error %.2e (<= 1e-9)", samples,
                worst_norm, worst_wrap)};
}

// ---------------------------------------------------------------- AoI

Verdict aoi_equivalence() {
    SimConfig cfg;
    cfg.episode_length = 1000;
    Environment env(cfg);
    auto policy = make_policy(PolicyKind::Ewg);
    run_episode(env, *policy, 31, 0);
    const int ns = cfg.num_satellites, nu = cfg.num_users;

    // Scalar re-simulation straight from the event log.
    std::vector<std::vector<long long>> th{std::vector<long long>(ns)}, de{std::vector<long long>(ns)},
        us{std::vector<long long>(ns * nu)};
    auto hist = [](const std::vector<std::vector<long long>>& h, long long t) -> const std::vector<long long>& {
        return h[t < 0 ? 0 : t];
    };
    long long deliveries = 0, services = 0;
    for (std::size_t k = 0; k < env.event_log().size(); ++k) {
        const auto& ev = env.event_log()[k];
        const long long t = static_cast<long long>(k) + 1;
        auto nt = th.back(), nd = de.back(), nuu = us.back();
        for (int i = 0; i < ns; ++i) nt[i] = ev.generated[i] ? 0 : nt[i] + 1;
        th.push_back(nt);
        for (int i = 0; i < ns; ++i) {
            if (ev.served && *ev.served == i) {
                nd[i] = hist(th, t - ev.hap_delay)[i] + ev.hap_delay;
                ++services;
            } else {
                nd[i] += 1;
            }
        }
        de.push_back(nd);
        for (int j = 0; j < nu; ++j) {
            for (int i = 0; i < ns; ++i) {
                const auto& got = ev.delivered[j];
                long long& cell = nuu[i * nu + j];
                if (std::find(got.begin(), got.end(), i) != got.end()) {
                    cell = hist(de, t - ev.user_delay[j])[i] + ev.user_delay[j];
                    ++deliveries;
                } else {
                    cell += 1;
                }
            }
        }
        us.push_back(nuu);
    }
    long long mismatches = 0;
    const auto& led = env.aoi();
    for (long long t = 0; t <= 1000; ++t) {
        for (int i = 0; i < ns; ++i) {
            mismatches += led.theta(t, i) != th[t][i];
            mismatches += led.delta(t, i) != de[t][i];
            for (int j = 0; j < nu; ++j) mismatches += led.user(t, i, j) != us[t][i * nu + j];
        }
    }
    const bool exercised = services > 100 && deliveries > 100;
    return {mismatches == 0 && led.slots() == 1000 && exercised,
            fmt("1000 slots, %lld HAP services, %lld user deliveries, %lld mismatching entries", services, deliveries,
                mismatches)};
}

// ---------------------------------------------------------------- handovers

Verdict handover_counter() {
    Rng r(8);
    int bad = 0;
    for (int k = 0; k < 1000; ++k) {
        const auto len = 1 + r.uniform_index(300);
        const auto alphabet = 1 + r.uniform_index(10);
        HandoverLedger l;
        long long prev = -1, changes = 0;
        for (std::uint64_t s = 0; s < len; ++s) {
            const int v = static_cast<int>(r.uniform_index(alphabet));
            if (prev >= 0 && v != prev) ++changes;
            prev = v;
            l.record_selection(v);
        }
        bad += l.handover_count() != changes;
    }
    return {bad == 0, fmt("1000 random sequences, %d count mismatches", bad)};
}

// ---------------------------------------------------------------- channel

Verdict channel_statistics() {
    constexpr int n = 1000000;
    Rng g(2024);
    double gg = 0.0;
    for (int k = 0; k < n; ++k) gg += sample_gamma_gamma(4.0, 2.0, g);
    gg /= n;
    double nk1 = 0.0, nk2 = 0.0;
    Rng a(77), b(78);
    for (int k = 0; k < n; ++k) {
        const double x = sample_nakagami(1.0, a), y = sample_nakagami(2.0, b);
        nk1 += x * x;
        nk2 += y * y;
    }
    nk1 /= n;
    nk2 /= n;
    const bool means = std::abs(gg - 1) <= 0.01 && std::abs(nk1 - 1) <= 0.01 && std::abs(nk2 - 1) <= 0.01;
    const double b0 = 1e6;
    const bool rates = rf_rate(b0, 1.0) == b0 && rf_rate(b0, 3.0) == 2 * b0 &&
                       fso_rate(FsoLinkParams{}, 1.0) == FsoLinkParams{}.bandwidth &&
                       fso_rate(FsoLinkParams{}, 3.0) == 2 * FsoLinkParams{}.bandwidth;
    return {means && rates,
            fmt("Gamma-Gamma mean %.5f, Nakagami(1) E[g^2] %.5f, Nakagami(2) E[g^2] %.5f (each 1 +- 1%%); "
                "R(1) = B, R(3) = 2B %s",
                gg, nk1, nk2, rates ? "exact" : "NOT exact")};
}

// ---------------------------------------------------------------- queue

Verdict queue_safety() {
    Rng r(5150);
    const int nu = 5;
    long long ops = 0, over = 0, order = 0, conservation = 0;
    for (auto pol : {SchedulingPolicy::Fifo, SchedulingPolicy::Edf, SchedulingPolicy::Ldf, SchedulingPolicy::Sjf,
                     SchedulingPolicy::Random}) {
        BufferQueue q(5 + r.uniform_index(60));
        Rng sched(1);
        std::uint64_t in = 0, dropped = 0, out = 0, next = 0;
        std::map<int, std::int64_t> last;
        for (int k = 0; k < 20000; ++k, ++ops) {
            const std::int64_t t = k / 3;
            if (r.bernoulli(0.5)) {
                std::vector<Packet> batch(r.uniform_index(8));
                for (auto& p : batch) {
                    p.id = next++;
                    p.dest_user = static_cast<int>(r.uniform_index(nu));
                    p.gen_time = t - static_cast<std::int64_t>(r.uniform_index(10));
                    p.deadline = p.gen_time + 50;
                    p.size_bits = r.uniform(1.0, 3.0);
                }
                in += batch.size();
                dropped += q.enqueue_batch(std::move(batch), t).size();
            } else {
                const int u = static_cast<int>(r.uniform_index(nu));
                const auto sent = q.schedule_for_user(u, pol, r.uniform(0.0, 8.0), sched);
                out += sent.size();
                if (pol == SchedulingPolicy::Fifo) {
                    for (const auto& p : sent) {
                        if (last.count(u) && *p.hap_arrival_time < last[u]) ++order;
                        last[u] = *p.hap_arrival_time;
                    }
                }
            }
            over += q.size() > q.capacity();
            conservation += in != q.size() + dropped + out;
        }
    }
    return {over == 0 && order == 0 && conservation == 0,
            fmt("%lld ops over 5 policies: %lld capacity breaches, %lld conservation breaks, %lld FIFO order breaks",
                ops, over, conservation, order)};
}

// ---------------------------------------------------------------- protocol

Verdict determinism_and_protocol() {
    SimConfig cfg;
    cfg.episode_length = 200;
    Environment env(cfg);
    auto policy = make_policy(PolicyKind::Ewg);
    const auto local = run_episode(env, *policy, 17, 0);

    TcpServer server(cfg, "127.0.0.1", 0);
    std::thread th([&] { server.run(); });
    std::vector<TraceRecord> remote;
    bool session_ok = true;
    try {
        LineClient client("127.0.0.1", server.port());
        auto req = [](const char* type, nlohmann::json payload) {
            return nlohmann::json{{"type", type}, {"protocol_version", "1"}, {"payload", std::move(payload)}}.dump();
        };
        session_ok = protocol::parse(client.request(req("hello", nlohmann::json::object()))).type ==
                     protocol::MessageType::Hello;
        client.request(req("reset", {{"seed", 17}}));
        for (int a : local.actions) {
            const auto m = protocol::parse(client.request(req("step", {{"action", a}})));
            if (m.type != protocol::MessageType::Outcome) {
                session_ok = false;
                break;
            }
            remote.push_back(make_trace_record(0, protocol::outcome_from_json(m.payload, cfg.num_satellites,
                                                                              cfg.num_users)));
        }
    } catch (const std::exception&) {
        session_ok = false;
    }
    server.stop();
    th.join();

    std::ostringstream a, b;
    write_trace_csv(a, local.records, cfg.num_satellites, cfg.num_users);
    write_trace_csv(b, remote, cfg.num_satellites, cfg.num_users);
    const bool identical = session_ok && a.str() == b.str();

    // Round trip over generated messages.
    Rng r(3);
    int round_trip_fail = 0;
    for (int k = 0; k < 5000; ++k) {
        protocol::Message m;
        m.type = static_cast<protocol::MessageType>(r.uniform_index(6));
        m.payload = {{"seed", r.next_u64() >> 11},
                     {"x", r.uniform(-1e300, 1e300)},
                     {"v", std::vector<double>{r.normal(), r.uniform(), -0.0}},
                     {"s", std::string(1 + r.uniform_index(5), static_cast<char>(32 + r.uniform_index(90)))},
                     {"b", r.bernoulli(0.5)},
                     {"n", nullptr}};
        if (!(protocol::parse(protocol::serialize(m)) == m)) ++round_trip_fail;
    }
    return {identical && round_trip_fail == 0,
            fmt("remote trace (%zu rows, %zu bytes) %s in-process; %d/5000 message round-trip failures",
                remote.size(), b.str().size(), identical ? "byte-identical to" : "DIFFERS from", round_trip_fail)};
}

// ---------------------------------------------------------------- baselines

struct Stats {
    MeanStd f1, f2;
};

Stats evaluate(PolicyKind kind, SchedulingPolicy sched) {
    SimConfig cfg;
    cfg.episode_length = 500;
    cfg.scheduling = sched;
    Environment env(cfg);
    auto policy = make_policy(kind);
    std::vector<double> f1, f2;
    for (int e = 0; e < 20; ++e) {
        const auto res = run_episode(env, *policy, episode_seed(1, e), e);
        f1.push_back(res.summary.f1);
        f2.push_back(static_cast<double>(res.summary.f2));
    }
    return {mean_std(f1), mean_std(f2)};
}

Verdict ewg_beats_baselines() {
    const SchedulingPolicy sched = SimConfig{}.scheduling;
    const Stats ewg = evaluate(PolicyKind::Ewg, sched), rnd = evaluate(PolicyKind::Random, sched),
                rr = evaluate(PolicyKind::RoundRobin, sched);
    return {ewg.f1.mean < rnd.f1.mean && ewg.f1.mean < rr.f1.mean,
            fmt("20 seeds, T=500, f1: EWG %.2f +- %.2f, Random %.2f +- %.2f, RR %.2f +- %.2f", ewg.f1.mean,
                ewg.f1.std, rnd.f1.mean, rnd.f1.std, rr.f1.mean, rr.f1.std)};
}

Verdict scheduling_order() {
    const Stats ldf = evaluate(PolicyKind::Ewg, SchedulingPolicy::Ldf),
                fifo = evaluate(PolicyKind::Ewg, SchedulingPolicy::Fifo),
                sjf = evaluate(PolicyKind::Ewg, SchedulingPolicy::Sjf);
    return {ldf.f1.mean < fifo.f1.mean && ldf.f2.mean <= sjf.f2.mean,
            fmt("EWG, 20 seeds: f1 LDF %.2f +- %.2f < FIFO %.2f +- %.2f; f2 LDF %.2f +- %.2f <= SJF %.2f +- %.2f",
                ldf.f1.mean, ldf.f1.std, fifo.f1.mean, fifo.f1.std, ldf.f2.mean, ldf.f2.std, sjf.f2.mean,
                sjf.f2.std)};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
        {"power allocator vs grid oracle", power_allocator},
        {"min-rate concavity probe", concavity},
        {"orbital invariants", orbital_invariants},
        {"AoI ledger vs scalar re-simulation", aoi_equivalence},
        {"handover counter", handover_counter},
        {"channel statistics and rate identities", channel_statistics},
        {"queue safety", queue_safety},
        {"determinism and protocol", determinism_and_protocol},
        {"EWG vs Random and RR", ewg_beats_baselines},
        {"scheduling order under EWG", scheduling_order},
    };
    int failed = 0;
    for (const auto& [name, check] : criteria) {
        Verdict v;
        try {
            v = check();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        failed += !v.pass;
        std::printf("%s  %-40s %s\n", v.pass ? "PASS" : "FAIL", name, v.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
