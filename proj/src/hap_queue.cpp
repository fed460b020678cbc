#include "sagin/hap_queue.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace sagin {

std::string_view to_string(SchedulingPolicy p) {
    switch (p) {
        case SchedulingPolicy::Random: return "random";
        case SchedulingPolicy::Fifo: return "fifo";
        case SchedulingPolicy::Edf: return "edf";
        case SchedulingPolicy::Ldf: return "ldf";
        case SchedulingPolicy::Sjf: return "sjf";
    }
    return "unknown";
}

SchedulingPolicy parse_scheduling_policy(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "random") return SchedulingPolicy::Random;
    if (lower == "fifo") return SchedulingPolicy::Fifo;
    if (lower == "edf") return SchedulingPolicy::Edf;
    if (lower == "ldf") return SchedulingPolicy::Ldf;
    if (lower == "sjf") return SchedulingPolicy::Sjf;
    throw std::invalid_argument("unknown scheduling policy: " + std::string(name));
}

BufferQueue::BufferQueue(std::size_t capacity) : capacity_(capacity) {
    if (capacity == 0) throw std::invalid_argument("queue capacity must be positive");
}

std::vector<Packet> BufferQueue::enqueue_batch(std::vector<Packet> batch, std::int64_t t) {
    enqueued_ += batch.size();
    for (auto& p : batch) {
        p.hap_arrival_time = t;
        entries_.push_back(std::move(p));
    }
    std::vector<Packet> dropped;
    while (entries_.size() > capacity_) {
        dropped.push_back(std::move(entries_.front()));
        entries_.pop_front();
    }
    dropped_ += dropped.size();
    return dropped;
}

namespace {

// True when `a` outranks `b` under `policy`. Ties fall back to the lower id.
bool outranks(const Packet& a, const Packet& b, SchedulingPolicy policy) {
    switch (policy) {
        case SchedulingPolicy::Fifo: {
            const auto ta = a.hap_arrival_time.value_or(0), tb = b.hap_arrival_time.value_or(0);
            if (ta != tb) return ta < tb;
            break;
        }
        case SchedulingPolicy::Edf:
            if (a.deadline != b.deadline) return a.deadline < b.deadline;
            break;
        case SchedulingPolicy::Ldf:
            if (a.deadline != b.deadline) return a.deadline > b.deadline;
            break;
        case SchedulingPolicy::Sjf:
            if (a.size_bits != b.size_bits) return a.size_bits < b.size_bits;
            break;
        case SchedulingPolicy::Random:
            break;
    }
    return a.id < b.id;
}

}  // namespace

std::vector<Packet> BufferQueue::schedule_for_user(int user, SchedulingPolicy policy,
                                                   double capacity_bits, Rng& rng,
                                                   std::optional<std::int64_t> arrived_before) {
    std::vector<std::size_t> candidates;
    for (std::size_t k = 0; k < entries_.size(); ++k) {
        const Packet& p = entries_[k];
        if (p.dest_user != user) continue;
        if (arrived_before && p.hap_arrival_time && *p.hap_arrival_time >= *arrived_before) continue;
        candidates.push_back(k);
    }
    if (policy != SchedulingPolicy::Random) {
        std::sort(candidates.begin(), candidates.end(), [&](std::size_t a, std::size_t b) {
            return outranks(entries_[a], entries_[b], policy);
        });
    }

    double remaining = capacity_bits;
    std::vector<std::size_t> chosen;
    std::size_t next = 0;
    while (next < candidates.size()) {
        if (policy == SchedulingPolicy::Random) {
            const auto pick = next + rng.uniform_index(candidates.size() - next);
            std::swap(candidates[next], candidates[pick]);
        }
        const Packet& top = entries_[candidates[next]];
        if (top.size_bits > remaining) break;
        remaining -= top.size_bits;
        chosen.push_back(candidates[next]);
        ++next;
    }

    std::vector<Packet> selected;
    selected.reserve(chosen.size());
    for (auto k : chosen) selected.push_back(entries_[k]);

    std::sort(chosen.begin(), chosen.end());
    std::size_t c = 0, w = 0;
    for (std::size_t k = 0; k < entries_.size(); ++k) {
        if (c < chosen.size() && chosen[c] == k) {
            ++c;
            continue;
        }
        if (w != k) entries_[w] = std::move(entries_[k]);
        ++w;
    }
    entries_.resize(w);
    delivered_ += selected.size();
    return selected;
}

std::vector<std::size_t> BufferQueue::virtual_queue_lengths(int num_users) const {
    std::vector<std::size_t> counts(static_cast<std::size_t>(std::max(num_users, 0)), 0);
    for (const auto& p : entries_) {
        if (p.dest_user >= 0 && p.dest_user < num_users) ++counts[static_cast<std::size_t>(p.dest_user)];
    }
    return counts;
}

}  // namespace sagin
