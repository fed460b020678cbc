#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "sagin/hap_queue.hpp"
#include "sagin/rng.hpp"

using namespace sagin;

namespace {

Packet pkt(std::uint64_t id, int user, double bits = 1.0, std::int64_t deadline = 0) {
    Packet p;
    p.id = id;
    p.dest_user = user;
    p.size_bits = bits;
    p.deadline = deadline;
    return p;
}

std::vector<std::uint64_t> ids(const auto& packets) {
    std::vector<std::uint64_t> out;
    for (const auto& p : packets) out.push_back(p.id);
    return out;
}

}  // namespace

TEST_CASE("enqueue drops from the head") {
    BufferQueue q(3);
    q.enqueue_batch({pkt(1, 0), pkt(2, 0), pkt(3, 0)}, 0);
    const auto dropped = q.enqueue_batch({pkt(4, 0), pkt(5, 0)}, 1);
    CHECK(ids(dropped) == std::vector<std::uint64_t>{1, 2});
    CHECK(ids(q.entries()) == std::vector<std::uint64_t>{3, 4, 5});
    CHECK(q.dropped_total() == 2);
    CHECK(q.entries().back().hap_arrival_time == 1);
}

TEST_CASE("empty batch leaves the queue alone") {
    BufferQueue q(3);
    q.enqueue_batch({pkt(1, 0)}, 0);
    CHECK(q.enqueue_batch({}, 4).empty());
    CHECK(ids(q.entries()) == std::vector<std::uint64_t>{1});
}

TEST_CASE("oversized batch keeps only its tail") {
    BufferQueue q(3);
    q.enqueue_batch({pkt(1, 0), pkt(2, 1)}, 0);
    const auto dropped = q.enqueue_batch({pkt(3, 0), pkt(4, 0), pkt(5, 1), pkt(6, 2), pkt(7, 0)}, 1);
    CHECK(ids(q.entries()) == std::vector<std::uint64_t>{5, 6, 7});
    CHECK(ids(dropped) == std::vector<std::uint64_t>{1, 2, 3, 4});
}

TEST_CASE("scheduling orders") {
    Rng rng(1);
    auto fill = [] {
        BufferQueue q(10);
        q.enqueue_batch({pkt(1, 0, 3.0, 5)}, 0);
        q.enqueue_batch({pkt(2, 0, 1.0, 9)}, 1);
        q.enqueue_batch({pkt(3, 0, 2.0, 7), pkt(4, 1, 1.0, 1)}, 2);
        return q;
    };
    SUBCASE("capacity zero sends nothing") {
        for (auto pol : {SchedulingPolicy::Fifo, SchedulingPolicy::Edf, SchedulingPolicy::Ldf, SchedulingPolicy::Sjf,
                         SchedulingPolicy::Random}) {
            auto q = fill();
            CHECK(q.schedule_for_user(0, pol, 0.0, rng).empty());
            CHECK(q.size() == 4);
        }
    }
    SUBCASE("single fitting candidate goes out under every policy") {
        for (auto pol : {SchedulingPolicy::Fifo, SchedulingPolicy::Edf, SchedulingPolicy::Ldf, SchedulingPolicy::Sjf,
                         SchedulingPolicy::Random}) {
            auto q = fill();
            CHECK(ids(q.schedule_for_user(1, pol, 5.0, rng)) == std::vector<std::uint64_t>{4});
        }
    }
    SUBCASE("EDF and LDF on deadlines 5, 9, 7") {
        auto q = fill();
        CHECK(ids(q.schedule_for_user(0, SchedulingPolicy::Edf, 100.0, rng)) == std::vector<std::uint64_t>{1, 3, 2});
        auto r = fill();
        CHECK(ids(r.schedule_for_user(0, SchedulingPolicy::Ldf, 100.0, rng)) == std::vector<std::uint64_t>{2, 3, 1});
    }
    SUBCASE("FIFO and SJF") {
        auto q = fill();
        CHECK(ids(q.schedule_for_user(0, SchedulingPolicy::Fifo, 100.0, rng)) == std::vector<std::uint64_t>{1, 2, 3});
        auto r = fill();
        CHECK(ids(r.schedule_for_user(0, SchedulingPolicy::Sjf, 100.0, rng)) == std::vector<std::uint64_t>{2, 3, 1});
    }
    SUBCASE("greedy stops at the first top packet that does not fit") {
        auto q = fill();
        // FIFO top is the 3-bit packet; 2.5 bits fits nothing.
        CHECK(q.schedule_for_user(0, SchedulingPolicy::Fifo, 2.5, rng).empty());
        auto r = fill();
        CHECK(ids(r.schedule_for_user(0, SchedulingPolicy::Sjf, 3.5, rng)) == std::vector<std::uint64_t>{2, 3});
    }
    SUBCASE("packets arriving in the current slot can be held back") {
        auto q = fill();
        CHECK(ids(q.schedule_for_user(0, SchedulingPolicy::Fifo, 100.0, rng, 2)) == std::vector<std::uint64_t>{1, 2});
        CHECK(ids(q.entries()) == std::vector<std::uint64_t>{3, 4});
    }
}

TEST_CASE("ties go to the lower id") {
    Rng rng(2);
    BufferQueue q(10);
    q.enqueue_batch({pkt(8, 0, 1.0, 4), pkt(3, 0, 1.0, 4), pkt(5, 0, 1.0, 4)}, 0);
    for (auto pol : {SchedulingPolicy::Fifo, SchedulingPolicy::Edf, SchedulingPolicy::Ldf, SchedulingPolicy::Sjf}) {
        BufferQueue c = q;
        CHECK(ids(c.schedule_for_user(0, pol, 1.0, rng)) == std::vector<std::uint64_t>{3});
    }
}

TEST_CASE("random policy is reproducible per seed") {
    BufferQueue q(50);
    std::vector<Packet> batch;
    for (std::uint64_t k = 0; k < 30; ++k) batch.push_back(pkt(k, 0, 1.0, 0));
    q.enqueue_batch(batch, 0);
    BufferQueue a = q, b = q;
    Rng ra(99), rb(99);
    CHECK(ids(a.schedule_for_user(0, SchedulingPolicy::Random, 10.0, ra)) ==
          ids(b.schedule_for_user(0, SchedulingPolicy::Random, 10.0, rb)));
}

TEST_CASE("virtual queue lengths") {
    BufferQueue q(10);
    CHECK(q.virtual_queue_lengths(3) == std::vector<std::size_t>{0, 0, 0});
    q.enqueue_batch({pkt(1, 0), pkt(2, 0), pkt(3, 2), pkt(4, 0)}, 0);
    CHECK(q.virtual_queue_lengths(3) == std::vector<std::size_t>{3, 0, 1});
}

TEST_CASE("policy names") {
    for (auto pol : {SchedulingPolicy::Fifo, SchedulingPolicy::Edf, SchedulingPolicy::Ldf, SchedulingPolicy::Sjf,
                     SchedulingPolicy::Random}) {
        CHECK(parse_scheduling_policy(to_string(pol)) == pol);
    }
    CHECK(parse_scheduling_policy("LDF") == SchedulingPolicy::Ldf);
    CHECK_THROWS_AS(parse_scheduling_policy("lifo"), std::invalid_argument);
}

TEST_CASE("random operation traces") {
    Rng r(1234);
    const int nu = 4;
    for (auto pol : {SchedulingPolicy::Fifo, SchedulingPolicy::Edf, SchedulingPolicy::Ldf, SchedulingPolicy::Sjf,
                     SchedulingPolicy::Random}) {
        BufferQueue q(1 + r.uniform_index(30));
        Rng sched(5);
        std::uint64_t next_id = 0, enq = 0, drop = 0, deliv = 0;
        std::map<int, std::int64_t> last_arrival;
        for (std::int64_t t = 0; t < 3000; ++t) {
            if (r.bernoulli(0.5)) {
                std::vector<Packet> batch;
                const auto n = r.uniform_index(6);
                for (std::uint64_t k = 0; k < n; ++k) {
                    batch.push_back(pkt(next_id++, static_cast<int>(r.uniform_index(nu)), r.uniform(0.5, 2.0),
                                        t + static_cast<std::int64_t>(r.uniform_index(20))));
                }
                enq += batch.size();
                drop += q.enqueue_batch(batch, t).size();
            } else {
                const int user = static_cast<int>(r.uniform_index(nu));
                const double cap = r.uniform(0.0, 6.0);
                const auto before = q.entries();
                const auto sent = q.schedule_for_user(user, pol, cap, sched);
                deliv += sent.size();
                double used = 0.0;
                for (const auto& p : sent) {
                    REQUIRE(p.dest_user == user);
                    used += p.size_bits;
                }
                REQUIRE(used <= cap);
                if (pol == SchedulingPolicy::Fifo) {
                    for (const auto& p : sent) {
                        auto it = last_arrival.find(user);
                        if (it != last_arrival.end()) REQUIRE(*p.hap_arrival_time >= it->second);
                        last_arrival[user] = *p.hap_arrival_time;
                    }
                }
                if (pol == SchedulingPolicy::Sjf && !sent.empty()) {
                    // Nothing left behind for this user was both smaller and able to fit.
                    double left = cap - used;
                    for (const auto& p : q.entries()) {
                        if (p.dest_user != user) continue;
                        for (const auto& s : sent) REQUIRE(!(p.size_bits < s.size_bits));
                        REQUIRE(p.size_bits > left);
                    }
                }
                // Retained packets keep their relative order.
                std::vector<std::uint64_t> expect;
                std::set<std::uint64_t> gone;
                for (const auto& p : sent) gone.insert(p.id);
                for (const auto& p : before) {
                    if (!gone.count(p.id)) expect.push_back(p.id);
                }
                REQUIRE(ids(q.entries()) == expect);
            }
            REQUIRE(q.size() <= q.capacity());
            REQUIRE(enq == q.size() + drop + deliv);
        }
        CHECK(q.enqueued_total() == enq);
        CHECK(q.dropped_total() == drop);
        CHECK(q.delivered_total() == deliv);
    }
}
