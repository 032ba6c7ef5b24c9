#include "aoii/sim.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <thread>

namespace aoii {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Cumulative rows of Q for categorical sampling by CDF scan.
std::vector<std::vector<double>> row_cdfs(const DtmcSource& src) {
    const int n = src.size();
    std::vector<std::vector<double>> cdf(n, std::vector<double>(n));
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int j = 0; j < n; ++j) {
            acc += src.q(i, j);
            cdf[i][j] = acc;
        }
        cdf[i][n - 1] = 1.0; // guard against round-off at the top
    }
    return cdf;
}

int sample_row(const std::vector<double>& cdf, double u) {
    const int n = static_cast<int>(cdf.size());
    for (int j = 0; j < n; ++j) {
        if (u < cdf[j]) {
            return j;
        }
    }
    return n - 1;
}

struct Welford {
    long n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++n;
        const double d = x - mean;
        mean += d / static_cast<double>(n);
        m2 += d * (x - mean);
    }
    double variance() const { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
};

struct CensusAccumulator {
    std::vector<long> t_counts{0}; // index by T
    std::vector<long> h_counts{0};
    std::vector<long> c_counts{0};
    Welford h, t, c, penalty;
    std::vector<long> absorb;

    explicit CensusAccumulator(int n) : absorb(n, 0) {}

    static void bump(std::vector<long>& hist, long value) {
        if (static_cast<long>(hist.size()) <= value) {
            hist.resize(value + 1, 0);
        }
        ++hist[value];
    }

    void record(long h_len, long t_len, long attempts, double pen_sum, int target) {
        h.add(static_cast<double>(h_len));
        t.add(static_cast<double>(t_len));
        c.add(static_cast<double>(attempts));
        penalty.add(pen_sum);
        bump(t_counts, t_len);
        bump(h_counts, h_len);
        bump(c_counts, attempts);
        ++absorb[target];
    }

    CycleCensus finish() const {
        CycleCensus out;
        out.cycles = h.n;
        out.t_counts = t_counts;
        out.h_counts = h_counts;
        out.c_counts = c_counts;
        out.t_pmf.assign(t_counts.size(), 0.0);
        for (std::size_t i = 0; i < t_counts.size(); ++i) {
            out.t_pmf[i] =
                out.cycles > 0 ? static_cast<double>(t_counts[i]) / static_cast<double>(out.cycles)
                               : 0.0;
        }
        out.mean_h = h.mean;
        out.var_h = h.variance();
        out.mean_t = t.mean;
        out.var_t = t.variance();
        out.mean_c = c.mean;
        out.var_c = c.variance();
        out.mean_penalty = penalty.mean;
        out.var_penalty = penalty.variance();
        out.absorb_freq.assign(absorb.size(), 0.0);
        for (std::size_t i = 0; i < absorb.size(); ++i) {
            out.absorb_freq[i] =
                out.cycles > 0 ? static_cast<double>(absorb[i]) / static_cast<double>(out.cycles)
                               : 0.0;
        }
        return out;
    }
};

struct ReplicationResult {
    double mean_cost = 0.0;
    double penalty_sum = 0.0;
    double attempts = 0.0;
    long counted = 0;
    std::vector<CensusAccumulator> census;
};

bool decide_transmission(const PolicySpec& policy, int estimate, long aoii, Rng& rng) {
    switch (policy.kind) {
    case PolicySpec::Kind::MultiThreshold:
        return aoii > policy.taus[static_cast<std::size_t>(estimate)];
    case PolicySpec::Kind::SingleThreshold:
        return aoii > policy.tau;
    case PolicySpec::Kind::RandomSampling:
        return rng.bernoulli(policy.alpha);
    }
    return false;
}

ReplicationResult run_replication(const DtmcSource& src, double sigma,
                                  const PenaltySet& penalties, double lambda,
                                  const SimConfig& cfg, int replication,
                                  const std::vector<std::vector<double>>& cdf) {
    const int n = src.size();
    Rng rng(cfg.seed, static_cast<std::uint64_t>(replication));
    ReplicationResult res;
    res.census.assign(n, CensusAccumulator(n));

    int x = 0;    // source state
    int xhat = 0; // estimate
    long aoii = 0;
    double penalty_sum = 0.0;
    long attempts = 0;
    long counted = 0;

    // trajectory cycle tracking; the opening segment before the first
    // post-warmup embedded point is discarded
    bool cycle_open = false;
    int cycle_value = 0;
    long cycle_h = 0, cycle_t = 0, cycle_c = 0;
    double cycle_pen = 0.0;

    for (long slot = 0; slot < cfg.slots; ++slot) {
        const bool in_sync = (x == xhat);
        bool transmit = false;
        if (!in_sync) {
            transmit = decide_transmission(cfg.policy, xhat, aoii, rng);
        }
        const bool count_this_slot = slot >= cfg.warmup;
        if (count_this_slot) {
            if (!in_sync) {
                penalty_sum += penalties[static_cast<std::size_t>(xhat)](aoii);
            }
            attempts += transmit ? 1 : 0;
            ++counted;
            if (cycle_open) {
                if (in_sync) {
                    ++cycle_h;
                } else {
                    ++cycle_t;
                    cycle_c += transmit ? 1 : 0;
                    cycle_pen += penalties[static_cast<std::size_t>(xhat)](aoii);
                }
            }
        }

        // source transition at slot end
        const int x_next = sample_row(cdf[static_cast<std::size_t>(x)], rng.next_double());
        bool delivered = false;
        if (transmit && x_next == x) {
            delivered = rng.bernoulli(sigma); // not preempted
        }
        if (delivered) {
            xhat = x; // sampled value
        }
        const bool sync_next = (x_next == xhat);
        if (sync_next) {
            if (aoii > 0 && count_this_slot) {
                // next slot is an embedded point
                if (cycle_open) {
                    res.census[static_cast<std::size_t>(cycle_value)].record(
                        cycle_h, cycle_t, cycle_c, cycle_pen, x_next);
                }
                cycle_open = true;
                cycle_value = x_next;
                cycle_h = 0;
                cycle_t = 0;
                cycle_c = 0;
                cycle_pen = 0.0;
            }
            aoii = 0;
        } else {
            ++aoii;
        }
        x = x_next;
    }

    res.penalty_sum = penalty_sum;
    res.attempts = static_cast<double>(attempts);
    res.counted = counted;
    res.mean_cost = counted > 0 ? (penalty_sum + lambda * static_cast<double>(attempts)) /
                                      static_cast<double>(counted)
                                : 0.0;
    return res;
}

} // namespace

PolicySpec PolicySpec::multi(std::vector<long> taus) {
    PolicySpec p;
    p.kind = Kind::MultiThreshold;
    p.taus = std::move(taus);
    return p;
}

PolicySpec PolicySpec::single(long tau) {
    PolicySpec p;
    p.kind = Kind::SingleThreshold;
    p.tau = tau;
    return p;
}

PolicySpec PolicySpec::random(double alpha) {
    PolicySpec p;
    p.kind = Kind::RandomSampling;
    p.alpha = alpha;
    return p;
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream) : engine_(splitmix64(seed + stream)) {}

SimStats simulate(const DtmcSource& src, double sigma, const PenaltySet& penalties, double lambda,
                  const SimConfig& cfg) {
    if (cfg.replications < 1 || cfg.slots < 1 || cfg.warmup < 0 || cfg.warmup >= cfg.slots) {
        throw OutOfRange("simulate: need replications >= 1 and 0 <= warmup < slots");
    }
    if (static_cast<int>(penalties.size()) != src.size()) {
        throw DimensionMismatch("simulate: need one penalty per source state");
    }
    if (cfg.policy.kind == PolicySpec::Kind::MultiThreshold &&
        static_cast<int>(cfg.policy.taus.size()) != src.size()) {
        throw DimensionMismatch("simulate: need one threshold per state");
    }
    const auto cdf = row_cdfs(src);
    const int reps = cfg.replications;
    std::vector<ReplicationResult> results(static_cast<std::size_t>(reps));

    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const int workers = static_cast<int>(std::min<unsigned>(hw, static_cast<unsigned>(reps)));
    std::vector<std::future<void>> futures;
    futures.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        futures.push_back(std::async(std::launch::async, [&, w]() {
            for (int r = w; r < reps; r += workers) {
                results[static_cast<std::size_t>(r)] =
                    run_replication(src, sigma, penalties, lambda, cfg, r, cdf);
            }
        }));
    }
    for (auto& f : futures) {
        f.get();
    }

    // merge in replication-index order
    SimStats out;
    out.replications = reps;
    out.rng_identity = Rng::identity;
    Welford cost_across;
    double penalty_total = 0.0, attempts_total = 0.0;
    long counted_total = 0;
    std::vector<CensusAccumulator> census(static_cast<std::size_t>(src.size()),
                                          CensusAccumulator(src.size()));
    for (const auto& r : results) {
        cost_across.add(r.mean_cost);
        penalty_total += r.penalty_sum;
        attempts_total += r.attempts;
        counted_total += r.counted;
        for (std::size_t j = 0; j < census.size(); ++j) {
            const auto& src_census = r.census[j];
            // fold raw counts; means recomputed from counts where needed
            auto fold = [](std::vector<long>& into, const std::vector<long>& from) {
                if (into.size() < from.size()) {
                    into.resize(from.size(), 0);
                }
                for (std::size_t i = 0; i < from.size(); ++i) {
                    into[i] += from[i];
                }
            };
            fold(census[j].t_counts, src_census.t_counts);
            fold(census[j].h_counts, src_census.h_counts);
            fold(census[j].c_counts, src_census.c_counts);
            for (std::size_t i = 0; i < census[j].absorb.size(); ++i) {
                census[j].absorb[i] += src_census.absorb[i];
            }
            // merge Welford accumulators
            auto merge = [](Welford& a, const Welford& b) {
                if (b.n == 0) {
                    return;
                }
                const long n = a.n + b.n;
                const double delta = b.mean - a.mean;
                const double mean =
                    a.mean + delta * static_cast<double>(b.n) / static_cast<double>(n);
                a.m2 = a.m2 + b.m2 + delta * delta * static_cast<double>(a.n) *
                                         static_cast<double>(b.n) / static_cast<double>(n);
                a.mean = mean;
                a.n = n;
            };
            merge(census[j].h, src_census.h);
            merge(census[j].t, src_census.t);
            merge(census[j].c, src_census.c);
            merge(census[j].penalty, src_census.penalty);
        }
    }
    out.slots_counted = counted_total;
    out.mean_aoii_penalty = penalty_total / static_cast<double>(counted_total);
    out.tx_rate = attempts_total / static_cast<double>(counted_total);
    out.mean_cost = out.mean_aoii_penalty + lambda * out.tx_rate;
    out.ci95 = reps > 1 ? 1.96 * std::sqrt(cost_across.variance() / static_cast<double>(reps))
                        : 0.0;
    out.cycle_census.reserve(census.size());
    for (const auto& acc : census) {
        out.cycle_census.push_back(acc.finish());
    }
    return out;
}

CycleCensus cycle_census(const DtmcSource& src, double sigma, int j, long tau, long cycles,
                         std::uint64_t seed, const PolynomialPenalty& f) {
    if (cycles < 1) {
        throw OutOfRange("cycle_census: need cycles >= 1");
    }
    const int n = src.size();
    if (j < 0 || j >= n) {
        throw InvalidState("cycle_census: bad state index");
    }
    if (src.q(j, j) >= 1.0 - 1e-15) {
        throw DegenerateSource("cycle_census: q_jj = 1");
    }
    const auto cdf = row_cdfs(src);
    Rng rng(seed, 0);
    CensusAccumulator acc(n);
    for (long c = 0; c < cycles; ++c) {
        // in-sync interval: slots until the source first leaves j
        long h = 0;
        int x = j;
        for (;;) {
            ++h;
            x = sample_row(cdf[static_cast<std::size_t>(j)], rng.next_double());
            if (x != j) {
                break;
            }
        }
        // out-of-sync interval
        long t = 0;
        long att = 0;
        double pen = 0.0;
        int target = -1;
        for (;;) {
            ++t;
            pen += f(t);
            const bool transmit = t > tau;
            att += transmit ? 1 : 0;
            const int x_next = sample_row(cdf[static_cast<std::size_t>(x)], rng.next_double());
            if (transmit && x_next == x && rng.bernoulli(sigma)) {
                target = x;
                break;
            }
            if (x_next == j) {
                target = j;
                break;
            }
            x = x_next;
        }
        acc.record(h, t, att, pen, target);
    }
    return acc.finish();
}

} // namespace aoii
