#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <type_traits>
#include <string>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include "decisive/chain.hpp"
#include "decisive/numeric.hpp"

namespace decisive {

inline constexpr const char* sim_generator_name = "splitmix64, one stream per trial";

struct SimOptions {
    unsigned threads = 1;
    double confidence = 0.99;
};

struct SampleReport {
    std::uint64_t seed = 0;
    std::string generator = sim_generator_name;
    std::uint64_t trials = 0;
    std::uint64_t hits = 0;
    // Paths still running when the horizon was reached; they count as misses.
    std::uint64_t censored = 0;
    std::uint64_t horizon = 0;
    double confidence = 0.99;
    Rational estimate = 0;
    Rational low = 0;
    Rational high = 1;

    static std::string csv_header();
    std::string csv_row() const;
    bool operator==(const SampleReport&) const = default;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// The SplitMix64 sequence started at `seed`; satisfies UniformRandomBitGenerator.
class SplitMix64 {
public:
    using result_type = std::uint64_t;
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type{0}; }
    result_type operator()() {
        result_type out = splitmix64(state_);
        state_ += 0x9e3779b97f4a7c15ULL;
        return out;
    }

private:
    std::uint64_t state_;
};

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index);

// Bounds rounded outward to a 1e-9 grid and clipped to [0,1].
std::pair<Rational, Rational> wilson_interval(std::uint64_t hits, std::uint64_t trials, double confidence);

// Inverse-CDF sampling over exact probabilities: a uniform 64-bit r selects the
// first i with r < ceil(cum_i * 2^64), i.e. r / 2^64 < cum_i exactly.
class ThresholdTable {
public:
    explicit ThresholdTable(const std::vector<Rational>& probabilities);
    std::size_t pick(std::uint64_t r) const;

private:
    std::vector<unsigned __int128> thresholds_;
};

void finish_report(SampleReport& report);

template <class State, class Hash>
SampleReport estimate_reach(const EffectiveChain<State, Hash>& chain, const State& s0,
                            const std::type_identity_t<std::function<bool(const State&)>>& in_target, std::uint64_t horizon,
                            std::uint64_t trials, std::uint64_t seed, const SimOptions& options = {}) {
    if (horizon == 0 || trials == 0) throw InputError("horizon and trials must be positive");
    struct Row {
        std::vector<State> next;
        ThresholdTable table;
        bool absorbing;
    };
    struct Tally {
        std::uint64_t hits = 0;
        std::uint64_t censored = 0;
    };
    auto run_block = [&](std::uint64_t begin, std::uint64_t end, Tally& tally) {
        std::unordered_map<State, Row, Hash> cache;
        auto row_of = [&](const State& s) -> const Row& {
            auto it = cache.find(s);
            if (it != cache.end()) return it->second;
            Distribution<State> d = chain.successors(s);
            std::vector<State> next;
            std::vector<Rational> probs;
            for (auto& [t, p] : d) {
                next.push_back(std::move(t));
                probs.push_back(std::move(p));
            }
            bool absorbing = next.size() == 1 && next[0] == s;
            return cache.emplace(s, Row{std::move(next), ThresholdTable(probs), absorbing}).first->second;
        };
        for (std::uint64_t trial = begin; trial < end; ++trial) {
            SplitMix64 rng(stream_seed(seed, trial));
            State s = s0;
            bool hit = in_target(s);
            bool dead = false;
            for (std::uint64_t step = 0; step < horizon && !hit && !dead; ++step) {
                const Row& row = row_of(s);
                if (row.absorbing) {
                    dead = true;
                    break;
                }
                s = row.next[row.table.pick(rng())];
                hit = in_target(s);
            }
            if (hit) {
                ++tally.hits;
            } else if (!dead) {
                ++tally.censored;
            }
        }
    };
    const unsigned threads = std::max(1u, options.threads);
    std::vector<Tally> tallies(threads);
    if (threads == 1) {
        run_block(0, trials, tallies[0]);
    } else {
        std::vector<std::thread> workers;
        std::vector<std::exception_ptr> errors(threads);
        for (unsigned w = 0; w < threads; ++w) {
            std::uint64_t begin = trials * w / threads;
            std::uint64_t end = trials * (w + 1) / threads;
            workers.emplace_back([&, w, begin, end] {
                try {
                    run_block(begin, end, tallies[w]);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        for (auto& t : workers) t.join();
        for (auto& e : errors) {
            if (e) std::rethrow_exception(e);
        }
    }
    SampleReport report;
    report.seed = seed;
    report.trials = trials;
    report.horizon = horizon;
    report.confidence = options.confidence;
    for (const auto& t : tallies) {
        report.hits += t.hits;
        report.censored += t.censored;
    }
    finish_report(report);
    return report;
}

// Same sampling scheme specialised to the one-counter walk with weights dec(n), inc(n)
// and target 0; paths that can no longer return to 0 before the horizon are cut short.
SampleReport estimate_walk(const Polynomial& dec, const Polynomial& inc, std::uint64_t start, std::uint64_t horizon,
                           std::uint64_t trials, std::uint64_t seed, const SimOptions& options = {});

}  // namespace decisive
