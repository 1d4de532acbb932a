#include "decisive/sim.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/distributions/normal.hpp>

namespace decisive {

namespace {

constexpr unsigned __int128 two_to_64 = static_cast<unsigned __int128>(1) << 64;

unsigned __int128 ceil_scaled(const Rational& x) {
    // ceil(x * 2^64) for 0 <= x <= 1
    Integer num = x.get_num();
    num <<= 64;
    Integer q;
    mpz_cdiv_q(q.get_mpz_t(), num.get_mpz_t(), x.get_den_mpz_t());
    unsigned __int128 hi = mpz_class(q >> 64).get_ui();
    unsigned __int128 lo = mpz_class(q & Integer("18446744073709551615")).get_ui();
    return (hi << 64) | lo;
}

Rational grid_floor(double x) {
    const double scaled = std::floor(x * 1e9);
    return make_rational(Integer(static_cast<long>(std::max(0.0, scaled))), 1'000'000'000);
}

Rational grid_ceil(double x) {
    const double scaled = std::ceil(x * 1e9);
    return make_rational(Integer(static_cast<long>(std::min(1e9, scaled))), 1'000'000'000);
}

}  // namespace

std::string SampleReport::csv_header() { return "seed,trials,hits,censored,low,high"; }

std::string SampleReport::csv_row() const {
    std::ostringstream out;
    out << seed << "," << trials << "," << hits << "," << censored << "," << to_decimal(low, 9) << ","
        << to_decimal(high, 9);
    return out.str();
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

std::pair<Rational, Rational> wilson_interval(std::uint64_t hits, std::uint64_t trials, double confidence) {
    if (trials == 0) throw InputError("no trials");
    if (!(confidence > 0 && confidence < 1)) throw InputError("confidence must lie in (0,1)");
    boost::math::normal normal;
    const double z = boost::math::quantile(normal, 1 - (1 - confidence) / 2);
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(hits) / n;
    const double z2 = z * z;
    const double denom = 1 + z2 / n;
    const double center = (p + z2 / (2 * n)) / denom;
    const double half = z / denom * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n));
    return {grid_floor(center - half), grid_ceil(center + half)};
}

ThresholdTable::ThresholdTable(const std::vector<Rational>& probabilities) {
    Rational cum = 0;
    for (std::size_t i = 0; i < probabilities.size(); ++i) {
        cum += probabilities[i];
        thresholds_.push_back(i + 1 == probabilities.size() ? two_to_64 : ceil_scaled(cum));
    }
}

std::size_t ThresholdTable::pick(std::uint64_t r) const {
    for (std::size_t i = 0; i < thresholds_.size(); ++i) {
        if (r < thresholds_[i]) return i;
    }
    return thresholds_.size() - 1;
}

void finish_report(SampleReport& report) {
    report.estimate = make_rational(Integer(static_cast<unsigned long>(report.hits)),
                                    Integer(static_cast<unsigned long>(report.trials)));
    auto [low, high] = wilson_interval(report.hits, report.trials, report.confidence);
    report.low = low;
    report.high = high;
}

SampleReport estimate_walk(const Polynomial& dec, const Polynomial& inc, std::uint64_t start, std::uint64_t horizon,
                           std::uint64_t trials, std::uint64_t seed, const SimOptions& options) {
    if (horizon == 0 || trials == 0) throw InputError("horizon and trials must be positive");
    const std::uint64_t top = start + horizon;
    // down[n] = ceil(2^64 * dec(n) / (dec(n) + inc(n))); a draw below it moves down.
    std::vector<unsigned __int128> down(top + 1, 0);
    for (std::uint64_t n = 1; n <= top; ++n) {
        Integer a = dec.evaluate_at(n);
        Integer b = inc.evaluate_at(n);
        if (a < 0 || b < 0 || a + b == 0) throw InputError("walk weights must be positive");
        down[n] = ceil_scaled(make_rational(a, a + b));
    }
    struct Tally {
        std::uint64_t hits = 0;
        std::uint64_t censored = 0;
    };
    auto run_block = [&](std::uint64_t begin, std::uint64_t end, Tally& tally) {
        for (std::uint64_t trial = begin; trial < end; ++trial) {
            SplitMix64 rng(stream_seed(seed, trial));
            std::uint64_t n = start;
            bool hit = n == 0;
            for (std::uint64_t step = 0; step < horizon && !hit; ++step) {
                if (n > horizon - step) break;
                n = rng() < down[n] ? n - 1 : n + 1;
                hit = n == 0;
            }
            if (hit) {
                ++tally.hits;
            } else {
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
        for (unsigned w = 0; w < threads; ++w) {
            workers.emplace_back([&, w] { run_block(trials * w / threads, trials * (w + 1) / threads, tallies[w]); });
        }
        for (auto& t : workers) t.join();
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

}  // namespace decisive
