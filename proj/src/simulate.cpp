#include "pas/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <thread>

#include "pas/error.hpp"

namespace pas {

namespace {

std::uint64_t splitmix64(std::uint64_t& state)
{
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

struct FrameOutcome {
    bool error = false;
    bool deshape_failed = false;
    long bit_errors = 0;
};

FrameOutcome run_frame(const PasLink& link, double sigma, std::uint64_t seed, std::uint64_t index, int max_iter)
{
    auto rng = frame_rng(seed, index);
    const auto data = random_bits(static_cast<std::size_t>(link.data_bits()), rng);
    const auto x = link.transmit(data);
    const auto y = awgn(x, sigma, rng);
    const auto rx = link.receive(y, sigma, max_iter);
    FrameOutcome out;
    for (std::size_t i = 0; i < data.size(); ++i)
        out.bit_errors += data[i] != rx.data[i];
    out.deshape_failed = !rx.deshape_ok;
    out.error = out.deshape_failed || out.bit_errors > 0;
    return out;
}

} // namespace

std::mt19937_64 frame_rng(std::uint64_t seed, std::uint64_t index)
{
    std::uint64_t state = seed;
    const std::uint64_t a = splitmix64(state);
    state = a ^ index;
    const std::uint64_t b = splitmix64(state);
    const std::uint64_t c = splitmix64(state);
    std::seed_seq seq{static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32),
                      static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32)};
    return std::mt19937_64(seq);
}

std::vector<std::uint8_t> random_bits(std::size_t count, std::mt19937_64& rng)
{
    std::vector<std::uint8_t> bits(count);
    std::uint64_t word = 0;
    for (std::size_t i = 0; i < count; ++i) {
        if (i % 64 == 0)
            word = rng();
        bits[i] = static_cast<std::uint8_t>((word >> (i % 64)) & 1u);
    }
    return bits;
}

void finalize_interval(FerResult& r)
{
    if (r.frames <= 0) {
        r.fer = r.ci_low = r.ci_high = 0.0;
        return;
    }
    r.fer = static_cast<double>(r.frame_errors) / static_cast<double>(r.frames);
    const double half = 1.96 * std::sqrt(r.fer * (1.0 - r.fer) / static_cast<double>(r.frames));
    r.ci_low = std::max(0.0, r.fer - half);
    r.ci_high = std::min(1.0, r.fer + half);
}

FerResult simulate_point(const PasLink& link, double snr_db, const StopRule& stop, const SimulationOptions& options)
{
    if (stop.min_errors < 1 || stop.max_frames < 1)
        fail(ErrorKind::invalid_parameter, "stop rule needs min_errors >= 1 and max_frames >= 1");
    const double sigma = link.sigma_for_snr(snr_db);
    const unsigned workers =
        options.threads > 0 ? static_cast<unsigned>(options.threads) : std::max(1u, std::thread::hardware_concurrency());
    const long max_batch = std::max<long>(options.batch, 1);
    // Small first batches avoid wasted frames when errors come quickly.
    long batch = std::min<long>(max_batch, 2L * workers);

    FerResult res;
    res.snr_db = snr_db;
    std::vector<FrameOutcome> outcomes;
    for (long start = 0; start < stop.max_frames && res.frame_errors < stop.min_errors;
         start += batch, batch = std::min(2 * batch, max_batch)) {
        const long count = std::min(batch, stop.max_frames - start);
        outcomes.assign(static_cast<std::size_t>(count), {});
        std::atomic<long> next{0};
        std::exception_ptr error;
        std::mutex error_mutex;
        const auto work = [&] {
            for (long i = next++; i < count; i = next++) {
                try {
                    outcomes[static_cast<std::size_t>(i)] = run_frame(
                        link, sigma, options.seed, static_cast<std::uint64_t>(start + i), options.max_iterations);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error)
                        error = std::current_exception();
                }
            }
        };
        std::vector<std::thread> pool;
        for (unsigned w = 1; w < std::min<unsigned>(workers, static_cast<unsigned>(count)); ++w)
            pool.emplace_back(work);
        work();
        for (auto& t : pool)
            t.join();
        if (error)
            std::rethrow_exception(error);
        for (const auto& o : outcomes) {
            ++res.frames;
            res.bit_errors += o.bit_errors;
            res.deshape_failures += o.deshape_failed;
            if (o.error && ++res.frame_errors >= stop.min_errors)
                break;
        }
    }
    finalize_interval(res);
    return res;
}

std::vector<FerResult> simulate(const PasLink& link, std::span<const double> snrs, const StopRule& stop,
                                const SimulationOptions& options)
{
    std::vector<FerResult> out;
    out.reserve(snrs.size());
    for (const double snr : snrs)
        out.push_back(simulate_point(link, snr, stop, options));
    return out;
}

void write_fer_csv(std::ostream& out, std::span<const FerResult> results, const std::string& config_id, bool header)
{
    if (header)
        out << "snr_db,frames,frame_errors,fer,ci_low,ci_high,config_id\n";
    const auto flags = out.flags();
    const auto precision = out.precision();
    out << std::setprecision(6) << std::defaultfloat;
    for (const auto& r : results)
        out << r.snr_db << ',' << r.frames << ',' << r.frame_errors << ',' << r.fer << ',' << r.ci_low << ','
            << r.ci_high << ',' << config_id << '\n';
    out.flags(flags);
    out.precision(precision);
}

} // namespace pas
