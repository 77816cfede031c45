#include "pas/air.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <thread>

#include <Eigen/Eigenvalues>

#include "pas/error.hpp"

namespace pas {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

struct SignedPoint {
    double x;
    double prob;
    std::uint32_t label; // m bits, sign is the most significant
};

std::vector<SignedPoint> signed_points(const InputSpec& input)
{
    const int amp_bits = input.labeling.num_bits();
    std::vector<SignedPoint> pts;
    for (std::size_t i = 0; i < input.pmf.amplitudes.size(); ++i) {
        const int a = input.pmf.amplitudes[i];
        const std::uint32_t amp_label = input.labeling.label(static_cast<int>(i));
        for (std::uint8_t b = 0; b < 2; ++b)
            pts.push_back({static_cast<double>(sign_of_bit(b) * a), input.pmf.probs[i] / 2.0,
                           (static_cast<std::uint32_t>(b) << amp_bits) | amp_label});
    }
    return pts;
}

double log_sum_exp(const std::vector<double>& v, const std::vector<SignedPoint>& pts, int bit_pos, int bit)
{
    double hi = -kInf;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (bit < 0 || static_cast<int>((pts[i].label >> bit_pos) & 1u) == bit)
            hi = std::max(hi, v[i]);
    if (hi == -kInf)
        return -kInf;
    double sum = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (bit < 0 || static_cast<int>((pts[i].label >> bit_pos) & 1u) == bit)
            sum += std::exp(v[i] - hi);
    return hi + std::log(sum);
}

template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn)
{
    const std::size_t workers = std::min<std::size_t>(count, std::max(1u, std::thread::hardware_concurrency()));
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error)
                        error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool)
        t.join();
    if (error)
        std::rethrow_exception(error);
}

} // namespace

double awgn_capacity(double snr_db)
{
    if (snr_db == -kInf)
        return 0.0;
    return 0.5 * std::log2(1.0 + db_to_linear(snr_db));
}

double capacity_snr_db(double rate)
{
    return 10.0 * std::log10(std::exp2(2.0 * rate) - 1.0);
}

ChannelSpec channel_for_snr(double snr_db, double input_power)
{
    if (!std::isfinite(snr_db) || !(input_power > 0.0))
        fail(ErrorKind::invalid_parameter, "channel needs a finite SNR and positive input power");
    return {snr_db, input_power / db_to_linear(snr_db)};
}

double InputSpec::power() const { return pmf_stats(pmf).avg_energy; }

double InputSpec::entropy() const { return pmf_stats(pmf).entropy + 1.0; }

InputSpec make_input(AmplitudePmf pmf)
{
    pmf.validate();
    const auto n = pmf.amplitudes.size();
    if (n < 2 || (n & (n - 1)) != 0)
        fail(ErrorKind::invalid_parameter, "input alphabet size must be a power of two >= 2");
    for (std::size_t i = 0; i < n; ++i)
        if (pmf.amplitudes[i] != static_cast<int>(2 * i + 1))
            fail(ErrorKind::invalid_parameter, "input amplitudes must be 1, 3, ..., 2^m - 1");
    const int bits = std::countr_zero(n);
    return {std::move(pmf), brgc_labels(bits)};
}

const GaussHermite& gauss_hermite(int order)
{
    static std::mutex mutex;
    static std::map<int, GaussHermite> cache;
    if (order < 1 || order > 1024)
        fail(ErrorKind::invalid_parameter, "Gauss-Hermite order must lie in [1, 1024]");
    std::lock_guard lock(mutex);
    auto it = cache.find(order);
    if (it != cache.end())
        return it->second;
    // Golub-Welsch: nodes are the eigenvalues of the Jacobi matrix of the
    // Hermite recurrence, weights come from the first eigenvector components.
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(order);
    Eigen::VectorXd sub(std::max(order - 1, 0));
    for (int k = 1; k < order; ++k)
        sub(k - 1) = std::sqrt(k / 2.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success)
        fail(ErrorKind::numerical_error, "Gauss-Hermite eigen-decomposition failed");
    GaussHermite gh;
    const double sqrt_pi = std::sqrt(std::acos(-1.0));
    for (int k = 0; k < order; ++k) {
        gh.nodes.push_back(solver.eigenvalues()(k));
        const double v = solver.eigenvectors()(0, k);
        gh.weights.push_back(sqrt_pi * v * v);
    }
    return cache.emplace(order, std::move(gh)).first->second;
}

double bmd_rate(const InputSpec& input, double snr_db)
{
    if (snr_db == -kInf)
        return 0.0;
    if (std::isnan(snr_db))
        fail(ErrorKind::numerical_error, "bmd_rate: SNR is NaN");
    const auto& gh = gauss_hermite();
    const auto pts = signed_points(input);
    const int m = input.m();
    const double sigma2 = channel_for_snr(snr_db, input.power()).noise_variance;
    const double scale = std::sqrt(2.0 * sigma2);
    const double inv_sqrt_pi = 1.0 / std::sqrt(std::acos(-1.0));

    std::vector<double> log_prior(pts.size());
    double hx = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        log_prior[i] = pts[i].prob > 0.0 ? std::log(pts[i].prob) : -kInf;
        if (pts[i].prob > 0.0)
            hx -= pts[i].prob * std::log2(pts[i].prob);
    }

    double cond = 0.0;
    std::vector<double> metric(pts.size());
    for (const auto& tx : pts) {
        if (tx.prob <= 0.0)
            continue;
        double expectation = 0.0;
        for (std::size_t k = 0; k < gh.nodes.size(); ++k) {
            const double y = tx.x + scale * gh.nodes[k];
            for (std::size_t i = 0; i < pts.size(); ++i) {
                const double d = y - pts[i].x;
                metric[i] = log_prior[i] - d * d / (2.0 * sigma2);
            }
            const double all = log_sum_exp(metric, pts, 0, -1);
            double loss = 0.0;
            for (int pos = 0; pos < m; ++pos) {
                const int bit = static_cast<int>((tx.label >> pos) & 1u);
                loss += all - log_sum_exp(metric, pts, pos, bit);
            }
            expectation += gh.weights[k] * loss;
        }
        cond += tx.prob * expectation * inv_sqrt_pi / std::log(2.0);
    }
    const double rate = hx - cond;
    if (!std::isfinite(rate))
        fail(ErrorKind::numerical_error, "bmd_rate: quadrature produced a non-finite value");
    return std::max(rate, 0.0);
}

double snr_for_rate(const InputSpec& input, double target_rate)
{
    if (!(target_rate > 0.0))
        fail(ErrorKind::invalid_parameter, "snr_for_rate: target rate must be positive");
    const double hx = input.entropy();
    if (target_rate >= hx - 1e-9)
        fail(ErrorKind::infeasible, "snr_for_rate: target rate is not below H(X)");
    double lo = -20.0;
    while (bmd_rate(input, lo) >= target_rate) {
        lo -= 20.0;
        if (lo < -200.0)
            fail(ErrorKind::numerical_error, "snr_for_rate: no lower SNR bracket");
    }
    double hi = lo + 20.0;
    while (bmd_rate(input, hi) < target_rate) {
        lo = hi;
        hi += 20.0;
        if (hi > 200.0)
            fail(ErrorKind::infeasible, "snr_for_rate: rate unreachable below 200 dB");
    }
    for (int it = 0; it < 200 && hi - lo > 1e-9; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double r = bmd_rate(input, mid);
        if (std::abs(r - target_rate) < 1e-9)
            return mid;
        (r < target_rate ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

std::vector<GapPoint> gap_sweep(int m, int shaped_bits, double target_rate, std::span<const double> entropies)
{
    if (shaped_bits < 0 || shaped_bits > m - 1)
        fail(ErrorKind::invalid_parameter, "gap_sweep: shaped bits must lie in [0, m-1]");
    if (!(target_rate > 0.0) || target_rate >= m)
        fail(ErrorKind::invalid_parameter, "gap_sweep: need 0 < R_t < m");
    const auto alphabet = build_alphabet(m);
    const int group = 1 << (m - 1 - shaped_bits);
    const double reference = capacity_snr_db(target_rate);
    for (const double h : entropies)
        if (h < target_rate - 1e-12 || h > m + 1e-12)
            fail(ErrorKind::invalid_parameter, "gap_sweep: entropy grid must lie in [R_t, m]");
    std::vector<GapPoint> out(entropies.size());
    parallel_for(entropies.size(), [&](std::size_t i) {
        GapPoint p;
        p.entropy = entropies[i];
        const double target_h = std::min(p.entropy - 1.0, static_cast<double>(m - 1));
        p.lambda = fit_entropy(target_h, alphabet.amplitudes, group);
        const auto input = make_input(partial_mb_pmf(p.lambda, alphabet.amplitudes, group));
        if (target_rate >= input.entropy() - 1e-9) {
            p.snr_db = kInf;
        } else {
            p.snr_db = snr_for_rate(input, target_rate);
        }
        p.delta_snr_db = p.snr_db - reference;
        out[i] = p;
    });
    return out;
}

std::vector<double> entropy_grid(double from, double to, double step)
{
    if (!(step > 0.0) || to < from)
        fail(ErrorKind::invalid_parameter, "entropy_grid: need step > 0 and to >= from");
    std::vector<double> grid;
    const auto n = static_cast<long>(std::floor((to - from) / step + 1e-9));
    for (long i = 0; i <= n; ++i)
        grid.push_back(from + static_cast<double>(i) * step);
    return grid;
}

} // namespace pas
