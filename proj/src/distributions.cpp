#include "pas/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

#include "pas/error.hpp"

namespace pas {

namespace {

constexpr double kSumTolerance = 1e-12;
constexpr double kLambdaTolerance = 1e-12;
constexpr double kFitTolerance = 1e-9;

std::vector<double> squares(std::span<const int> amplitudes)
{
    std::vector<double> e;
    e.reserve(amplitudes.size());
    for (const int a : amplitudes)
        e.push_back(static_cast<double>(a) * a);
    return e;
}

void check_grouping(std::size_t size, int group_size)
{
    if (size == 0)
        fail(ErrorKind::invalid_parameter, "empty amplitude alphabet");
    if (group_size < 1 || size % static_cast<std::size_t>(group_size) != 0)
        fail(ErrorKind::invalid_parameter,
             "group size " + std::to_string(group_size) + " does not divide alphabet size " + std::to_string(size));
}

std::vector<double> group_energies(std::span<const int> amplitudes, int group_size)
{
    const auto e = squares(amplitudes);
    std::vector<double> g(e.size() / group_size, 0.0);
    for (std::size_t i = 0; i < e.size(); ++i)
        g[i / group_size] += e[i] / group_size;
    return g;
}

// Decreasing function f on [0, ∞); returns λ with f(λ) = target.
double bisect_decreasing(const std::function<double(double)>& f, double target)
{
    double lo = 0.0;
    double hi = 1.0;
    for (int i = 0; f(hi) > target; ++i) {
        if (i > 1100)
            fail(ErrorKind::numerical_error, "lambda bracket search did not terminate");
        lo = hi;
        hi *= 2.0;
    }
    for (int i = 0; i < 400 && hi - lo > kLambdaTolerance * std::max(1.0, hi); ++i) {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) > target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

void AmplitudePmf::validate() const
{
    if (amplitudes.empty() || probs.size() != amplitudes.size())
        fail(ErrorKind::invalid_parameter, "AmplitudePmf: size mismatch");
    double sum = 0.0;
    for (const double p : probs) {
        if (!(p >= 0.0) || p > 1.0)
            fail(ErrorKind::invalid_parameter, "AmplitudePmf: probability outside [0,1]");
        sum += p;
    }
    if (std::abs(sum - 1.0) > kSumTolerance)
        fail(ErrorKind::invalid_parameter, "AmplitudePmf: probabilities do not sum to one");
}

double AmplitudePmf::prob_of(int amplitude) const
{
    const auto it = std::find(amplitudes.begin(), amplitudes.end(), amplitude);
    return it == amplitudes.end() ? 0.0 : probs[static_cast<std::size_t>(it - amplitudes.begin())];
}

AmplitudePmf uniform_pmf(std::span<const int> amplitudes)
{
    check_grouping(amplitudes.size(), 1);
    AmplitudePmf pmf;
    pmf.amplitudes.assign(amplitudes.begin(), amplitudes.end());
    pmf.probs.assign(amplitudes.size(), 1.0 / static_cast<double>(amplitudes.size()));
    pmf.lambda = 0.0;
    return pmf;
}

std::vector<double> boltzmann_weights(double lambda, std::span<const double> energies)
{
    if (energies.empty())
        fail(ErrorKind::invalid_parameter, "boltzmann_weights: empty energy set");
    if (!(lambda >= 0.0))
        fail(ErrorKind::invalid_parameter, "boltzmann_weights: lambda must be nonnegative");
    const double e_min = *std::min_element(energies.begin(), energies.end());
    std::vector<double> w(energies.size());
    for (std::size_t i = 0; i < energies.size(); ++i) {
        const double d = energies[i] - e_min;
        w[i] = std::isinf(lambda) ? (d == 0.0 ? 1.0 : 0.0) : std::exp(-lambda * d);
    }
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    for (auto& x : w)
        x /= total;
    return w;
}

AmplitudePmf mb_pmf(double lambda, std::span<const int> amplitudes)
{
    return partial_mb_pmf(lambda, amplitudes, 1);
}

AmplitudePmf partial_mb_pmf(double lambda, std::span<const int> amplitudes, int group_size)
{
    check_grouping(amplitudes.size(), group_size);
    const auto groups = boltzmann_weights(lambda, group_energies(amplitudes, group_size));
    AmplitudePmf pmf;
    pmf.amplitudes.assign(amplitudes.begin(), amplitudes.end());
    pmf.probs.resize(amplitudes.size());
    for (std::size_t i = 0; i < amplitudes.size(); ++i)
        pmf.probs[i] = groups[i / group_size] / group_size;
    pmf.lambda = lambda;
    pmf.group_size = group_size;
    return pmf;
}

double entropy_bits(std::span<const double> probs)
{
    double h = 0.0;
    for (const double p : probs)
        if (p > 0.0)
            h -= p * std::log2(p);
    return h;
}

PmfStats pmf_stats(const AmplitudePmf& pmf)
{
    pmf.validate();
    PmfStats s;
    s.entropy = entropy_bits(pmf.probs);
    for (std::size_t i = 0; i < pmf.probs.size(); ++i)
        s.avg_energy += pmf.probs[i] * static_cast<double>(pmf.amplitudes[i]) * pmf.amplitudes[i];
    return s;
}

double fit_entropy(double target_bits, std::span<const int> amplitudes, int group_size)
{
    check_grouping(amplitudes.size(), group_size);
    const double h_max = std::log2(static_cast<double>(amplitudes.size()));
    const double h_min = std::log2(static_cast<double>(group_size));
    if (!(target_bits <= h_max + kFitTolerance) || !(target_bits >= h_min - kFitTolerance))
        fail(ErrorKind::infeasible, "fit_entropy: target " + std::to_string(target_bits) + " bits outside [" +
                                        std::to_string(h_min) + ", " + std::to_string(h_max) + "]");
    if (target_bits >= h_max)
        return 0.0;
    if (target_bits <= h_min)
        return std::numeric_limits<double>::infinity();
    const auto entropy = [&](double lambda) {
        return entropy_bits(partial_mb_pmf(lambda, amplitudes, group_size).probs);
    };
    const double lambda = bisect_decreasing(entropy, target_bits);
    if (std::abs(entropy(lambda) - target_bits) > kFitTolerance)
        fail(ErrorKind::numerical_error, "fit_entropy: bisection did not reach the target");
    return lambda;
}

double fit_entropy_energies(double target_bits, std::span<const double> energies)
{
    const double h_max = std::log2(static_cast<double>(energies.size()));
    if (!(target_bits > 0.0 && target_bits <= h_max + kFitTolerance))
        fail(ErrorKind::infeasible, "fit_entropy_energies: target outside (0, log2 |E|]");
    if (target_bits >= h_max)
        return 0.0;
    const auto entropy = [&](double lambda) { return entropy_bits(boltzmann_weights(lambda, energies)); };
    return bisect_decreasing(entropy, target_bits);
}

double fit_energy(double target_energy, std::span<const int> amplitudes, int group_size)
{
    check_grouping(amplitudes.size(), group_size);
    const auto g = group_energies(amplitudes, group_size);
    const double e_uniform = std::accumulate(g.begin(), g.end(), 0.0) / static_cast<double>(g.size());
    const double e_min = *std::min_element(g.begin(), g.end());
    const double tol = kFitTolerance * std::max(1.0, e_uniform);
    if (!(target_energy <= e_uniform + tol) || !(target_energy >= e_min - tol))
        fail(ErrorKind::infeasible, "fit_energy: target " + std::to_string(target_energy) + " outside [" +
                                        std::to_string(e_min) + ", " + std::to_string(e_uniform) + "]");
    if (target_energy >= e_uniform)
        return 0.0;
    if (target_energy <= e_min)
        return std::numeric_limits<double>::infinity();
    const auto energy = [&](double lambda) {
        return pmf_stats(partial_mb_pmf(lambda, amplitudes, group_size)).avg_energy;
    };
    const double lambda = bisect_decreasing(energy, target_energy);
    if (std::abs(energy(lambda) - target_energy) > kFitTolerance * std::max(1.0, target_energy))
        fail(ErrorKind::numerical_error, "fit_energy: bisection did not reach the target");
    return lambda;
}

double shaping_gain_db(double rate, double avg_energy)
{
    if (!(rate > 0.0) || !(avg_energy > 0.0))
        fail(ErrorKind::invalid_parameter, "shaping_gain_db: rate and energy must be positive");
    return 10.0 * std::log10((std::exp2(2.0 * (rate + 1.0)) - 1.0) / (3.0 * avg_energy));
}

double rate_loss(double shaping_rate, double induced_energy, std::span<const int> amplitudes)
{
    const double lambda = fit_energy(induced_energy, amplitudes, 1);
    return pmf_stats(mb_pmf(lambda, amplitudes)).entropy - shaping_rate;
}

BigInt multinomial(const Composition& comp)
{
    long total = 0;
    for (const long c : comp.counts) {
        if (c < 0)
            fail(ErrorKind::invalid_parameter, "composition has a negative count");
        total += c;
    }
    if (total != comp.N)
        fail(ErrorKind::invalid_parameter, "composition counts do not sum to N");
    BigInt value = factorial(static_cast<unsigned>(comp.N));
    for (const long c : comp.counts)
        value /= factorial(static_cast<unsigned>(c));
    return value;
}

CcdmAnalytics ccdm_analytics(const Composition& comp, std::span<const int> amplitudes)
{
    if (comp.counts.size() != amplitudes.size())
        fail(ErrorKind::invalid_parameter, "ccdm_analytics: composition and alphabet sizes differ");
    if (comp.N <= 0)
        fail(ErrorKind::invalid_parameter, "ccdm_analytics: N must be positive");
    const BigInt size = multinomial(comp);
    CcdmAnalytics out;
    out.input_bits = floor_log2(size);
    out.rate = static_cast<double>(out.input_bits) / static_cast<double>(comp.N);
    out.log2_size = log2(size);
    double energy = 0.0;
    for (std::size_t i = 0; i < amplitudes.size(); ++i)
        energy += static_cast<double>(comp.counts[i]) * amplitudes[i] * amplitudes[i];
    out.avg_energy = energy / static_cast<double>(comp.N);
    return out;
}

Composition mb_composition(const AmplitudePmf& pmf, long N)
{
    pmf.validate();
    if (N < 0)
        fail(ErrorKind::invalid_parameter, "mb_composition: N must be nonnegative");
    Composition comp;
    comp.N = N;
    comp.counts.assign(pmf.probs.size(), 0);
    if (N == 0)
        return comp;
    std::vector<double> remainder(pmf.probs.size());
    long assigned = 0;
    for (std::size_t i = 0; i < pmf.probs.size(); ++i) {
        const double share = pmf.probs[i] * static_cast<double>(N);
        comp.counts[i] = static_cast<long>(std::floor(share));
        remainder[i] = share - static_cast<double>(comp.counts[i]);
        assigned += comp.counts[i];
    }
    std::vector<std::size_t> order(pmf.probs.size());
    std::iota(order.begin(), order.end(), 0);
    const auto energy = [&](std::size_t i) { return std::abs(static_cast<long>(pmf.amplitudes[i])); };
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (remainder[a] != remainder[b])
            return remainder[a] > remainder[b];
        return energy(a) < energy(b);
    });
    for (long r = N - assigned, j = 0; r > 0; --r, ++j)
        ++comp.counts[order[static_cast<std::size_t>(j) % order.size()]];
    return comp;
}

Composition ccdm_composition(long N, long input_bits, std::span<const int> amplitudes)
{
    const auto at = [&](double lambda) { return mb_composition(mb_pmf(lambda, amplitudes), N); };
    const auto enough = [&](double lambda) { return floor_log2(multinomial(at(lambda))) >= input_bits; };
    if (!enough(0.0))
        fail(ErrorKind::infeasible, "ccdm_composition: " + std::to_string(input_bits) +
                                        " bits exceed the uniform composition at N=" + std::to_string(N));
    double lo = 0.0;
    double hi = 1.0;
    while (enough(hi)) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e6)
            return at(lo);
    }
    for (int i = 0; i < 80; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (enough(mid))
            lo = mid;
        else
            hi = mid;
    }
    return at(lo);
}

} // namespace pas
