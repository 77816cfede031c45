#include "pas/rate_loss.hpp"

#include <cmath>

#include "pas/constellation.hpp"
#include "pas/distributions.hpp"
#include "pas/error.hpp"
#include "pas/trellis.hpp"

namespace pas {

namespace {

long bits_for(double rate, int N)
{
    return static_cast<long>(std::ceil(rate * N - 1e-9));
}

// Mean energy of the 2^u consecutive full-alphabet amplitudes that share a
// reduced amplitude index, averaged under the reduced PMF.
double spread_energy(const std::vector<double>& reduced_pmf, int u)
{
    const int group = 1 << u;
    double e = 0.0;
    for (std::size_t i = 0; i < reduced_pmf.size(); ++i) {
        double mean = 0.0;
        for (int j = 0; j < group; ++j) {
            const double a = 2.0 * (static_cast<double>(i) * group + j) + 1.0;
            mean += a * a;
        }
        e += reduced_pmf[i] * mean / group;
    }
    return e;
}

} // namespace

RateLossPoint sphere_rate_loss(int m, int s, int N, double target_rate)
{
    if (s < 1 || s > m - 1)
        fail(ErrorKind::invalid_parameter, "sphere_rate_loss: need 1 <= s <= m-1");
    const int u = m - 1 - s;
    if (!(target_rate > u) || target_rate > m - 1)
        fail(ErrorKind::invalid_parameter, "sphere_rate_loss: target rate must lie in (u, m-1]");
    std::vector<int> reduced;
    for (int i = 0; i < (1 << s); ++i)
        reduced.push_back(2 * i + 1);
    RateLossPoint p;
    p.N = N;
    p.input_bits = bits_for(target_rate - u, N);
    const long long e_max = find_emax(N, reduced, p.input_bits);
    const auto summary = sphere_summary(N, reduced, e_max);
    p.rate = log2(summary.size) / N + u;
    p.energy = spread_energy(summary.pmf, u);
    p.loss = rate_loss(p.rate, p.energy, build_alphabet(m).amplitudes);
    return p;
}

RateLossPoint ccdm_rate_loss(int m, int N, double target_rate)
{
    const auto amps = build_alphabet(m).amplitudes;
    RateLossPoint p;
    p.N = N;
    p.input_bits = bits_for(target_rate, N);
    const auto comp = ccdm_composition(N, p.input_bits, amps);
    const auto stats = ccdm_analytics(comp, amps);
    p.rate = stats.log2_size / N;
    p.energy = stats.avg_energy;
    p.loss = rate_loss(p.rate, p.energy, amps);
    return p;
}

double asymptotic_rate_loss(int m, int s, double target_rate)
{
    const auto amps = build_alphabet(m).amplitudes;
    const int group = 1 << (m - 1 - s);
    const auto pmf = partial_mb_pmf(fit_entropy(target_rate, amps, group), amps, group);
    return rate_loss(target_rate, pmf_stats(pmf).avg_energy, amps);
}

} // namespace pas
