#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "pas/error.hpp"
#include "pas/pess.hpp"

using namespace pas;
using doctest::Approx;

namespace {

UniformLevels random_levels(int u, int N, std::mt19937_64& rng)
{
    UniformLevels lv(static_cast<std::size_t>(u), std::vector<std::uint8_t>(static_cast<std::size_t>(N)));
    for (auto& row : lv)
        for (auto& b : row)
            b = static_cast<std::uint8_t>(rng() & 1u);
    return lv;
}

BigInt random_message(long k, std::mt19937_64& rng)
{
    BigInt x = 0;
    for (long i = 0; i < k; ++i)
        x = (x << 1) | BigInt(rng() & 1u);
    return x;
}

ErrorKind kind_of(auto&& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected a pas::Error");
    return ErrorKind::numerical_error;
}

} // namespace

TEST_CASE("splice and split follow the BRGC layout")
{
    // s = 2, u = 1: reduced amplitude 1 with uniform bit 1 is full amplitude 3.
    const auto p2 = PartialShaper::with_emax(4, 2, 4, 40);
    CHECK(p2.reduced_amplitudes() == std::vector<int>{1, 3, 5, 7});
    CHECK(p2.splice(0, 1) == 3);
    CHECK(p2.split(13) == std::pair<int, std::uint32_t>{3, 1});
    // s = 1, u = 2: shaped bit 1 and uniform bits 10 form label 110, amplitude 9.
    const auto p1 = PartialShaper::with_emax(4, 1, 4, 20);
    CHECK(p1.splice(1, 0b10) == 9);
    CHECK(p1.split(9) == std::pair<int, std::uint32_t>{1, 0b10});
    for (const auto* p : {&p1, &p2})
        for (const int a : p->alphabet().amplitudes) {
            const auto [i, bits] = p->split(a);
            CHECK(p->splice(i, bits) == a);
        }
    CHECK(kind_of([&] { p2.split(4); }) == ErrorKind::invalid_sequence);
}

TEST_CASE("configuration accounting")
{
    const auto p = PartialShaper::with_bits(4, 2, 162, 270);
    CHECK(p.config().u == 1);
    CHECK(p.config().k == 270);
    CHECK(p.exact_trellis().input_bits() >= 270);
    // One grid step less must not carry 270 bits.
    const auto below = build_trellis(162, p.reduced_amplitudes(), p.config().e_max - p.exact_trellis().geometry().step);
    CHECK(below.input_bits() < 270);
    CHECK(p.config().e_max == 1626);

    const auto q = PartialShaper::with_emax(4, 3, 10, 200);
    CHECK(q.config().k == q.exact_trellis().input_bits());
    CHECK(kind_of([] { PartialShaper::with_bits(4, 4, 10, 5); }) == ErrorKind::invalid_parameter);
    CHECK(kind_of([] { PartialShaper::with_bits(1, 0, 10, 5); }) == ErrorKind::invalid_parameter);
    CHECK(kind_of([] { PartialShaper::with_bits(4, 1, 10, 11); }) == ErrorKind::infeasible);
}

TEST_CASE("s = 0 degenerates to uniform signaling")
{
    const auto p = PartialShaper::with_bits(4, 0, 12, 0);
    CHECK(p.config().u == 3);
    std::mt19937_64 rng(3);
    const auto lv = random_levels(3, 12, rng);
    const auto x = p.shape(BigInt(0), lv);
    const auto back = p.deshape(x);
    CHECK(back.message == 0);
    CHECK(back.uniform == lv);
    const auto pmf = p.induced_pmf();
    for (const double q : pmf.probs)
        CHECK(q == Approx(0.125));
}

TEST_CASE("without uniform levels the shaper is plain ESS")
{
    const auto p = PartialShaper::with_bits(4, 3, 30, 70);
    const auto t = build_trellis(30, p.alphabet().amplitudes, p.config().e_max);
    std::mt19937_64 rng(1);
    for (int i = 0; i < 200; ++i) {
        const auto msg = random_message(70, rng);
        CHECK(p.shape(msg, {}) == pas::shape(msg, t));
    }
}

TEST_CASE("property: shape/deshape round trip")
{
    std::mt19937_64 rng(42);
    struct Cfg {
        int s, N;
        long k;
        Precision prec;
    };
    const Cfg cfgs[] = {
        {3, 40, 100, Precision::exact()}, {2, 40, 60, Precision::exact()},  {1, 40, 25, Precision::exact()},
        {3, 40, 100, Precision::fixed(10, 7)}, {2, 40, 60, Precision::fixed(8, 6)}, {1, 40, 25, Precision::fixed(6, 5)},
    };
    for (const auto& c : cfgs) {
        const auto p = PartialShaper::with_bits(4, c.s, c.N, c.k, c.prec);
        CHECK(p.config().k == c.k);
        CHECK(p.shaping_trellis().input_bits() >= c.k);
        for (int trial = 0; trial < 10000 / 6 + 1; ++trial) {
            const auto msg = random_message(c.k, rng);
            const auto lv = random_levels(p.config().u, c.N, rng);
            const auto x = p.shape(msg, lv);
            REQUIRE(static_cast<int>(x.size()) == c.N);
            CHECK(oracle::energy_of([&] {
                      std::vector<int> r;
                      for (const int a : x)
                          r.push_back(p.reduced_amplitudes()[static_cast<std::size_t>(p.split(a).first)]);
                      return r;
                  }()) <= p.config().e_max);
            const auto back = p.deshape(x);
            REQUIRE(back.message == msg);
            REQUIRE(back.uniform == lv);
        }
        const BigInt top = (BigInt(1) << c.k) - 1;
        CHECK(p.deshape(p.shape(top, random_levels(p.config().u, c.N, rng))).message == top);
    }
}

TEST_CASE("input validation")
{
    const auto p = PartialShaper::with_bits(4, 2, 20, 30);
    std::mt19937_64 rng(0);
    const auto lv = random_levels(1, 20, rng);
    CHECK(kind_of([&] { p.shape(BigInt(1) << 30, lv); }) == ErrorKind::invalid_index);
    CHECK(kind_of([&] { p.shape(BigInt(-1), lv); }) == ErrorKind::invalid_index);
    CHECK(kind_of([&] { p.shape(BigInt(0), {}); }) == ErrorKind::invalid_parameter);
    CHECK(kind_of([&] { p.shape(BigInt(0), random_levels(1, 19, rng)); }) == ErrorKind::invalid_parameter);
    CHECK(kind_of([&] { p.deshape(std::vector<int>(19, 1)); }) == ErrorKind::invalid_sequence);
    CHECK(kind_of([&] { p.deshape(std::vector<int>(20, 15)); }) == ErrorKind::invalid_sequence);
    // Inside the sphere but beyond the 2^k sequences a message can reach.
    const BigInt last = p.exact_trellis().sphere_size() - 1;
    REQUIRE(last >= (BigInt(1) << 30));
    std::vector<int> seq;
    for (const int i : shape_symbols(last, p.exact_trellis()))
        seq.push_back(p.splice(i, 0));
    CHECK(kind_of([&] { p.deshape(seq); }) == ErrorKind::invalid_sequence);
}

TEST_CASE("property: induced pmf matches enumeration and has uniform groups")
{
    for (const int s : {1, 2, 3}) {
        const int N = s == 3 ? 4 : 6;
        const auto p = PartialShaper::with_bits(4, s, N, s == 1 ? 4 : 7);
        const auto seqs = oracle::sphere(N, p.reduced_amplitudes(), p.config().e_max);
        REQUIRE(p.exact_trellis().sphere_size() == seqs.size());
        const std::size_t used = std::size_t{1} << p.config().k;
        for (const auto basis : {PmfBasis::all, PmfBasis::used}) {
            const auto freq = oracle::marginal(seqs, basis == PmfBasis::all ? seqs.size() : used);
            const auto red = p.shaper_pmf(basis);
            for (std::size_t i = 0; i < red.size(); ++i) {
                const int a = p.reduced_amplitudes()[i];
                CHECK(red[i] == Approx(freq.contains(a) ? freq.at(a) : 0.0).epsilon(1e-12));
            }
            const auto pmf = p.induced_pmf(basis);
            pmf.validate();
            const int g = 1 << p.config().u;
            CHECK(pmf.group_size == g);
            for (std::size_t i = 0; i < pmf.probs.size(); ++i)
                CHECK(pmf.probs[i] == Approx(pmf.probs[i / g * g]).epsilon(1e-14));
        }
    }
}

TEST_CASE("property: uniform levels are independent of the shaped levels in the output")
{
    // Empirical check over shaped frames with random uniform data.
    const auto p = PartialShaper::with_bits(4, 1, 60, 40);
    std::mt19937_64 rng(8);
    long joint[2][4] = {};
    long total = 0;
    for (int f = 0; f < 3000; ++f) {
        const auto x = p.shape(random_message(40, rng), random_levels(2, 60, rng));
        for (const int a : x) {
            const auto [i, bits] = p.split(a);
            ++joint[i][bits];
            ++total;
        }
    }
    for (int i = 0; i < 2; ++i) {
        const double row = static_cast<double>(joint[i][0] + joint[i][1] + joint[i][2] + joint[i][3]);
        for (int b = 0; b < 4; ++b)
            CHECK(std::abs(static_cast<double>(joint[i][b]) / row - 0.25) < 0.01);
    }
    CHECK(total == 3000 * 60);
}
