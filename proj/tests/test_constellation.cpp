#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>

#include "pas/constellation.hpp"
#include "pas/error.hpp"

using namespace pas;

TEST_CASE("16-ASK alphabet splits into signs and amplitudes")
{
    const auto a = build_alphabet(4);
    CHECK(a.order() == 16);
    CHECK(a.amplitude_bits() == 3);
    CHECK(a.amplitudes == std::vector<int>{1, 3, 5, 7, 9, 11, 13, 15});
    const auto pts = a.points();
    REQUIRE(pts.size() == 16);
    CHECK(pts.front() == -15);
    CHECK(pts.back() == 15);
    CHECK(a.index_of(9) == 4);
    CHECK(a.index_of(4) == -1);
    CHECK(a.index_of(17) == -1);
    CHECK_THROWS_AS(build_alphabet(1), Error);
    CHECK_THROWS_AS(build_alphabet(17), Error);
}

TEST_CASE("sign bit convention")
{
    CHECK(sign_of_bit(0) == 1);
    CHECK(sign_of_bit(1) == -1);
    CHECK(bit_of_sign(-3) == 1);
    CHECK(bit_of_sign(5) == 0);
}

TEST_CASE("BRGC amplitude labels of 16-ASK")
{
    // Rows B2, B3, B4 for amplitudes 1, 3, ..., 15.
    const int b2[] = {0, 0, 0, 0, 1, 1, 1, 1};
    const int b3[] = {0, 0, 1, 1, 1, 1, 0, 0};
    const int b4[] = {0, 1, 1, 0, 0, 1, 1, 0};
    const auto lab = brgc_labels(3);
    for (int i = 0; i < 8; ++i) {
        CHECK(lab.bit(i, 0) == b2[i]);
        CHECK(lab.bit(i, 1) == b3[i]);
        CHECK(lab.bit(i, 2) == b4[i]);
        CHECK(lab.amplitude_of_label(lab.label_of_amplitude(2 * i + 1)) == 2 * i + 1);
    }
}

TEST_CASE("BRGC neighbours differ in exactly one bit")
{
    for (int bits = 1; bits <= 8; ++bits) {
        const auto lab = brgc_labels(bits);
        for (int i = 0; i + 1 < lab.size(); ++i)
            CHECK(std::popcount(lab.label(i) ^ lab.label(i + 1)) == 1);
    }
}

TEST_CASE("labeling rejects non-bijective tables")
{
    CHECK_THROWS_AS(AmplitudeLabeling(2, {0, 1, 1, 3}), Error);
    CHECK_THROWS_AS(AmplitudeLabeling(2, {0, 1, 2}), Error);
    CHECK_NOTHROW(AmplitudeLabeling(2, {3, 2, 1, 0}));
}

TEST_CASE("energy sets")
{
    CHECK(ask_energy_set(4).energies == std::vector<long long>{1, 9, 25, 49});
    const auto paired = pair_energy_set(ask_energy_set(4), 1);
    // Mean energies of {1,3}, {5,7}, {9,11}, {13,15} are 4e+1.
    CHECK(paired.energies == std::vector<long long>{5, 37, 101, 197});
    CHECK(pair_energy_set(ask_energy_set(4), 0).energies == ask_energy_set(4).energies);
    CHECK_THROWS_AS(pair_energy_set(EnergySet{{1, 4}}, 1), Error);
    CHECK_THROWS_AS(pair_energy_set(ask_energy_set(2), 2), Error);
}
