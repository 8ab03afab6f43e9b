#include "promptgen/similarity.hpp"

#include "promptgen/unicode.hpp"
#include "support/oracles.hpp"

#include <doctest.h>

#include <random>
#include <stdexcept>

using namespace promptgen;

TEST_CASE("jaro hand-computed vectors") {
    CHECK(jaro("MARTHA", "MARHTA") == doctest::Approx(0.944444).epsilon(1e-6));
    CHECK(jaro("DWAYNE", "DUANE") == doctest::Approx(0.822222).epsilon(1e-6));
    CHECK(jaro("abc", "abc") == 1.0);
    CHECK(jaro("abc", "xyz") == 0.0);
}

TEST_CASE("jaro empty-string conventions") {
    CHECK(jaro("", "") == 1.0);
    CHECK(jaro("", "abc") == 0.0);
    CHECK(jaro("abc", "") == 0.0);
}

TEST_CASE("jaro single characters match despite the window formula") {
    CHECK(jaro("a", "a") == 1.0);
    CHECK(jaro("a", "b") == 0.0);
    CHECK(jaro("ab", "ab") == 1.0);
}

TEST_CASE("jaro-winkler hand-computed vectors") {
    CHECK(jaro_winkler("MARTHA", "MARHTA") == doctest::Approx(0.961111).epsilon(1e-6));
    CHECK(jaro_winkler("DWAYNE", "DUANE") == doctest::Approx(0.840000).epsilon(1e-6));
    CHECK(jaro_winkler("", "") == 1.0);
}

TEST_CASE("jaro-winkler parameter validation") {
    SimilarityParams params;
    params.prefix_scale = 0.3;
    CHECK_THROWS_AS(jaro_winkler("a", "b", params), std::invalid_argument);
    params.prefix_scale = 0.2;
    params.max_prefix = 6; // 0.2 * 6 > 1 would allow results above 1
    CHECK_THROWS_AS(jaro_winkler("a", "b", params), std::invalid_argument);
    params.max_prefix = 4;
    CHECK_NOTHROW(jaro_winkler("a", "b", params));
}

TEST_CASE("comparison is over code points, not bytes") {
    // Byte-wise comparison would see the shared UTF-8 lead byte of Ä/Ö as a
    // match; code-point comparison must not.
    CHECK(jaro("Ä", "Ö") == 0.0);
    CHECK(jaro_winkler("Änderung", "Änderung") == 1.0);
    const auto a = decode_utf8("Datum der letzten Änderung");
    const auto b = decode_utf8("datum der letzten anderung");
    CHECK(jaro(a, b) == doctest::Approx(oracle::jaro(a, b)).epsilon(1e-12));
}

TEST_CASE("similarity properties over random strings") {
    std::mt19937 rng(1234);
    std::uniform_int_distribution<int> len_dist(0, 12);
    const std::u32string alphabet = U"abcdeäöü ";
    std::uniform_int_distribution<std::size_t> char_dist(0, alphabet.size() - 1);

    auto random_string = [&] {
        std::u32string s;
        const int len = len_dist(rng);
        for (int i = 0; i < len; ++i) {
            s.push_back(alphabet[char_dist(rng)]);
        }
        return s;
    };

    for (int trial = 0; trial < 2000; ++trial) {
        const std::u32string s1 = random_string();
        const std::u32string s2 = random_string();
        const double j12 = jaro(s1, s2);
        const double j21 = jaro(s2, s1);
        const double w12 = jaro_winkler(s1, s2);
        const double w21 = jaro_winkler(s2, s1);

        CHECK(j12 == j21);          // symmetry
        CHECK(w12 == w21);
        CHECK(j12 >= 0.0);          // range
        CHECK(j12 <= 1.0);
        CHECK(w12 >= 0.0);
        CHECK(w12 <= 1.0);
        CHECK(w12 >= j12);          // prefix bonus never hurts
        CHECK(jaro_winkler(s1, s1) == 1.0); // identity
    }
}

TEST_CASE("matches brute-force oracle on short strings") {
    const auto strings = oracle::all_strings(U"abc", 4);
    for (const auto& s1 : strings) {
        for (const auto& s2 : strings) {
            CHECK(jaro(s1, s2) == doctest::Approx(oracle::jaro(s1, s2)).epsilon(1e-9));
            CHECK(jaro_winkler(s1, s2) ==
                  doctest::Approx(oracle::jaro_winkler(s1, s2)).epsilon(1e-9));
        }
    }
}
