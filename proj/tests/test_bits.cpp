#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>
#include <vector>

#include "costar/bits.hpp"

using costar::Bits;

TEST_CASE("bits basic set/reset/test", "[bits]") {
    Bits b(10);
    REQUIRE(b.width() == 10);
    REQUIRE(b.none());
    REQUIRE(b.count() == 0);

    b.set(3);
    b.set(9);
    REQUIRE(b.test(3));
    REQUIRE(b.test(9));
    REQUIRE_FALSE(b.test(0));
    REQUIRE(b.count() == 2);
    REQUIRE(b.any());

    b.reset(3);
    REQUIRE_FALSE(b.test(3));
    REQUIRE(b.count() == 1);
}

TEST_CASE("bits word-boundary behaviour", "[bits]") {
    Bits b(130);
    for (int i : {0, 63, 64, 65, 127, 128, 129}) b.set(i);
    REQUIRE(b.count() == 7);
    REQUIRE(b.to_vector() == std::vector<int>{0, 63, 64, 65, 127, 128, 129});

    Bits f = b.flipped();
    REQUIRE(f.count() == 130 - 7);
    for (int i : {0, 63, 64, 65, 127, 128, 129}) REQUIRE_FALSE(f.test(i));
    REQUIRE(f.test(1));
    REQUIRE(f.test(126));

    // flipped() must not leak bits beyond the declared width
    REQUIRE((b | f).count() == 130);
    REQUIRE((b & f).none());
}

TEST_CASE("bits find_first / find_next iteration", "[bits]") {
    Bits b(70);
    REQUIRE(b.find_first() == -1);
    b.set(5);
    b.set(64);
    b.set(69);
    REQUIRE(b.find_first() == 5);
    REQUIRE(b.find_next(5) == 64);
    REQUIRE(b.find_next(64) == 69);
    REQUIRE(b.find_next(69) == -1);
    REQUIRE(b.find_next(0) == 5);
}

TEST_CASE("bits set algebra", "[bits]") {
    Bits a(8), b(8);
    a.set(1);
    a.set(2);
    a.set(3);
    b.set(3);
    b.set(4);

    REQUIRE((a | b).to_vector() == std::vector<int>{1, 2, 3, 4});
    REQUIRE((a & b).to_vector() == std::vector<int>{3});
    REQUIRE((a ^ b).to_vector() == std::vector<int>{1, 2, 4});
    REQUIRE(and_not(a, b).to_vector() == std::vector<int>{1, 2});

    Bits c = a;
    c.remove(b);
    REQUIRE(c.to_vector() == std::vector<int>{1, 2});
    REQUIRE(a.intersects(b));
    REQUIRE_FALSE(c.intersects(b));
    REQUIRE(c.is_subset_of(a));
    REQUIRE_FALSE(a.is_subset_of(c));
}

TEST_CASE("bits randomized agreement with std::set", "[bits]") {
    std::mt19937 rng(12345);
    for (int trial = 0; trial < 50; ++trial) {
        int n = 1 + static_cast<int>(rng() % 150);
        Bits b(n);
        std::set<int> ref;
        for (int step = 0; step < 100; ++step) {
            int i = static_cast<int>(rng() % static_cast<unsigned>(n));
            if (rng() & 1) {
                b.set(i);
                ref.insert(i);
            } else {
                b.reset(i);
                ref.erase(i);
            }
        }
        REQUIRE(b.count() == static_cast<int>(ref.size()));
        REQUIRE(b.to_vector() == std::vector<int>(ref.begin(), ref.end()));
        int expect_first = ref.empty() ? -1 : *ref.begin();
        REQUIRE(b.find_first() == expect_first);
    }
}
