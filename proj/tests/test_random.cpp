#include <doctest.h>

#include <cmath>
#include <vector>

#include "rr/numerics.hpp"
#include "rr/random.hpp"

using namespace rr;

TEST_SUITE("random")
{
    TEST_CASE("philox4x32-10 known-answer vectors")
    {
        using B = Philox::Block;
        CHECK(Philox::round10({0, 0, 0, 0}, {0, 0}) == B{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
        CHECK(Philox::round10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
              B{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
        CHECK(Philox::round10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
              B{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
    }

    TEST_CASE("streams are reproducible and distinct")
    {
        Philox a(42, 7), b(42, 7), c(42, 8);
        for (int k = 0; k < 10; ++k) {
            const double x = a.uniform();
            CHECK(x == b.uniform());
            CHECK(x != c.uniform());
        }
    }

    TEST_CASE("uniforms stay in the open interval and normals have unit moments")
    {
        std::vector<double> z;
        for (std::uint64_t p = 0; p < 2000; ++p) {
            Philox r(1, p);
            for (int k = 0; k < 50; ++k) {
                const double u = r.uniform();
                REQUIRE(u > 0.0);
                REQUIRE(u < 1.0);
                z.push_back(r.normal());
            }
        }
        const auto s = sample_stats(z);
        CHECK(std::abs(s.mean) < 4.0 * s.standard_error);
        std::vector<double> sq;
        for (double v : z) sq.push_back(v * v);
        const auto q = sample_stats(sq);
        CHECK(std::abs(q.mean - 1.0) < 4.0 * q.standard_error);
    }
}
