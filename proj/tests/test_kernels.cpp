#include "mvlogic/kernels.hpp"

#include <doctest.h>

#include <bit>

using namespace mvl;
using namespace mvl::kernels;

TEST_CASE("masks_of_size enumerates every k-subset once, ascending")
{
    for (int n = 0; n <= 10; ++n)
        for (int k = 0; k <= n; ++k) {
            const auto ms = masks_of_size(n, k);
            std::size_t expected = 0;
            for (Mask m = 0; m < (Mask{1} << n); ++m)
                expected += std::popcount(m) == k ? 1 : 0;
            CHECK(ms.size() == expected);
            CHECK(std::is_sorted(ms.begin(), ms.end()));
            for (Mask m : ms)
                CHECK(std::popcount(m) == k);
        }
}

TEST_CASE("serial and parallel filter agree")
{
    auto keep = [](Mask m) { return (m * 2654435761u) % 7 == 3; };
    for (int bits : {0, 1, 5, 12, 16})
        CHECK(filter_masks_serial(bits, keep) == filter_masks_parallel(bits, keep));
}

TEST_CASE("serial and parallel classify agree")
{
    auto tag = [](Mask m) { return static_cast<std::uint8_t>((m ^ (m >> 3)) & 5); };
    for (int bits : {0, 3, 10, 15})
        CHECK(classify_masks_serial(bits, tag) == classify_masks_parallel(bits, tag));
}

TEST_CASE("minimal masks are exactly the minimal valid sets, in both variants")
{
    // Valid: contains {0,1} or {2} or {1,3,4}; not monotone above 5 bits set.
    auto valid = [](Mask m) {
        const bool base = (m & 3u) == 3u || (m & 4u) || (m & 26u) == 26u;
        return base && std::popcount(m) <= 5;
    };
    const auto s = minimal_masks_serial(8, valid);
    CHECK(s == minimal_masks_parallel(8, valid));
    std::vector<Mask> brute;
    for (Mask m = 0; m < 256; ++m) {
        if (!valid(m))
            continue;
        bool minimal = true;
        for (Mask sub = (m - 1) & m; sub != m; sub = (sub - 1) & m) {
            if (valid(sub)) {
                minimal = false;
                break;
            }
            if (sub == 0)
                break;
        }
        if (minimal && !(m != 0 && valid(0)))
            brute.push_back(m);
    }
    std::sort(brute.begin(), brute.end());
    auto got = s;
    std::sort(got.begin(), got.end());
    CHECK(got == brute);
}

TEST_CASE("extremal elements")
{
    CHECK(minimal_elements({3, 1, 2, 7, 4, 6}) == std::vector<Mask>{1, 2, 4});
    CHECK(maximal_elements({3, 1, 2, 4, 6}) == std::vector<Mask>{3, 6});
    CHECK(minimal_elements({}).empty());
}

TEST_CASE("enumeration width is bounded")
{
    CHECK_THROWS_AS(filter_masks_serial(31, [](Mask) { return false; }), std::length_error);
}
