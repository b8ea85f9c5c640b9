#pragma once

// Exhaustive subset enumeration kernels. Every kernel has a serial reference
// and an OpenMP variant with identical, deterministic output; the tests
// cross-check the pair and bench/ times them against each other.
//
// Predicates passed to the parallel variants are called concurrently and
// must not mutate shared state.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <omp.h>

namespace mvl {

enum class Execution { serial, parallel };

namespace kernels {

using Mask = std::uint32_t;

inline constexpr int kMaxBits = 30;

inline void check_bits(int bits)
{
    if (bits < 0 || bits > kMaxBits)
        throw std::length_error("subset enumeration over " + std::to_string(bits) + " elements");
}

inline std::vector<Mask> masks_of_size(int bits, int k)
{
    std::vector<Mask> out;
    if (k == 0) {
        out.push_back(0);
        return out;
    }
    if (k > bits)
        return out;
    const std::uint64_t limit = std::uint64_t{1} << bits;
    std::uint64_t x = (std::uint64_t{1} << k) - 1;
    while (x < limit) {
        out.push_back(static_cast<Mask>(x));
        const std::uint64_t c = x & (~x + 1);
        const std::uint64_t r = x + c;
        x = (((r ^ x) >> 2) / c) | r;
    }
    return out;
}

// --- filter: every mask in [0, 2^bits) accepted by `keep`, ascending -------

template <class Keep>
std::vector<Mask> filter_masks_serial(int bits, Keep&& keep)
{
    check_bits(bits);
    std::vector<Mask> out;
    const std::int64_t n = std::int64_t{1} << bits;
    for (std::int64_t m = 0; m < n; ++m)
        if (keep(static_cast<Mask>(m)))
            out.push_back(static_cast<Mask>(m));
    return out;
}

template <class Keep>
std::vector<Mask> filter_masks_parallel(int bits, Keep&& keep)
{
    check_bits(bits);
    const std::int64_t n = std::int64_t{1} << bits;
    std::vector<std::vector<Mask>> parts(static_cast<std::size_t>(omp_get_max_threads()));
#pragma omp parallel
    {
        auto& local = parts[static_cast<std::size_t>(omp_get_thread_num())];
#pragma omp for schedule(static)
        for (std::int64_t m = 0; m < n; ++m)
            if (keep(static_cast<Mask>(m)))
                local.push_back(static_cast<Mask>(m));
    }
    std::vector<Mask> out;
    for (auto& p : parts)
        out.insert(out.end(), p.begin(), p.end());
    std::sort(out.begin(), out.end());
    return out;
}

template <class Keep>
std::vector<Mask> filter_masks(Execution ex, int bits, Keep&& keep)
{
    return ex == Execution::serial ? filter_masks_serial(bits, keep) : filter_masks_parallel(bits, keep);
}

// --- classify: (mask, tag) for every mask whose tag is nonzero, ascending ---

using Tagged = std::pair<Mask, std::uint8_t>;

template <class Tag>
std::vector<Tagged> classify_masks_serial(int bits, Tag&& tag)
{
    check_bits(bits);
    std::vector<Tagged> out;
    const std::int64_t n = std::int64_t{1} << bits;
    for (std::int64_t m = 0; m < n; ++m)
        if (std::uint8_t t = tag(static_cast<Mask>(m)))
            out.emplace_back(static_cast<Mask>(m), t);
    return out;
}

template <class Tag>
std::vector<Tagged> classify_masks_parallel(int bits, Tag&& tag)
{
    check_bits(bits);
    const std::int64_t n = std::int64_t{1} << bits;
    std::vector<std::vector<Tagged>> parts(static_cast<std::size_t>(omp_get_max_threads()));
#pragma omp parallel
    {
        auto& local = parts[static_cast<std::size_t>(omp_get_thread_num())];
#pragma omp for schedule(static)
        for (std::int64_t m = 0; m < n; ++m)
            if (std::uint8_t t = tag(static_cast<Mask>(m)))
                local.emplace_back(static_cast<Mask>(m), t);
    }
    std::vector<Tagged> out;
    for (auto& p : parts)
        out.insert(out.end(), p.begin(), p.end());
    std::sort(out.begin(), out.end());
    return out;
}

template <class Tag>
std::vector<Tagged> classify_masks(Execution ex, int bits, Tag&& tag)
{
    return ex == Execution::serial ? classify_masks_serial(bits, tag) : classify_masks_parallel(bits, tag);
}

// --- minimal: subset-minimal masks satisfying `valid` ----------------------
//
// Level-wise by cardinality. A candidate that contains an already accepted
// mask cannot be minimal and is never evaluated, so `valid` need not be
// monotone.

namespace detail {
inline std::vector<Mask> unpruned(const std::vector<Mask>& level, const std::vector<Mask>& found)
{
    std::vector<Mask> out;
    for (Mask m : level)
        if (std::none_of(found.begin(), found.end(), [m](Mask f) { return (m & f) == f; }))
            out.push_back(m);
    return out;
}
} // namespace detail

template <class Valid>
std::vector<Mask> minimal_masks_serial(int bits, Valid&& valid)
{
    check_bits(bits);
    std::vector<Mask> found;
    for (int k = 0; k <= bits; ++k)
        for (Mask m : detail::unpruned(masks_of_size(bits, k), found))
            if (valid(m))
                found.push_back(m);
    return found;
}

template <class Valid>
std::vector<Mask> minimal_masks_parallel(int bits, Valid&& valid)
{
    check_bits(bits);
    std::vector<Mask> found;
    for (int k = 0; k <= bits; ++k) {
        const auto cand = detail::unpruned(masks_of_size(bits, k), found);
        std::vector<char> ok(cand.size(), 0);
        const auto n = static_cast<std::int64_t>(cand.size());
#pragma omp parallel for schedule(dynamic, 16)
        for (std::int64_t i = 0; i < n; ++i)
            ok[static_cast<std::size_t>(i)] = valid(cand[static_cast<std::size_t>(i)]) ? 1 : 0;
        for (std::size_t i = 0; i < cand.size(); ++i)
            if (ok[i])
                found.push_back(cand[i]);
    }
    return found;
}

template <class Valid>
std::vector<Mask> minimal_masks(Execution ex, int bits, Valid&& valid)
{
    return ex == Execution::serial ? minimal_masks_serial(bits, valid) : minimal_masks_parallel(bits, valid);
}

// --- subset-extremal elements of an explicit collection --------------------

inline std::vector<Mask> minimal_elements(std::vector<Mask> masks)
{
    std::sort(masks.begin(), masks.end());
    masks.erase(std::unique(masks.begin(), masks.end()), masks.end());
    std::stable_sort(masks.begin(), masks.end(),
                     [](Mask a, Mask b) { return std::popcount(a) < std::popcount(b); });
    std::vector<Mask> kept;
    for (Mask m : masks)
        if (std::none_of(kept.begin(), kept.end(), [m](Mask k) { return (k & m) == k; }))
            kept.push_back(m);
    std::sort(kept.begin(), kept.end());
    return kept;
}

inline std::vector<Mask> maximal_elements(std::vector<Mask> masks)
{
    std::sort(masks.begin(), masks.end());
    masks.erase(std::unique(masks.begin(), masks.end()), masks.end());
    std::stable_sort(masks.begin(), masks.end(),
                     [](Mask a, Mask b) { return std::popcount(a) > std::popcount(b); });
    std::vector<Mask> kept;
    for (Mask m : masks)
        if (std::none_of(kept.begin(), kept.end(), [m](Mask k) { return (k & m) == m; }))
            kept.push_back(m);
    std::sort(kept.begin(), kept.end());
    return kept;
}

} // namespace kernels
} // namespace mvl
