#pragma once

#include "fink/canon.hpp"
#include "fink/finvec.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace fink {

struct SearchBudget {
    std::size_t max_universe_blocks = 8;
    std::size_t target_length = 3;
    std::optional<std::uint64_t> node_limit;
    std::optional<std::uint64_t> seed;  // accepted for interface parity; the search order is fixed
    unsigned threads = 0;               // 0: FINK_THREADS or 1

    void validate() const;
};

struct SearchStats {
    std::uint64_t nodes = 0;
    std::uint64_t pruned = 0;
    std::vector<std::uint64_t> depth_histogram;  // nodes per partial length
};

struct HomogResult {
    std::optional<BlockSequence> witness;
    std::optional<Color> color;
    SearchStats stats;
    bool hit_node_limit = false;

    bool found() const noexcept { return witness.has_value(); }
};

/// Least Y <= X (first max_universe_blocks blocks of X, canonical order)
/// with target_length blocks whose n-approximations all share one color.
/// A node limit forces a single thread.
HomogResult find_homogeneous(const Coloring& c, const BlockSequence& X, std::size_t n, const SearchBudget& budget);

/// Recomputes AY_n and checks that it is monochromatic.
bool certify_homogeneous(const BlockSequence& Y, const Coloring& c, std::size_t n);

/// Scans approximations(universe, target) in order; oracle for minimality.
std::optional<BlockSequence> naive_homogeneous(const Coloring& c, const BlockSequence& X, std::size_t n,
                                               const SearchBudget& budget);

/// FINK_THREADS, or 1.
unsigned default_threads();

} // namespace fink
