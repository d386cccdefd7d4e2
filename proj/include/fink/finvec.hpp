#pragma once

#include "fink/error.hpp"

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fink {

using Position = std::uint64_t;

struct Entry {
    Position pos = 0;
    int value = 0;

    friend auto operator<=>(const Entry&, const Entry&) = default;
};

/// A k-vector: a finitely supported map from positions to {0..k} attaining k.
/// Only nonzero entries are stored, ascending by position. Level 0 is the
/// zero vector.
class KVector {
public:
    KVector() = default;

    /// Level is inferred as the largest stored value.
    explicit KVector(std::vector<Entry> entries);

    /// Validates that `level` is attained (or that the vector is zero when
    /// `level` is 0).
    KVector(int level, std::vector<Entry> entries);

    int level() const noexcept { return level_; }
    bool is_zero() const noexcept { return entries_.empty(); }
    std::size_t size() const noexcept { return entries_.size(); }
    std::span<const Entry> entries() const noexcept { return entries_; }

    Position min_support() const;
    Position max_support() const;
    int at(Position pos) const noexcept;

    friend bool operator==(const KVector&, const KVector&) = default;
    friend auto operator<=>(const KVector&, const KVector&) = default;

private:
    int level_ = 0;
    std::vector<Entry> entries_;
};

/// max supp a < min supp b. Zero vectors never precede anything.
bool precedes(const KVector& a, const KVector& b);

/// Pointwise decrement by `shift`, clamped at zero.
KVector tetris(const KVector& x, int shift);

/// Disjoint pointwise union.
KVector block_sum(std::span<const KVector> parts);

class BlockSequence {
public:
    BlockSequence() = default;
    explicit BlockSequence(int level, std::vector<KVector> blocks = {});

    int level() const noexcept { return level_; }
    std::size_t size() const noexcept { return blocks_.size(); }
    bool empty() const noexcept { return blocks_.empty(); }
    const KVector& operator[](std::size_t i) const { return blocks_[i]; }
    const KVector& back() const { return blocks_.back(); }
    std::span<const KVector> blocks() const noexcept { return blocks_; }

    auto begin() const noexcept { return blocks_.begin(); }
    auto end() const noexcept { return blocks_.end(); }

    /// Copy with one more block appended; the block must come after the
    /// current last block.
    BlockSequence extended(KVector block) const;

    /// Pointwise union of all blocks (zero vector when empty).
    KVector flatten() const;

    friend bool operator==(const BlockSequence&, const BlockSequence&) = default;
    friend auto operator<=>(const BlockSequence&, const BlockSequence&) = default;

private:
    int level_ = 1;
    std::vector<KVector> blocks_;
};

struct SpanPart {
    std::size_t block = 0;
    int shift = 0;

    friend auto operator<=>(const SpanPart&, const SpanPart&) = default;
};

/// Witness that a vector is T^{i_0}x_{n_0} + ... + T^{i_m}x_{n_m}; indices
/// strictly ascending, shifts in 0..k-1 and at least one shift 0.
struct SpanTerm {
    std::vector<SpanPart> parts;

    std::size_t first_block() const { return parts.front().block; }
    std::size_t last_block() const { return parts.back().block; }

    friend auto operator<=>(const SpanTerm&, const SpanTerm&) = default;
};

/// Throws InvalidSequence if the term is malformed for `X`.
void validate_term(const BlockSequence& X, const SpanTerm& term);

/// Evaluates a span term against X.
KVector realize(const BlockSequence& X, const SpanTerm& term);

struct SpanElement {
    KVector vector;
    SpanTerm term;
};

/// All elements of the combinatorial span of X, each with its unique witness.
///
/// Order: index subsets by ascending bitmask (block 0 is the least
/// significant bit); within a subset, shift tuples counted with the first part
/// least significant. Tuples without a zero shift are skipped.
std::vector<SpanElement> span_enumerate(const BlockSequence& X);

/// |span_enumerate(X)| without enumerating.
std::uint64_t span_size(std::size_t blocks, int level);

/// nullopt for vectors below the level of X; LevelMismatch above it.
std::optional<SpanTerm> span_contains(const BlockSequence& X, const KVector& w);

enum class OrderKind { plain, finalized };

/// Per-block witnesses when X <= Y (or X <=_fin Y), nullopt otherwise.
std::optional<std::vector<SpanTerm>> leq_witness(const BlockSequence& X, const BlockSequence& Y,
                                                 OrderKind kind = OrderKind::plain);

bool leq(const BlockSequence& X, const BlockSequence& Y, OrderKind kind = OrderKind::plain);

BlockSequence restrict(const BlockSequence& X, std::size_t n);

/// Span of X indexed for repeated approximation enumeration.
class SpanIndex {
public:
    explicit SpanIndex(const BlockSequence& X);

    const BlockSequence& base() const noexcept { return base_; }
    std::span<const SpanElement> elements() const noexcept { return elements_; }
    std::size_t size() const noexcept { return elements_.size(); }

    /// Ranks of the elements whose first block is >= `block`, ascending.
    std::span<const std::size_t> starting_from(std::size_t block) const;

private:
    BlockSequence base_;
    std::vector<SpanElement> elements_;
    std::vector<std::vector<std::size_t>> from_block_;
};

/// Visits the length-n block subsequences of X in canonical order:
/// lexicographic on the tuple of span ranks. The visitor returns false to
/// stop early; the function returns false iff stopped.
bool for_each_approximation(const SpanIndex& index, std::size_t n,
                            const std::function<bool(const BlockSequence&)>& visit);

/// AX_n = { r_n(Y) : Y <= X }, in canonical order.
std::vector<BlockSequence> approximations(const BlockSequence& X, std::size_t n);

/// nullopt stands for infinite depth.
using Depth = std::optional<std::size_t>;

Depth depth(const BlockSequence& X, const BlockSequence& s);

/// X/s: blocks of X strictly after every block of s.
BlockSequence tail(const BlockSequence& X, const BlockSequence& s);
/// X/(s,t) = X/s ∩ X/t.
BlockSequence tail(const BlockSequence& X, const BlockSequence& s, const BlockSequence& t);

/// `k:{pos:val,...}`, e.g. `2:{0:1,2:2}`.
std::string to_string(const KVector& x);
KVector parse_kvector(std::string_view text);

/// Space/comma separated list of vector encodings, or a JSON array of them.
BlockSequence parse_blocks(std::string_view text, std::optional<int> level = std::nullopt);

std::string to_string(const SpanTerm& term);
std::string to_string(const BlockSequence& X);

/// Unit blocks x_i = [origin+i : k].
BlockSequence unit_blocks(int level, std::size_t count, Position origin = 0);

} // namespace fink
