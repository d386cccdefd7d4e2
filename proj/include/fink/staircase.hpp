#pragma once

#include "fink/finvec.hpp"

#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace fink {

/// min_i / max_i of a vector for i in 1..k; 0 when the value is absent.
struct Landmarks {
    std::vector<Position> min;  // index i in 1..k, slot 0 unused
    std::vector<Position> max;
    std::vector<bool> present;
};

Landmarks landmarks(const KVector& x);

enum class SosClause {
    none,
    level,       // level must be >= 1
    range,       // every value 1..k occurs
    nesting,     // min_i < min_j < max_i for i < j
    ascending,   // Range x|[min_{i-1}, min_i) = {0..i-1}
    descending,  // Range x|(max_i, max_{i-1}] = {0..i-1}
    middle,      // Range x|[min_k, max_k] = {0..k}
};

std::string_view to_string(SosClause clause);

struct SosVerdict {
    bool ok = false;
    SosClause clause = SosClause::none;
    int index = 0;  // the i of the violated clause, when it has one

    explicit operator bool() const noexcept { return ok; }
};

/// System-of-staircases test. The i = 1 boundary clauses of the ascending
/// and descending conditions refer to min_0/max_0 and are skipped.
SosVerdict is_sos(const KVector& x);

/// Splits x into the 2k-1 consecutive parts T^{k-1}w_1 + ... + w_k + ... +
/// T^{k-1}w_{2k-1}, with part i an sos of level k - |k - i|. nullopt when no
/// split exists.
std::optional<std::vector<KVector>> strong_decomposition(const KVector& x);

bool is_sos_sequence(const BlockSequence& X, bool strong = false);

/// The fixed minimal sos value pattern at level k (zeros included), of
/// width k^2 + 2k:
///   ascent   1 0 | 2 0 1 | 3 0 1 2 | ... | k-1 0 1 .. k-2
///   middle   k 0 1 .. k-1 k
///   descent  the mirror image of the ascent.
std::vector<int> sos_pattern(int level);

/// `count` consecutive blocks starting at `origin`, each a translate of the
/// minimal pattern. With `strong`, each block is the tetris sum
/// T^{k-1}u_1 + ... + u_k + ... + T^{k-1}u_{2k-1} of consecutive translates.
BlockSequence make_sos(int level, std::size_t count, bool strong = false, Position origin = 0);

/// A random sos at level k: the staircase segments of the minimal pattern,
/// each padded with up to `max_extra` admissible values and shuffled.
KVector random_sos(int level, std::mt19937_64& rng, Position origin = 0, int max_extra = 3);

enum class AtomKind { min, max, theta0, theta1, theta2 };

struct StairAtom {
    AtomKind kind = AtomKind::min;
    int level = 1;
    int i = 0;  // min/max/theta0/theta1 index
    int l = 0;  // theta value

    static StairAtom min(int level, int i);
    static StairAtom max(int level, int i);
    static StairAtom theta0(int level, int i, int l);
    static StairAtom theta1(int level, int i, int l);
    static StairAtom theta2(int level, int l);

    void validate() const;

    friend auto operator<=>(const StairAtom&, const StairAtom&) = default;
};

std::string to_string(const StairAtom& a);

KVector eval_atom(const StairAtom& a, const KVector& w);

/// Canonical decomposition
///   min_{I0} v V_{j in J0} theta0_{j-1,l_j} v theta2_l v max_{I1} v V_{j in J1} theta1_{j-1,l_j}.
/// `lower` and `upper` map j to l_j; their key sets are J0 and J1.
struct StairFunction {
    int level = 1;
    std::vector<int> mins;
    std::map<int, int> lower;
    std::optional<int> middle;
    std::vector<int> maxs;
    std::map<int, int> upper;

    void validate() const;
    std::vector<StairAtom> atoms() const;
    /// Atoms that can produce a nonzero value (theta2_0 excluded).
    std::size_t effective_size() const;
    bool is_constant() const { return effective_size() == 0; }

    friend auto operator<=>(const StairFunction&, const StairFunction&) = default;
};

/// `min{I0} theta0{(j,l)...} theta2{l} max{I1} theta1{(j,l)...}`, empty
/// groups omitted; the constant function prints as the empty string.
std::string to_string(const StairFunction& f);
StairFunction parse_stair_function(int level, std::string_view text);

/// Join of the atom values. Throws AtomOverlap when two atoms write the same
/// position, which cannot happen on sos inputs.
KVector eval(const StairFunction& f, const KVector& w);

/// Blocks of indices with equal values, each ascending, ordered by least index.
using Partition = std::vector<std::vector<std::size_t>>;

Partition induced_relation(const StairFunction& f, std::span<const KVector> elements);

/// label[i] = number of the block containing i, blocks numbered by least
/// index. Two labelings are equal iff the partitions are.
std::vector<std::size_t> partition_labels(const StairFunction& f, std::span<const KVector> elements);

struct DedupeOptions {
    /// Number of reference blocks whose span is the test set.
    std::size_t reference_length = 4;
    /// Each reference block is the sum of this many consecutive minimal sos
    /// blocks.
    std::size_t block_multiplicity = 2;
};

/// The reference sequence used to separate staircase relations.
BlockSequence reference_sequence(int level, const DedupeOptions& options = {});

struct StairClass {
    StairFunction representative;
    std::vector<std::size_t> members;  // indices into the raw enumeration
    std::vector<std::size_t> labels;   // induced partition on the reference span
};

/// All valid parameter tuples in canonical order. Theta0/theta1 values are
/// restricted to 1..j-2 (the family definition's l <= i-1 with i = j-1).
std::vector<StairFunction> enumerate_raw_stair_functions(int level);

/// Classes of raw tuples inducing the same partition of the reference span,
/// ordered by first raw member. The representative is the member with the
/// most effective atoms, ties going to the earliest.
std::vector<StairClass> stair_classes(int level, const DedupeOptions& options = {});

std::vector<StairFunction> enumerate_stair_functions(int level, bool dedupe,
                                                     const DedupeOptions& options = {});

} // namespace fink
