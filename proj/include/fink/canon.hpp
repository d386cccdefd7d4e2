#pragma once

#include "fink/finvec.hpp"
#include "fink/staircase.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace fink {

/// s is a prefix of t (s ⊑ t).
bool is_prefix(const BlockSequence& s, const BlockSequence& t);

/// A finite family of approximations of `base`.
struct Front {
    BlockSequence base;
    std::vector<BlockSequence> members;  // sorted, duplicates removed
};

Front make_front(BlockSequence base, std::vector<BlockSequence> members);
/// AX_n
Front uniform_front(const BlockSequence& X, std::size_t n);

enum class FrontFault { none, not_subsequence, antichain, cover };

std::string_view to_string(FrontFault f);

struct FrontCheck {
    bool ok = true;
    FrontFault fault = FrontFault::none;
    /// not_subsequence: the offending member; antichain: the shorter member;
    /// cover: an uncovered sequence of maximal member length.
    std::optional<BlockSequence> first;
    /// antichain: the member extending `first`.
    std::optional<BlockSequence> second;

    explicit operator bool() const noexcept { return ok; }
};

/// Cover is checked at the largest member length H: every element of AX_H
/// must have a prefix among the members.
FrontCheck front_check(const Front& F);

struct FrontDerived {
    std::vector<BlockSequence> hat;  // prefixes of members, the empty one included
    std::map<BlockSequence, std::vector<BlockSequence>> fibers;  // t in hat -> members extending t
};

FrontDerived front_derived(const Front& F);
/// F restricted to Y: the members that are block subsequences of Y.
Front restrict_front(const Front& F, const BlockSequence& Y);

bool in_hat(const Front& F, const BlockSequence& t);
bool is_member(const Front& F, const BlockSequence& t);

using Color = std::string;

enum class ColorRule { union_of_blocks, constant, min_parity, first_value, identity };

std::string_view to_string(ColorRule r);
std::optional<ColorRule> parse_color_rule(std::string_view name);

/// Either a named rule or an explicit table over members.
class Coloring {
public:
    static Coloring rule(ColorRule r);
    static Coloring table(std::map<BlockSequence, Color> colors);

    Color operator()(const BlockSequence& s) const;

    const std::optional<ColorRule>& named_rule() const noexcept { return rule_; }
    const std::map<BlockSequence, Color>& entries() const noexcept { return table_; }

private:
    std::optional<ColorRule> rule_;
    std::map<BlockSequence, Color> table_;
};

/// ext_Z(s): members of F that extend s and are approximations of Z.
std::vector<BlockSequence> extensions(const Front& F, const BlockSequence& Z, const BlockSequence& s);

/// Z separates s and t: every extension of s in Z gets a color different
/// from every extension of t in Z. Requires both extension sets nonempty.
bool separates(const Front& F, const BlockSequence& Z, const BlockSequence& s, const BlockSequence& t,
               const Coloring& c);

struct Horizon {
    std::size_t max_blocks = 8;          // reducts Z with 1..max_blocks blocks
    std::size_t max_witness_atoms = 16;  // weak witness candidates drawn from at most this many entries
    bool weak = true;                    // look for a weak-mixing witness
};

enum class MixVerdict { separated, mixed_at_horizon };

std::string_view to_string(MixVerdict v);

struct MixReport {
    MixVerdict verdict = MixVerdict::mixed_at_horizon;
    std::optional<BlockSequence> witness;       // separating reduct
    std::optional<KVector> weak_witness;        // w in t \ s
    Horizon horizon;
    std::uint64_t reducts_examined = 0;
    std::uint64_t compatible_reducts = 0;
};

MixReport decide_mixing(const Front& F, const BlockSequence& s, const BlockSequence& t, const Coloring& c,
                        const Horizon& horizon = {});

/// Weak-mixing test for one candidate w over every compatible reduct within
/// the horizon.
bool weakly_mixes_with(const Front& F, const BlockSequence& s, const BlockSequence& t, const KVector& w,
                       const Coloring& c, const Horizon& horizon = {});

struct CanonGroup {
    std::vector<std::size_t> coords;  // ascending
    std::vector<int> shifts;          // one per coordinate, minimum 0
    StairFunction g;

    friend auto operator<=>(const CanonGroup&, const CanonGroup&) = default;
};

struct CanonicalMap {
    int level = 1;
    std::size_t arity = 1;
    std::vector<CanonGroup> groups;  // ordered by least coordinate

    void validate() const;

    friend auto operator<=>(const CanonicalMap&, const CanonicalMap&) = default;
};

std::string to_string(const CanonicalMap& m);

std::vector<KVector> apply_canonical(const CanonicalMap& m, const BlockSequence& element);

/// Groups are drawn from nonconstant deduplicated staircase functions; the
/// constant map is the map with no groups.
std::vector<CanonicalMap> enumerate_canonical_maps(int level, std::size_t arity, const DedupeOptions& options = {});

/// |enumerate_canonical_maps(k,d)| from the number of nonconstant group
/// functions, by summing over used coordinate subsets and set partitions.
std::uint64_t canonical_map_count(int level, std::size_t arity, std::uint64_t nonconstant_functions);

/// C_d = tt * (sum_{j=2..d} C(d,j) t^{d-j} + sum_{j=2..d-2} C(d,j) C_{d-j}).
std::uint64_t counting_recursion(std::uint64_t t, std::uint64_t t_tilde, std::size_t d);

struct CountRow {
    int level = 1;
    std::size_t arity = 2;
    std::uint64_t t = 0;
    std::uint64_t t_prime = 0;
    std::uint64_t t_tilde = 0;
    std::uint64_t c = 0;     // recursion value
    std::uint64_t maps = 0;  // canonical maps of this arity
};

CountRow count_canonical(int level, std::size_t arity, const DedupeOptions& options = {});

enum class CanonMode { theorem1, theorem2 };

struct CanonizeResult {
    std::optional<BlockSequence> reduct;
    std::optional<std::map<std::size_t, CanonicalMap>> maps;  // by member arity
    std::uint64_t reducts_tried = 0;
    std::uint64_t maps_tried = 0;
    std::size_t target_length = 0;

    bool found() const noexcept { return reduct.has_value(); }
};

/// First reduct Y (canonical order, target_len blocks) and first choice of
/// one map per member arity such that c(s) = c(t) iff the images agree for
/// all members of F restricted to Y.
CanonizeResult canonize(const Front& F, const Coloring& c, std::size_t target_len,
                        CanonMode mode = CanonMode::theorem2, const DedupeOptions& options = {});

/// Recomputes the biconditional from scratch.
bool verify_canonical(const Front& F, const Coloring& c, const BlockSequence& Y,
                      const std::map<std::size_t, CanonicalMap>& maps);

} // namespace fink
