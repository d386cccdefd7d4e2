#include "fink/staircase.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <cstdint>
#include <numeric>
#include <unordered_map>

namespace fink {

Landmarks landmarks(const KVector& x) {
    const auto k = static_cast<std::size_t>(x.level());
    Landmarks lm{std::vector<Position>(k + 1, 0), std::vector<Position>(k + 1, 0), std::vector<bool>(k + 1, false)};
    for (const auto& e : x.entries()) {
        const auto v = static_cast<std::size_t>(e.value);
        if (!lm.present[v]) {
            lm.present[v] = true;
            lm.min[v] = e.pos;
        }
        lm.max[v] = e.pos;
    }
    return lm;
}

std::string_view to_string(SosClause clause) {
    switch (clause) {
    case SosClause::none: return "none";
    case SosClause::level: return "level";
    case SosClause::range: return "range";
    case SosClause::nesting: return "nesting";
    case SosClause::ascending: return "ascending";
    case SosClause::descending: return "descending";
    case SosClause::middle: return "middle";
    }
    return "unknown";
}

namespace {

// Bitmask of the values taken on positions [lo, hi], bit 0 standing for zero.
std::uint64_t range_mask(const KVector& x, Position lo, Position hi) {
    if (lo > hi) return 0;
    auto entries = x.entries();
    auto first = std::lower_bound(entries.begin(), entries.end(), lo,
                                  [](const Entry& e, Position p) { return e.pos < p; });
    auto last = std::upper_bound(entries.begin(), entries.end(), hi,
                                 [](Position p, const Entry& e) { return p < e.pos; });
    std::uint64_t mask = 0;
    for (auto it = first; it != last; ++it) mask |= std::uint64_t{1} << it->value;
    const auto stored = static_cast<Position>(last - first);
    if (hi - lo + 1 > stored) mask |= 1;
    return mask;
}

std::uint64_t upto_mask(int top) { return (std::uint64_t{1} << (top + 1)) - 1; }

} // namespace

SosVerdict is_sos(const KVector& x) {
    const int k = x.level();
    if (k < 1) return {false, SosClause::level, 0};
    if (k > 60) throw Error(ErrorCode::OutOfRange, "sos test supports levels up to 60");
    const auto lm = landmarks(x);
    for (int i = 1; i <= k; ++i)
        if (!lm.present[static_cast<std::size_t>(i)]) return {false, SosClause::range, i};
    auto mn = [&](int i) { return lm.min[static_cast<std::size_t>(i)]; };
    auto mx = [&](int i) { return lm.max[static_cast<std::size_t>(i)]; };
    for (int i = 1; i <= k; ++i)
        for (int j = i + 1; j <= k; ++j)
            if (!(mn(i) < mn(j) && mn(j) < mx(i))) return {false, SosClause::nesting, i};
    for (int i = 2; i <= k; ++i) {
        if (range_mask(x, mn(i - 1), mn(i) - 1) != upto_mask(i - 1)) return {false, SosClause::ascending, i};
        if (range_mask(x, mx(i) + 1, mx(i - 1)) != upto_mask(i - 1)) return {false, SosClause::descending, i};
    }
    if (range_mask(x, mn(k), mx(k)) != upto_mask(k)) return {false, SosClause::middle, k};
    return {true, SosClause::none, 0};
}

std::optional<std::vector<KVector>> strong_decomposition(const KVector& x) {
    const int k = x.level();
    if (k < 1) return std::nullopt;
    const auto entries = x.entries();
    const std::size_t n = entries.size();
    const std::size_t parts = static_cast<std::size_t>(2 * k - 1);
    auto part_level = [&](std::size_t p) { return k - std::abs(k - static_cast<int>(p + 1)); };
    auto piece = [&](std::size_t a, std::size_t b) {
        return KVector(std::vector<Entry>(entries.begin() + static_cast<std::ptrdiff_t>(a),
                                          entries.begin() + static_cast<std::ptrdiff_t>(b)));
    };
    auto fits = [&](std::size_t p, std::size_t a, std::size_t b) {
        auto v = piece(a, b);
        return v.level() == part_level(p) && is_sos(v).ok;
    };
    // reach[p][e]: the first p parts can exactly cover entries [0, e).
    std::vector<std::vector<char>> reach(parts + 1, std::vector<char>(n + 1, 0));
    std::vector<std::vector<std::size_t>> from(parts + 1, std::vector<std::size_t>(n + 1, 0));
    reach[0][0] = 1;
    for (std::size_t p = 0; p < parts; ++p)
        for (std::size_t a = 0; a < n; ++a) {
            if (!reach[p][a]) continue;
            for (std::size_t b = a + 1; b <= n; ++b)
                if (!reach[p + 1][b] && fits(p, a, b)) {
                    reach[p + 1][b] = 1;
                    from[p + 1][b] = a;
                }
        }
    if (!reach[parts][n]) return std::nullopt;
    std::vector<KVector> out(parts);
    std::size_t e = n;
    for (std::size_t p = parts; p > 0; --p) {
        const auto a = from[p][e];
        out[p - 1] = piece(a, e);
        e = a;
    }
    return out;
}

bool is_sos_sequence(const BlockSequence& X, bool strong) {
    return std::all_of(X.begin(), X.end(), [&](const KVector& x) {
        return is_sos(x).ok && (!strong || strong_decomposition(x).has_value());
    });
}

std::vector<int> sos_pattern(int level) {
    if (level < 1) throw Error(ErrorCode::OutOfRange, "sos pattern needs level >= 1");
    std::vector<int> v;
    for (int i = 2; i <= level; ++i) {
        v.push_back(i - 1);
        v.push_back(0);
        for (int j = 1; j <= i - 2; ++j) v.push_back(j);
    }
    v.push_back(level);
    for (int j = 0; j < level; ++j) v.push_back(j);
    v.push_back(level);
    for (int i = level; i >= 2; --i) {
        for (int j = i - 2; j >= 1; --j) v.push_back(j);
        v.push_back(0);
        v.push_back(i - 1);
    }
    return v;
}

namespace {

std::vector<Entry> place(const std::vector<int>& values, Position origin, int shift = 0) {
    std::vector<Entry> out;
    for (std::size_t i = 0; i < values.size(); ++i)
        if (values[i] > shift) out.push_back({origin + i, values[i] - shift});
    return out;
}

} // namespace

BlockSequence make_sos(int level, std::size_t count, bool strong, Position origin) {
    const auto pattern = sos_pattern(level);
    const Position width = pattern.size();
    std::vector<KVector> blocks;
    Position at = origin;
    for (std::size_t n = 0; n < count; ++n) {
        if (!strong) {
            blocks.emplace_back(level, place(pattern, at));
            at += width;
            continue;
        }
        std::vector<Entry> entries;
        for (int p = 1; p <= 2 * level - 1; ++p) {
            auto part = place(pattern, at, std::abs(level - p));
            entries.insert(entries.end(), part.begin(), part.end());
            at += width;
        }
        blocks.emplace_back(level, std::move(entries));
    }
    return BlockSequence(level, std::move(blocks));
}

KVector random_sos(int level, std::mt19937_64& rng, Position origin, int max_extra) {
    if (level < 1) throw Error(ErrorCode::OutOfRange, "sos needs level >= 1");
    std::uniform_int_distribution<int> extra(0, std::max(max_extra, 0));
    auto filler = [&](int top) {
        std::uniform_int_distribution<int> d(0, top);
        return d(rng);
    };
    // A segment holding 0, 1..top-1 and random values from 0..top.
    auto segment = [&](int top) {
        std::vector<int> s{0};
        for (int j = 1; j < top; ++j) s.push_back(j);
        for (int e = extra(rng); e > 0; --e) s.push_back(filler(top));
        std::shuffle(s.begin(), s.end(), rng);
        return s;
    };
    std::vector<int> values;
    for (int i = 2; i <= level; ++i) {
        values.push_back(i - 1);
        auto s = segment(i - 1);
        values.insert(values.end(), s.begin(), s.end());
    }
    values.push_back(level);
    {
        auto s = segment(level);
        values.insert(values.end(), s.begin(), s.end());
    }
    values.push_back(level);
    for (int i = level; i >= 2; --i) {
        auto s = segment(i - 1);
        values.insert(values.end(), s.begin(), s.end());
        values.push_back(i - 1);
    }
    return KVector(level, place(values, origin));
}

StairAtom StairAtom::min(int level, int i) {
    StairAtom a{AtomKind::min, level, i, 0};
    a.validate();
    return a;
}
StairAtom StairAtom::max(int level, int i) {
    StairAtom a{AtomKind::max, level, i, 0};
    a.validate();
    return a;
}
StairAtom StairAtom::theta0(int level, int i, int l) {
    StairAtom a{AtomKind::theta0, level, i, l};
    a.validate();
    return a;
}
StairAtom StairAtom::theta1(int level, int i, int l) {
    StairAtom a{AtomKind::theta1, level, i, l};
    a.validate();
    return a;
}
StairAtom StairAtom::theta2(int level, int l) {
    StairAtom a{AtomKind::theta2, level, 0, l};
    a.validate();
    return a;
}

void StairAtom::validate() const {
    auto bad = [&](const char* why) { throw Error(ErrorCode::InvalidStairFunction, to_string(*this) + ": " + why); };
    if (level < 1) bad("level must be >= 1");
    switch (kind) {
    case AtomKind::min:
    case AtomKind::max:
        if (i < 1 || i > level) bad("index out of 1..k");
        break;
    case AtomKind::theta0:
    case AtomKind::theta1:
        if (i < 1 || i > level - 1) bad("index out of 1..k-1");
        if (l < 1 || l > i) bad("value out of 1..i");
        break;
    case AtomKind::theta2:
        if (l < 0 || l > level) bad("value out of 0..k");
        break;
    }
}

std::string to_string(const StairAtom& a) {
    switch (a.kind) {
    case AtomKind::min: return "min_" + std::to_string(a.i);
    case AtomKind::max: return "max_" + std::to_string(a.i);
    case AtomKind::theta0: return "theta0_" + std::to_string(a.i) + "," + std::to_string(a.l);
    case AtomKind::theta1: return "theta1_" + std::to_string(a.i) + "," + std::to_string(a.l);
    case AtomKind::theta2: return "theta2_" + std::to_string(a.l);
    }
    return "?";
}

namespace {

// Entries of w with value l strictly between lo and hi.
std::vector<Entry> strictly_between(const KVector& w, Position lo, Position hi, int l) {
    std::vector<Entry> out;
    for (const auto& e : w.entries())
        if (e.pos > lo && e.pos < hi && e.value == l) out.push_back(e);
    return out;
}

KVector eval_atom_with(const StairAtom& a, const KVector& w, const Landmarks& lm) {
    auto mn = [&](int i) { return lm.min[static_cast<std::size_t>(i)]; };
    auto mx = [&](int i) { return lm.max[static_cast<std::size_t>(i)]; };
    switch (a.kind) {
    case AtomKind::min: return KVector(a.i, {{mn(a.i), a.i}});
    case AtomKind::max: return KVector(a.i, {{mx(a.i), a.i}});
    case AtomKind::theta0: return KVector(strictly_between(w, mn(a.i), mn(a.i + 1), a.l));
    case AtomKind::theta1: return KVector(strictly_between(w, mx(a.i + 1), mx(a.i), a.l));
    case AtomKind::theta2:
        if (a.l == 0) return {};
        return KVector(strictly_between(w, mn(a.level), mx(a.level), a.l));
    }
    return {};
}

} // namespace

KVector eval_atom(const StairAtom& a, const KVector& w) {
    a.validate();
    if (w.level() != a.level)
        throw Error(ErrorCode::LevelMismatch, to_string(a) + " applied to a level-" + std::to_string(w.level()) + " vector");
    return eval_atom_with(a, w, landmarks(w));
}

void StairFunction::validate() const {
    auto bad = [&](const std::string& why) { throw Error(ErrorCode::InvalidStairFunction, why); };
    if (level < 1) bad("level must be >= 1");
    auto check_set = [&](const std::vector<int>& s, const char* name) {
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] < 1 || s[i] > level) bad(std::string(name) + " index out of 1..k");
            if (i > 0 && s[i - 1] >= s[i]) bad(std::string(name) + " indices must ascend");
        }
    };
    auto check_thetas = [&](const std::vector<int>& s, const std::map<int, int>& t, const char* name) {
        for (const auto& [j, l] : t) {
            const bool ok = std::binary_search(s.begin(), s.end(), j) && std::binary_search(s.begin(), s.end(), j - 1);
            if (!ok) bad(std::string(name) + ": j and j-1 must both be selected (j=" + std::to_string(j) + ")");
            if (l < 1 || l > j - 1) bad(std::string(name) + ": l_j out of 1..j-1 (j=" + std::to_string(j) + ")");
        }
    };
    check_set(mins, "min");
    check_set(maxs, "max");
    check_thetas(mins, lower, "theta0");
    check_thetas(maxs, upper, "theta1");
    if (middle && (*middle < 0 || *middle > level)) bad("theta2 value out of 0..k");
}

std::vector<StairAtom> StairFunction::atoms() const {
    validate();
    std::vector<StairAtom> out;
    for (int i : mins) out.push_back(StairAtom::min(level, i));
    for (const auto& [j, l] : lower) out.push_back(StairAtom::theta0(level, j - 1, l));
    if (middle) out.push_back(StairAtom::theta2(level, *middle));
    for (int i : maxs) out.push_back(StairAtom::max(level, i));
    for (const auto& [j, l] : upper) out.push_back(StairAtom::theta1(level, j - 1, l));
    return out;
}

std::size_t StairFunction::effective_size() const {
    return mins.size() + lower.size() + (middle && *middle > 0 ? 1 : 0) + maxs.size() + upper.size();
}

std::string to_string(const StairFunction& f) {
    std::vector<std::string> groups;
    auto set = [](const char* name, const std::vector<int>& s) {
        std::string out = std::string(name) + "{";
        for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
        return out + "}";
    };
    auto pairs = [](const char* name, const std::map<int, int>& t) {
        std::string out = std::string(name) + "{";
        for (const auto& [j, l] : t) out += "(" + std::to_string(j) + "," + std::to_string(l) + ")";
        return out + "}";
    };
    if (!f.mins.empty()) groups.push_back(set("min", f.mins));
    if (!f.lower.empty()) groups.push_back(pairs("theta0", f.lower));
    if (f.middle) groups.push_back("theta2{" + std::to_string(*f.middle) + "}");
    if (!f.maxs.empty()) groups.push_back(set("max", f.maxs));
    if (!f.upper.empty()) groups.push_back(pairs("theta1", f.upper));
    std::string out;
    for (const auto& g : groups) out += (out.empty() ? "" : " ") + g;
    return out;
}

StairFunction parse_stair_function(int level, std::string_view text) {
    StairFunction f;
    f.level = level;
    std::size_t i = 0;
    auto fail = [&](const std::string& why) -> void {
        throw Error(ErrorCode::ParseError, why + " in stair function '" + std::string(text) + "'");
    };
    auto skip = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    auto number = [&] {
        skip();
        int v = 0;
        auto [p, ec] = std::from_chars(text.data() + i, text.data() + text.size(), v);
        if (ec != std::errc()) fail("expected a number");
        i = static_cast<std::size_t>(p - text.data());
        return v;
    };
    auto expect = [&](char c) {
        skip();
        if (i >= text.size() || text[i] != c) fail(std::string("expected '") + c + "'");
        ++i;
    };
    auto peek = [&](char c) {
        skip();
        return i < text.size() && text[i] == c;
    };
    auto read_set = [&](std::vector<int>& out) {
        expect('{');
        while (!peek('}')) {
            out.push_back(number());
            if (!peek('}')) expect(',');
        }
        expect('}');
    };
    auto read_pairs = [&](std::map<int, int>& out) {
        expect('{');
        while (!peek('}')) {
            expect('(');
            const int j = number();
            expect(',');
            out[j] = number();
            expect(')');
            if (peek(',')) expect(',');
        }
        expect('}');
    };
    skip();
    if (text.substr(i) == "const") return f;
    while (true) {
        skip();
        if (i == text.size()) break;
        std::size_t start = i;
        while (i < text.size() && std::isalnum(static_cast<unsigned char>(text[i]))) ++i;
        const auto word = text.substr(start, i - start);
        if (word == "min") read_set(f.mins);
        else if (word == "max") read_set(f.maxs);
        else if (word == "theta0") read_pairs(f.lower);
        else if (word == "theta1") read_pairs(f.upper);
        else if (word == "theta2") {
            expect('{');
            f.middle = number();
            expect('}');
        } else fail("unknown group '" + std::string(word) + "'");
    }
    try {
        f.validate();
    } catch (const Error& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
    return f;
}

KVector eval(const StairFunction& f, const KVector& w) {
    if (w.level() != f.level)
        throw Error(ErrorCode::LevelMismatch, "level-" + std::to_string(f.level) + " stair function applied to a level-" +
                                                  std::to_string(w.level()) + " vector");
    const auto lm = landmarks(w);
    std::vector<Entry> all;
    for (const auto& a : f.atoms()) {
        auto v = eval_atom_with(a, w, lm);
        all.insert(all.end(), v.entries().begin(), v.entries().end());
    }
    std::sort(all.begin(), all.end());
    for (std::size_t i = 1; i < all.size(); ++i)
        if (all[i - 1].pos == all[i].pos)
            throw Error(ErrorCode::AtomOverlap, "two atoms of '" + to_string(f) + "' write position " +
                                                    std::to_string(all[i].pos) + " of " + to_string(w));
    return KVector(std::move(all));
}

std::vector<std::size_t> partition_labels(const StairFunction& f, std::span<const KVector> elements) {
    std::map<KVector, std::size_t> seen;
    std::vector<std::size_t> labels;
    labels.reserve(elements.size());
    for (const auto& w : elements) {
        auto [it, fresh] = seen.try_emplace(eval(f, w), seen.size());
        labels.push_back(it->second);
    }
    return labels;
}

Partition induced_relation(const StairFunction& f, std::span<const KVector> elements) {
    const auto labels = partition_labels(f, elements);
    Partition blocks;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == blocks.size()) blocks.emplace_back();
        blocks[labels[i]].push_back(i);
    }
    return blocks;
}

BlockSequence reference_sequence(int level, const DedupeOptions& options) {
    const std::size_t mult = std::max<std::size_t>(options.block_multiplicity, 1);
    const auto base = make_sos(level, options.reference_length * mult);
    std::vector<KVector> blocks;
    for (std::size_t b = 0; b < options.reference_length; ++b)
        blocks.push_back(block_sum(base.blocks().subspan(b * mult, mult)));
    return BlockSequence(level, std::move(blocks));
}

namespace {

using Side = std::pair<std::vector<int>, std::map<int, int>>;

// Index sets with their theta assignments, canonical order: sets by
// ascending bitmask, assignments lexicographic with "absent" first and the
// smallest j most significant.
std::vector<Side> side_options(int k) {
    std::vector<Side> out;
    for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << k); ++mask) {
        std::vector<int> set;
        for (int i = 1; i <= k; ++i)
            if (mask >> (i - 1) & 1U) set.push_back(i);
        std::vector<int> eligible;
        for (int j : set)
            if (j >= 3 && (mask >> (j - 2) & 1U)) eligible.push_back(j);
        std::vector<int> choice(eligible.size(), 0);  // 0 = absent, else l
        while (true) {
            std::map<int, int> thetas;
            for (std::size_t e = 0; e < eligible.size(); ++e)
                if (choice[e] > 0) thetas[eligible[e]] = choice[e];
            out.emplace_back(set, std::move(thetas));
            std::size_t e = eligible.size();
            while (e > 0) {
                --e;
                if (++choice[e] <= eligible[e] - 2) break;
                choice[e] = 0;
                if (e == 0) {
                    e = eligible.size() + 1;
                    break;
                }
            }
            if (eligible.empty() || e == eligible.size() + 1) break;
        }
    }
    return out;
}

} // namespace

std::vector<StairFunction> enumerate_raw_stair_functions(int level) {
    if (level < 1) throw Error(ErrorCode::OutOfRange, "stair functions need level >= 1");
    if (level > 8) throw Error(ErrorCode::OutOfRange, "stair function enumeration supports levels up to 8");
    const auto sides = side_options(level);
    std::vector<std::optional<int>> middles{std::nullopt};
    for (int l = 0; l <= level; ++l) middles.emplace_back(l);
    std::vector<StairFunction> out;
    for (const auto& lo : sides)
        for (const auto& mid : middles)
            for (const auto& hi : sides) {
                StairFunction f;
                f.level = level;
                f.mins = lo.first;
                f.lower = lo.second;
                f.middle = mid;
                f.maxs = hi.first;
                f.upper = hi.second;
                out.push_back(std::move(f));
            }
    return out;
}

namespace {

struct EntriesHash {
    std::size_t operator()(const std::vector<Entry>& v) const noexcept {
        std::uint64_t h = 1469598103934665603ULL;
        for (const auto& e : v) {
            h = (h ^ e.pos) * 1099511628211ULL;
            h = (h ^ static_cast<std::uint64_t>(e.value)) * 1099511628211ULL;
        }
        return static_cast<std::size_t>(h);
    }
};

// partition_labels over precomputed landmarks.
std::vector<std::size_t> labels_on(const StairFunction& f, const std::vector<KVector>& elements,
                                   const std::vector<Landmarks>& marks) {
    const auto atoms = f.atoms();
    std::unordered_map<std::vector<Entry>, std::size_t, EntriesHash> seen;
    std::vector<std::size_t> labels;
    labels.reserve(elements.size());
    std::vector<Entry> img;
    for (std::size_t i = 0; i < elements.size(); ++i) {
        img.clear();
        for (const auto& a : atoms) {
            auto v = eval_atom_with(a, elements[i], marks[i]);
            img.insert(img.end(), v.entries().begin(), v.entries().end());
        }
        std::sort(img.begin(), img.end());
        for (std::size_t j = 1; j < img.size(); ++j)
            if (img[j - 1].pos == img[j].pos)
                throw Error(ErrorCode::AtomOverlap, "two atoms of '" + to_string(f) + "' write position " +
                                                        std::to_string(img[j].pos) + " of " + to_string(elements[i]));
        auto [it, fresh] = seen.try_emplace(img, seen.size());
        labels.push_back(it->second);
    }
    return labels;
}

} // namespace

std::vector<StairClass> stair_classes(int level, const DedupeOptions& options) {
    const auto raw = enumerate_raw_stair_functions(level);
    std::vector<KVector> reference;
    for (auto& el : span_enumerate(reference_sequence(level, options))) reference.push_back(std::move(el.vector));
    std::vector<Landmarks> marks;
    marks.reserve(reference.size());
    for (const auto& w : reference) marks.push_back(landmarks(w));

    std::vector<StairClass> classes;
    std::map<std::vector<std::size_t>, std::size_t> by_labels;
    for (std::size_t r = 0; r < raw.size(); ++r) {
        auto labels = labels_on(raw[r], reference, marks);
        auto [it, fresh] = by_labels.try_emplace(labels, classes.size());
        if (fresh) classes.push_back({raw[r], {}, std::move(labels)});
        auto& c = classes[it->second];
        c.members.push_back(r);
        if (raw[r].effective_size() > c.representative.effective_size()) c.representative = raw[r];
    }
    return classes;
}

std::vector<StairFunction> enumerate_stair_functions(int level, bool dedupe, const DedupeOptions& options) {
    if (!dedupe) return enumerate_raw_stair_functions(level);
    std::vector<StairFunction> out;
    for (auto& c : stair_classes(level, options)) out.push_back(std::move(c.representative));
    return out;
}

} // namespace fink
