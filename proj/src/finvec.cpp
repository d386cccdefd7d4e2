#include "fink/finvec.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <limits>

namespace fink {

std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidVector: return "InvalidVector";
    case ErrorCode::InvalidSequence: return "InvalidSequence";
    case ErrorCode::OverlappingSupports: return "OverlappingSupports";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::LevelMismatch: return "LevelMismatch";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::AtomOverlap: return "AtomOverlap";
    case ErrorCode::InvalidStairFunction: return "InvalidStairFunction";
    case ErrorCode::InvalidCanonicalMap: return "InvalidCanonicalMap";
    case ErrorCode::NotInFront: return "NotInFront";
    case ErrorCode::IncompatibleReduct: return "IncompatibleReduct";
    case ErrorCode::MissingColor: return "MissingColor";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::Overflow: return "Overflow";
    }
    return "Unknown";
}

namespace {

void check_entries(const std::vector<Entry>& entries) {
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (entries[i].value <= 0)
            throw Error(ErrorCode::InvalidVector, "stored values must be positive");
        if (i > 0 && entries[i - 1].pos >= entries[i].pos)
            throw Error(ErrorCode::InvalidVector, "positions must be strictly ascending");
    }
}

int max_value(const std::vector<Entry>& entries) {
    int m = 0;
    for (const auto& e : entries) m = std::max(m, e.value);
    return m;
}

} // namespace

KVector::KVector(std::vector<Entry> entries) : entries_(std::move(entries)) {
    check_entries(entries_);
    level_ = max_value(entries_);
}

KVector::KVector(int level, std::vector<Entry> entries) : level_(level), entries_(std::move(entries)) {
    check_entries(entries_);
    if (level < 0) throw Error(ErrorCode::InvalidVector, "negative level");
    if (max_value(entries_) != level)
        throw Error(ErrorCode::InvalidVector,
                    "level " + std::to_string(level) + " is not the largest value of the vector");
}

Position KVector::min_support() const {
    if (entries_.empty()) throw Error(ErrorCode::InvalidVector, "zero vector has no support");
    return entries_.front().pos;
}

Position KVector::max_support() const {
    if (entries_.empty()) throw Error(ErrorCode::InvalidVector, "zero vector has no support");
    return entries_.back().pos;
}

int KVector::at(Position pos) const noexcept {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), pos,
                               [](const Entry& e, Position p) { return e.pos < p; });
    return (it != entries_.end() && it->pos == pos) ? it->value : 0;
}

bool precedes(const KVector& a, const KVector& b) {
    if (a.is_zero() || b.is_zero()) return false;
    return a.max_support() < b.min_support();
}

KVector tetris(const KVector& x, int shift) {
    if (shift < 0) throw Error(ErrorCode::OutOfRange, "negative tetris exponent");
    if (shift == 0) return x;
    std::vector<Entry> out;
    out.reserve(x.size());
    for (const auto& e : x.entries())
        if (e.value > shift) out.push_back({e.pos, e.value - shift});
    return KVector(std::max(x.level() - shift, 0), std::move(out));
}

KVector block_sum(std::span<const KVector> parts) {
    if (parts.empty()) throw Error(ErrorCode::EmptyInput, "block_sum of no parts");
    std::vector<Entry> all;
    for (const auto& p : parts) all.insert(all.end(), p.entries().begin(), p.entries().end());
    std::sort(all.begin(), all.end());
    for (std::size_t i = 1; i < all.size(); ++i)
        if (all[i - 1].pos == all[i].pos)
            throw Error(ErrorCode::OverlappingSupports,
                        "position " + std::to_string(all[i].pos) + " is shared by two parts");
    return KVector(std::move(all));
}

BlockSequence::BlockSequence(int level, std::vector<KVector> blocks)
    : level_(level), blocks_(std::move(blocks)) {
    if (level < 1) throw Error(ErrorCode::InvalidSequence, "block sequences need level >= 1");
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
        if (blocks_[i].level() != level)
            throw Error(ErrorCode::LevelMismatch, "block " + std::to_string(i) + " has level " +
                                                      std::to_string(blocks_[i].level()) +
                                                      ", expected " + std::to_string(level));
        if (i > 0 && !precedes(blocks_[i - 1], blocks_[i]))
            throw Error(ErrorCode::InvalidSequence,
                        "block " + std::to_string(i) + " does not follow block " + std::to_string(i - 1));
    }
}

BlockSequence BlockSequence::extended(KVector block) const {
    auto blocks = blocks_;
    blocks.push_back(std::move(block));
    return BlockSequence(level_, std::move(blocks));
}

KVector BlockSequence::flatten() const {
    if (blocks_.empty()) return {};
    return block_sum(blocks_);
}

void validate_term(const BlockSequence& X, const SpanTerm& term) {
    if (term.parts.empty()) throw Error(ErrorCode::InvalidSequence, "empty span term");
    bool has_zero = false;
    for (std::size_t i = 0; i < term.parts.size(); ++i) {
        const auto& p = term.parts[i];
        if (p.block >= X.size()) throw Error(ErrorCode::OutOfRange, "span term refers to a missing block");
        if (p.shift < 0 || p.shift >= X.level())
            throw Error(ErrorCode::InvalidSequence, "shift out of 0..k-1");
        if (i > 0 && term.parts[i - 1].block >= p.block)
            throw Error(ErrorCode::InvalidSequence, "span term indices must ascend");
        has_zero = has_zero || p.shift == 0;
    }
    if (!has_zero) throw Error(ErrorCode::InvalidSequence, "span term needs an unshifted part");
}

KVector realize(const BlockSequence& X, const SpanTerm& term) {
    validate_term(X, term);
    std::vector<Entry> out;
    for (const auto& p : term.parts) {
        auto piece = tetris(X[p.block], p.shift);
        out.insert(out.end(), piece.entries().begin(), piece.entries().end());
    }
    return KVector(X.level(), std::move(out));
}

std::uint64_t span_size(std::size_t blocks, int level) {
    // sum_r C(m,r) (k^r - (k-1)^r) = (k+1)^m - k^m
    auto pow = [](std::uint64_t b, std::size_t e) {
        std::uint64_t r = 1;
        for (std::size_t i = 0; i < e; ++i) {
            if (b != 0 && r > std::numeric_limits<std::uint64_t>::max() / b)
                throw Error(ErrorCode::Overflow, "span size overflows 64 bits");
            r *= b;
        }
        return r;
    };
    auto k = static_cast<std::uint64_t>(level);
    return pow(k + 1, blocks) - pow(k, blocks);
}

std::vector<SpanElement> span_enumerate(const BlockSequence& X) {
    const std::size_t m = X.size();
    const int k = X.level();
    if (m > 40) throw Error(ErrorCode::OutOfRange, "span of more than 40 blocks is not enumerable");

    std::vector<std::vector<KVector>> shifted(m);
    for (std::size_t i = 0; i < m; ++i)
        for (int s = 0; s < k; ++s) shifted[i].push_back(tetris(X[i], s));

    std::vector<SpanElement> out;
    out.reserve(static_cast<std::size_t>(span_size(m, k)));
    std::vector<std::size_t> idx;
    std::vector<int> shifts;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << m); ++mask) {
        idx.clear();
        for (std::size_t i = 0; i < m; ++i)
            if (mask >> i & 1U) idx.push_back(i);
        shifts.assign(idx.size(), 0);
        while (true) {
            if (std::find(shifts.begin(), shifts.end(), 0) != shifts.end()) {
                SpanTerm term;
                std::vector<Entry> entries;
                for (std::size_t j = 0; j < idx.size(); ++j) {
                    term.parts.push_back({idx[j], shifts[j]});
                    const auto& piece = shifted[idx[j]][static_cast<std::size_t>(shifts[j])];
                    entries.insert(entries.end(), piece.entries().begin(), piece.entries().end());
                }
                out.push_back({KVector(k, std::move(entries)), std::move(term)});
            }
            std::size_t j = 0;
            while (j < shifts.size() && ++shifts[j] == k) shifts[j++] = 0;
            if (j == shifts.size()) break;
        }
    }
    return out;
}

std::optional<SpanTerm> span_contains(const BlockSequence& X, const KVector& w) {
    if (w.level() > X.level())
        throw Error(ErrorCode::LevelMismatch, "vector level " + std::to_string(w.level()) +
                                                  " exceeds sequence level " + std::to_string(X.level()));
    // a lower level means no unshifted part
    if (w.level() < X.level()) return std::nullopt;
    const int k = X.level();
    SpanTerm term;
    bool has_zero = false;
    auto entries = w.entries();
    std::size_t e = 0;
    std::size_t b = 0;
    while (e < entries.size()) {
        const Position pos = entries[e].pos;
        while (b < X.size() && X[b].max_support() < pos) ++b;
        if (b == X.size() || X[b].min_support() > pos) return std::nullopt;
        // entries [e, f) fall inside the interval of block b
        std::size_t f = e;
        int top = 0;
        while (f < entries.size() && entries[f].pos <= X[b].max_support()) top = std::max(top, entries[f++].value);
        const int shift = k - top;
        const auto expected = tetris(X[b], shift);
        if (!std::equal(expected.entries().begin(), expected.entries().end(), entries.begin() + static_cast<std::ptrdiff_t>(e),
                        entries.begin() + static_cast<std::ptrdiff_t>(f)) ||
            expected.size() != f - e)
            return std::nullopt;
        term.parts.push_back({b, shift});
        has_zero = has_zero || shift == 0;
        e = f;
        ++b;
    }
    if (!has_zero) return std::nullopt;
    return term;
}

std::optional<std::vector<SpanTerm>> leq_witness(const BlockSequence& X, const BlockSequence& Y,
                                                 OrderKind kind) {
    if (X.level() != Y.level()) throw Error(ErrorCode::LevelMismatch, "leq on sequences of different levels");
    std::vector<SpanTerm> witnesses;
    witnesses.reserve(X.size());
    for (const auto& x : X) {
        auto term = span_contains(Y, x);
        if (!term) return std::nullopt;
        witnesses.push_back(std::move(*term));
    }
    if (kind == OrderKind::finalized && !Y.empty()) {
        // X <= Y|l for some l < |Y| iff no witness touches the last block of Y.
        const bool uses_last = std::any_of(witnesses.begin(), witnesses.end(), [&](const SpanTerm& t) {
            return t.last_block() + 1 == Y.size();
        });
        if (!uses_last) return std::nullopt;
    }
    return witnesses;
}

bool leq(const BlockSequence& X, const BlockSequence& Y, OrderKind kind) {
    return leq_witness(X, Y, kind).has_value();
}

BlockSequence restrict(const BlockSequence& X, std::size_t n) {
    if (n > X.size())
        throw Error(ErrorCode::OutOfRange,
                    "prefix length " + std::to_string(n) + " exceeds " + std::to_string(X.size()));
    return BlockSequence(X.level(), std::vector<KVector>(X.begin(), X.begin() + static_cast<std::ptrdiff_t>(n)));
}

SpanIndex::SpanIndex(const BlockSequence& X) : base_(X), elements_(span_enumerate(X)) {
    from_block_.resize(X.size() + 1);
    for (std::size_t r = 0; r < elements_.size(); ++r) {
        const auto first = elements_[r].term.first_block();
        for (std::size_t b = 0; b <= first; ++b) from_block_[b].push_back(r);
    }
}

std::span<const std::size_t> SpanIndex::starting_from(std::size_t block) const {
    if (block >= from_block_.size()) return {};
    return from_block_[block];
}

namespace {

bool approximations_rec(const SpanIndex& index, std::size_t n, std::size_t next_block,
                        std::vector<KVector>& prefix,
                        const std::function<bool(const BlockSequence&)>& visit) {
    if (prefix.size() == n) return visit(BlockSequence(index.base().level(), prefix));
    for (std::size_t r : index.starting_from(next_block)) {
        const auto& el = index.elements()[r];
        prefix.push_back(el.vector);
        const bool go_on = approximations_rec(index, n, el.term.last_block() + 1, prefix, visit);
        prefix.pop_back();
        if (!go_on) return false;
    }
    return true;
}

} // namespace

bool for_each_approximation(const SpanIndex& index, std::size_t n,
                            const std::function<bool(const BlockSequence&)>& visit) {
    if (n > index.base().size())
        throw Error(ErrorCode::OutOfRange, "approximation length exceeds the sequence length");
    std::vector<KVector> prefix;
    return approximations_rec(index, n, 0, prefix, visit);
}

std::vector<BlockSequence> approximations(const BlockSequence& X, std::size_t n) {
    if (n > X.size())
        throw Error(ErrorCode::OutOfRange, "approximation length exceeds the sequence length");
    SpanIndex index(X);
    std::vector<BlockSequence> out;
    for_each_approximation(index, n, [&](const BlockSequence& s) {
        out.push_back(s);
        return true;
    });
    return out;
}

Depth depth(const BlockSequence& X, const BlockSequence& s) {
    auto w = leq_witness(s, X);
    if (!w) return std::nullopt;
    std::size_t d = 0;
    for (const auto& t : *w) d = std::max(d, t.last_block() + 1);
    return d;
}

BlockSequence tail(const BlockSequence& X, const BlockSequence& s) {
    if (X.level() != s.level()) throw Error(ErrorCode::LevelMismatch, "tail of sequences with different levels");
    if (s.empty()) return X;
    const Position bound = s.back().max_support();
    std::vector<KVector> kept;
    for (const auto& x : X)
        if (x.min_support() > bound) kept.push_back(x);
    return BlockSequence(X.level(), std::move(kept));
}

BlockSequence tail(const BlockSequence& X, const BlockSequence& s, const BlockSequence& t) {
    return tail(tail(X, s), t);
}

std::string to_string(const KVector& x) {
    std::string out = std::to_string(x.level()) + ":{";
    bool first = true;
    for (const auto& e : x.entries()) {
        if (!first) out += ',';
        first = false;
        out += std::to_string(e.pos) + ':' + std::to_string(e.value);
    }
    return out + '}';
}

namespace {

class Cursor {
public:
    explicit Cursor(std::string_view text) : text_(text) {}

    void skip_ws() {
        while (i_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[i_]))) ++i_;
    }
    bool done() {
        skip_ws();
        return i_ == text_.size();
    }
    bool peek(char c) {
        skip_ws();
        return i_ < text_.size() && text_[i_] == c;
    }
    void expect(char c) {
        if (!peek(c)) fail(std::string("expected '") + c + "'");
        ++i_;
    }
    template <class T>
    T number() {
        skip_ws();
        T value{};
        auto [ptr, ec] = std::from_chars(text_.data() + i_, text_.data() + text_.size(), value);
        if (ec != std::errc()) fail("expected a number");
        i_ = static_cast<std::size_t>(ptr - text_.data());
        return value;
    }
    [[noreturn]] void fail(const std::string& msg) const {
        throw Error(ErrorCode::ParseError, msg + " at offset " + std::to_string(i_) + " in '" +
                                               std::string(text_) + "'");
    }

private:
    std::string_view text_;
    std::size_t i_ = 0;
};

} // namespace

KVector parse_kvector(std::string_view text) {
    Cursor c(text);
    const int level = c.number<int>();
    c.expect(':');
    c.expect('{');
    std::vector<Entry> entries;
    if (!c.peek('}')) {
        while (true) {
            const auto pos = c.number<Position>();
            c.expect(':');
            const int value = c.number<int>();
            if (value < 1 || value > level) c.fail("value out of 1..level");
            entries.push_back({pos, value});
            if (c.peek('}')) break;
            c.expect(',');
        }
    }
    c.expect('}');
    if (!c.done()) c.fail("trailing characters");
    try {
        return KVector(level, std::move(entries));
    } catch (const Error& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
}

BlockSequence parse_blocks(std::string_view text, std::optional<int> level) {
    std::vector<KVector> blocks;
    auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string_view::npos && text[first] == '[') {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorCode::ParseError, e.what());
        }
        if (!j.is_array()) throw Error(ErrorCode::ParseError, "expected a JSON array of vector strings");
        for (const auto& item : j) {
            if (!item.is_string()) throw Error(ErrorCode::ParseError, "expected a vector string");
            blocks.push_back(parse_kvector(item.get<std::string>()));
        }
    } else {
        // Tokens end at the closing brace of each vector.
        std::size_t i = 0;
        while (i < text.size()) {
            while (i < text.size() && (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == ',')) ++i;
            if (i == text.size()) break;
            auto close = text.find('}', i);
            if (close == std::string_view::npos) throw Error(ErrorCode::ParseError, "unterminated vector");
            blocks.push_back(parse_kvector(text.substr(i, close + 1 - i)));
            i = close + 1;
        }
    }
    int k = level.value_or(blocks.empty() ? 0 : blocks.front().level());
    if (k < 1) throw Error(ErrorCode::ParseError, "cannot infer the level of an empty block list");
    return BlockSequence(k, std::move(blocks));
}

std::string to_string(const SpanTerm& term) {
    std::string out;
    for (const auto& p : term.parts) {
        if (!out.empty()) out += '+';
        if (p.shift > 0) out += "T" + (p.shift > 1 ? "^" + std::to_string(p.shift) : std::string());
        out += "x" + std::to_string(p.block);
    }
    return out;
}

std::string to_string(const BlockSequence& X) {
    std::string out = "(";
    for (std::size_t i = 0; i < X.size(); ++i) {
        if (i > 0) out += ' ';
        out += to_string(X[i]);
    }
    return out + ')';
}

BlockSequence unit_blocks(int level, std::size_t count, Position origin) {
    std::vector<KVector> blocks;
    for (std::size_t i = 0; i < count; ++i) blocks.emplace_back(level, std::vector<Entry>{{origin + i, level}});
    return BlockSequence(level, std::move(blocks));
}

} // namespace fink
