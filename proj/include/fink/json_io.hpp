#pragma once

#include "fink/canon.hpp"
#include "fink/finvec.hpp"
#include "fink/pigeonhole.hpp"
#include "fink/staircase.hpp"

#include <nlohmann/json.hpp>

namespace fink {

using json = nlohmann::json;

// Vectors travel as their `k:{pos:val,...}` encoding.
void to_json(json& j, const KVector& x);
void from_json(const json& j, KVector& x);

// {"level": k, "blocks": [...]}
void to_json(json& j, const BlockSequence& X);
void from_json(const json& j, BlockSequence& X);

void to_json(json& j, const SpanTerm& t);
void from_json(const json& j, SpanTerm& t);

void to_json(json& j, const StairFunction& f);
void from_json(const json& j, StairFunction& f);

void to_json(json& j, const CanonGroup& g);
void from_json(const json& j, CanonGroup& g);
void to_json(json& j, const CanonicalMap& m);
void from_json(const json& j, CanonicalMap& m);

void to_json(json& j, const Horizon& h);
void from_json(const json& j, Horizon& h);
void to_json(json& j, const MixReport& r);
void from_json(const json& j, MixReport& r);

void to_json(json& j, const SearchStats& s);
void from_json(const json& j, SearchStats& s);
void to_json(json& j, const HomogResult& r);
void from_json(const json& j, HomogResult& r);

void to_json(json& j, const CountRow& r);
void from_json(const json& j, CountRow& r);

/// {"rule": name} or {"table": [[member, color], ...]}; a member is an array
/// of vector encodings.
void to_json(json& j, const Coloring& c);
void from_json(const json& j, Coloring& c);

void to_json(json& j, const CanonizeResult& r);
void from_json(const json& j, CanonizeResult& r);

} // namespace fink
