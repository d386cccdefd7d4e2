#pragma once

#include "fink/finvec.hpp"

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace fink::cli {

enum Status : int { ok = 0, exhausted = 1, usage = 2 };

/// args excludes the program name. Data goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "x0 | x0+Tx2", each side a comma separated list of blocks written as
/// sums of T^i x_j terms over `base`, or as vector encodings.
std::pair<BlockSequence, BlockSequence> parse_pair(std::string_view text, const BlockSequence& base);
BlockSequence parse_approximation(std::string_view text, const BlockSequence& base);

} // namespace fink::cli
