#pragma once

#include <string_view>

#include "iwasawa/series.hpp"

namespace iwasawa {

/// Parses a series literal such as `(W1 - p)^2 + 3*W`. See docs/grammar.md.
/// `line`/`column` locate the text inside a larger file for error messages.
PowerSeries parse_series(const RingContext& ctx, std::string_view text, int line = 1, int column = 1);

} // namespace iwasawa
