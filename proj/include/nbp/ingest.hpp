#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nbp/types.hpp"

namespace nbp {

enum class TradeFormat { Csv, Jsonl };

/// Fields decoded from an instrument name like "BTC-28JUL21-35000-C":
/// asset, expiry date (settles 08:00 UTC), strike in USD, option type.
struct ParsedInstrument {
    std::string asset;
    Millis expiry_ms = 0;
    double strike = 0.0;
    OptionType option_type = OptionType::Call;
};

/// Throws ParseError on any malformed segment. An instrument with a valid
/// date and strike but no trailing -C/-P segment throws with reason
/// "missing option type"; callers use that to bucket the drop.
ParsedInstrument parse_instrument(std::string_view name);

/// Render a trade's contract back to the canonical instrument name.
std::string format_instrument(std::string_view asset, Millis expiry_ms,
                              double strike, OptionType type);

struct TradeParseResult {
    std::vector<TradeTick> trades;  // sorted by timestamp, input order on ties
    CleaningReport report;
};

/// Parse and clean a trade stream. Row-level problems (bad field, missing
/// option type, implied vol outside (0, 5], non-positive amount or index,
/// expiry not after the trade) drop the row and land in the report; a bad
/// header or zero surviving rows throws ParseError.
TradeParseResult parse_trades(std::istream& in, TradeFormat format);

/// Convenience wrapper; format sniffed from the extension (.jsonl / .json
/// mean Jsonl, anything else Csv). Throws IoError when unreadable.
TradeParseResult parse_trades_file(const std::filesystem::path& path);

struct SpotParseResult {
    std::vector<SpotBar> bars;  // sorted by interval_end_ms, deduplicated
    std::size_t total_in = 0;
    std::size_t dropped = 0;
    std::vector<RowIssue> issues;
};

/// Parse spot bars: drops rows with non-positive close or negative volume,
/// keeps the last bar when timestamps collide.
SpotParseResult parse_spot(std::istream& in);
SpotParseResult parse_spot_file(const std::filesystem::path& path);

/// Writers emit shortest round-trip decimal forms so that
/// parse(write(x)) == x field by field and re-runs are byte identical.
void write_trades_csv(std::ostream& out, std::span<const TradeTick> trades,
                      std::string_view asset = "BTC");
void write_trades_jsonl(std::ostream& out, std::span<const TradeTick> trades,
                        std::string_view asset = "BTC");
void write_spot_csv(std::ostream& out, std::span<const SpotBar> bars);

}  // namespace nbp
