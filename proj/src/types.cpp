#include "nbp/types.hpp"

#include "nbp/errors.hpp"

namespace nbp {

std::string_view to_string(OptionType t) {
    return t == OptionType::Call ? "C" : "P";
}

std::string_view to_string(Direction d) {
    return d == Direction::Buy ? "buy" : "sell";
}

std::string_view to_string(Moneyness m) {
    switch (m) {
        case Moneyness::DOTM: return "dotm";
        case Moneyness::OTM: return "otm";
        case Moneyness::ATM: return "atm";
        case Moneyness::ITM: return "itm";
        case Moneyness::DITM: return "ditm";
        case Moneyness::Excluded: return "excluded";
    }
    return "?";
}

std::string_view to_string(MaturityBucket b) {
    switch (b) {
        case MaturityBucket::All: return "all";
        case MaturityBucket::Short: return "short";
        case MaturityBucket::Medium: return "medium";
        case MaturityBucket::Long: return "long";
    }
    return "?";
}

std::string_view to_string(TodSlot s) {
    switch (s) {
        case TodSlot::All: return "all";
        case TodSlot::Asia: return "asia";
        case TodSlot::Europe: return "europe";
        case TodSlot::US: return "us";
    }
    return "?";
}

OptionType option_type_from(std::string_view s) {
    if (s == "C" || s == "c" || s == "call") return OptionType::Call;
    if (s == "P" || s == "p" || s == "put") return OptionType::Put;
    throw ConfigError("unknown option type: " + std::string(s));
}

Direction direction_from(std::string_view s) {
    if (s == "buy") return Direction::Buy;
    if (s == "sell") return Direction::Sell;
    throw ConfigError("unknown direction: " + std::string(s));
}

Moneyness moneyness_from(std::string_view s) {
    if (s == "dotm") return Moneyness::DOTM;
    if (s == "otm") return Moneyness::OTM;
    if (s == "atm") return Moneyness::ATM;
    if (s == "itm") return Moneyness::ITM;
    if (s == "ditm") return Moneyness::DITM;
    if (s == "excluded") return Moneyness::Excluded;
    throw ConfigError("unknown moneyness band: " + std::string(s));
}

MaturityBucket maturity_bucket_from(std::string_view s) {
    if (s == "all") return MaturityBucket::All;
    if (s == "short") return MaturityBucket::Short;
    if (s == "medium") return MaturityBucket::Medium;
    if (s == "long") return MaturityBucket::Long;
    throw ConfigError("unknown maturity bucket: " + std::string(s));
}

TodSlot tod_slot_from(std::string_view s) {
    if (s == "all") return TodSlot::All;
    if (s == "asia") return TodSlot::Asia;
    if (s == "europe") return TodSlot::Europe;
    if (s == "us") return TodSlot::US;
    throw ConfigError("unknown time-of-day slot: " + std::string(s));
}

}  // namespace nbp
