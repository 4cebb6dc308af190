#include "bfarm/bacteria_farm.hpp"

namespace bfarm {

std::string_view to_string(GrowthMode mode) {
    return mode == GrowthMode::sequential ? "sequential" : "round_robin";
}

GrowthMode parse_growth_mode(std::string_view text) {
    if (text == "sequential") return GrowthMode::sequential;
    if (text == "round_robin" || text == "round-robin") return GrowthMode::round_robin;
    throw ArgumentError("unknown growth mode '" + std::string(text) +
                        "' (expected sequential or round_robin)");
}

}  // namespace bfarm
