#pragma once

#include <random>

#include "cabledeg/word.hpp"

namespace cabledeg::testing {

/// Chain-valid word of `length` symbols over bounded regions 1..regions and
/// the exterior, starting at bounded region `home`.
inline CableWord random_word(std::mt19937_64& rng, std::size_t length, std::uint32_t regions = 6,
                             std::uint32_t home = 1) {
    std::uniform_int_distribution<std::uint32_t> pick(0, regions);
    std::bernoulli_distribution coin(0.5);
    CableWord w;
    w.cable_id = std::to_string(home);
    w.home = RegionId::bounded(home);
    RegionId cur = w.home;
    for (std::size_t i = 0; i < length; ++i) {
        RegionId next;
        do {
            const auto k = pick(rng);
            next = k == 0 ? RegionId::exterior() : RegionId::bounded(k);
        } while (next == cur);
        w.symbols.push_back({cur, next, coin(rng) ? 1 : -1});
        cur = next;
    }
    return w;
}

}  // namespace cabledeg::testing
