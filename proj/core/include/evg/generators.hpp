#pragma once

#include <cstddef>
#include <cstdint>

#include "evg/events.hpp"

namespace evg {

// m directed dyadic events over n nodes: a uniformly random ordered pair of
// distinct nodes per event, times advanced by exponential(1) gaps. Throws
// std::invalid_argument when n < 2.
EventSequence gen_random_complete(std::size_t n, std::size_t m, std::uint64_t seed);

// Node 0 is u*. Events occur at t = 1..m with a uniformly random ordered
// pair, except that an event following a u*-sourced event (u*, v) is forced
// to start at v, with a uniformly random target other than v. Throws
// std::invalid_argument when n < 3.
EventSequence gen_ustar(std::size_t n, std::size_t m, std::uint64_t seed);

inline constexpr NodeId kUStar = 0;

} // namespace evg
