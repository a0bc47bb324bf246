#ifndef DCO_TESTS_GENERATOR_HPP_
#define DCO_TESTS_GENERATOR_HPP_

#include <random>

#include "dco/model.hpp"

namespace dco::testgen {

/// Random small scenario: 2-4 lifelines, 1-6 messages, at most one alt
/// and one loop (nested or disjoint), loop bodies capped so unfoldings
/// stay below ~16 events. Always satisfies validate_scenario() == {}.
Scenario random_scenario(std::mt19937& rng);

/// Chain scenario: each message's sender is the previous message's
/// receiver (ping-pong style); always locally controllable.
Scenario random_chain_scenario(std::mt19937& rng);

}  // namespace dco::testgen

#endif  // DCO_TESTS_GENERATOR_HPP_
