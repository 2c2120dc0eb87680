#ifndef WFT_RANDOM_DATA_HPP_
#define WFT_RANDOM_DATA_HPP_

#include <random>

#include "wft/profile.hpp"

namespace wft {

struct RandomProfileOptions {
  int max_jumps = 8;
  double x_lo = -2.0;
  double x_hi = 2.0;
  double state_lo = -2.0;
  double state_hi = 2.0;
  // Rational draws: breakpoints are multiples of 1/x_denominator and states
  // multiples of 1/state_denominator. Double draws ignore these.
  int x_denominator = 8;
  int state_denominator = 4;
  // Double draws: states are rounded to multiples of state_grid when > 0.
  double state_grid = 0.0;
};

// Compactly supported piecewise-constant data: zero far field and between
// 1 and max_jumps breakpoints.
template <typename S>
Profile<S> random_profile(std::mt19937_64& gen, const RandomProfileOptions& options = {});

// Two independent draws whose breakpoint sets are disjoint.
template <typename S>
std::pair<Profile<S>, Profile<S>> random_profile_pair(std::mt19937_64& gen,
                                                      const RandomProfileOptions& options = {});

}  // namespace wft

#endif  // WFT_RANDOM_DATA_HPP_
