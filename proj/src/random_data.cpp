#include "wft/random_data.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace wft {

namespace {

std::vector<int> distinct_ticks(std::mt19937_64& gen, int lo, int hi, int count) {
  std::uniform_int_distribution<int> pick(lo, hi);
  std::set<int> ticks;
  while (static_cast<int>(ticks.size()) < count) ticks.insert(pick(gen));
  return {ticks.begin(), ticks.end()};
}

}  // namespace

template <>
Profile<double> random_profile(std::mt19937_64& gen, const RandomProfileOptions& options) {
  std::uniform_int_distribution<int> count(1, options.max_jumps);
  std::uniform_real_distribution<double> pos(options.x_lo, options.x_hi);
  std::uniform_real_distribution<double> val(options.state_lo, options.state_hi);
  const int n = count(gen);
  std::vector<double> br;
  for (int i = 0; i < n; ++i) br.push_back(pos(gen));
  std::sort(br.begin(), br.end());
  std::vector<double> vals{0.0};
  for (int i = 0; i + 1 < n; ++i) {
    double v = val(gen);
    if (options.state_grid > 0.0) v = options.state_grid * std::round(v / options.state_grid);
    vals.push_back(v);
  }
  vals.push_back(0.0);
  return Profile<double>(std::move(br), std::move(vals));
}

template <>
Profile<Rational> random_profile(std::mt19937_64& gen, const RandomProfileOptions& options) {
  std::uniform_int_distribution<int> count(1, options.max_jumps);
  const int n = count(gen);
  const int dx = options.x_denominator;
  const int du = options.state_denominator;
  auto ticks = distinct_ticks(gen, static_cast<int>(std::ceil(options.x_lo * dx)),
                              static_cast<int>(std::floor(options.x_hi * dx)), n);
  std::uniform_int_distribution<int> val(static_cast<int>(std::ceil(options.state_lo * du)),
                                         static_cast<int>(std::floor(options.state_hi * du)));
  std::vector<Rational> br;
  for (int k : ticks) br.emplace_back(k, dx);
  std::vector<Rational> vals{Rational(0)};
  for (int i = 0; i + 1 < n; ++i) vals.emplace_back(val(gen), du);
  vals.emplace_back(0);
  return Profile<Rational>(std::move(br), std::move(vals));
}

template <typename S>
std::pair<Profile<S>, Profile<S>> random_profile_pair(std::mt19937_64& gen,
                                                      const RandomProfileOptions& options) {
  Profile<S> first = random_profile<S>(gen, options);
  while (true) {
    Profile<S> second = random_profile<S>(gen, options);
    const auto& a = first.breakpoints();
    bool clash = false;
    for (const auto& x : second.breakpoints()) {
      if (std::binary_search(a.begin(), a.end(), x)) clash = true;
    }
    if (!clash) return {std::move(first), std::move(second)};
  }
}

template std::pair<Profile<double>, Profile<double>> random_profile_pair(
    std::mt19937_64&, const RandomProfileOptions&);
template std::pair<Profile<Rational>, Profile<Rational>> random_profile_pair(
    std::mt19937_64&, const RandomProfileOptions&);

}  // namespace wft
