#include <random>
#include <sstream>

#include "doctest.h"
#include "wft/characteristics.hpp"
#include "wft/random_data.hpp"

using wft::FluxModel;
using wft::PiecewiseField;
using wft::Profile;
using wft::Rational;
using R = Rational;

namespace {

PiecewiseField<R> standing_lax() {
  return PiecewiseField<R>::single_slab(R(0), R(10), {{R(0), R(0)}}, {R(1, 2), R(-1, 2)});
}

template <typename S>
wft::CoefficientField<S> coupled(Profile<S> a, Profile<S> b, S h, S t_end) {
  return wft::couple(FluxModel<S>::burgers(), h, std::move(a), std::move(b), t_end);
}

// Nonincreasing staircase from `left` down to 0 on a grid of 1/8.
Profile<R> staircase(std::mt19937_64& gen, int left_quarters) {
  std::uniform_int_distribution<int> pos(-16, 16);
  std::vector<int> ticks;
  while (ticks.size() < 3) {
    int k = pos(gen);
    if (std::find(ticks.begin(), ticks.end(), k) == ticks.end()) ticks.push_back(k);
  }
  std::sort(ticks.begin(), ticks.end());
  std::vector<R> br;
  for (int k : ticks) br.push_back(R(k, 8));
  std::uniform_int_distribution<int> mid(1, left_quarters - 1);
  int a = mid(gen);
  int b = mid(gen);
  if (a < b) std::swap(a, b);
  return Profile<R>(br, {R(left_quarters, 4), R(a, 4), R(b, 4), R(0)});
}

}  // namespace

TEST_CASE("forward characteristics on hand-built fields") {
  auto lax = wft::forward_characteristic(standing_lax(), R(-1), R(0), R(5));
  CHECK(lax.position(R(2)) == R(0));
  CHECK(lax.position(R(1)) == R(-1, 2));
  CHECK(lax.position(R(5)) == R(0));
  CHECK(lax.segments.back().on_jump);

  auto flat = PiecewiseField<R>::single_slab(R(0), R(3), {}, {R(3, 4)});
  auto line = wft::forward_characteristic(flat, R(1), R(0), R(3));
  CHECK(line.position(R(3)) == R(1) + R(9, 4));
  CHECK(line.segments.size() == 1);

  auto uc = PiecewiseField<R>::single_slab(R(0), R(2), {{R(0), R(1)}}, {R(5, 2), R(3, 2)});
  CHECK(uc.slabs()[0].jumps[0].kind == wft::JumpKind::kSlowUndercompressive);
  auto cross = wft::forward_characteristic(uc, R(-1), R(0), R(2));
  CHECK(cross.vertices.at(1) == std::make_pair(R(2, 3), R(2, 3)));
  CHECK(cross.position(R(2)) == R(2, 3) + R(3, 2) * R(4, 3));
  CHECK_FALSE(cross.segments.back().on_jump);

  // Anchored on a rarefaction shock: two continuations.
  auto rs = PiecewiseField<R>::single_slab(R(0), R(1), {{R(0), R(0)}}, {R(-1, 2), R(1, 2)});
  CHECK_THROWS_AS(wft::forward_characteristic(rs, R(0), R(1, 2), R(1)), wft::RarefactionOnPath);
  CHECK_NOTHROW(wft::forward_characteristic(rs, R(1), R(0), R(1)));
}

TEST_CASE("backward characteristics on hand-built fields") {
  auto field = standing_lax();
  auto lo = wft::backward_characteristic(field, R(0), R(1), true);
  auto hi = wft::backward_characteristic(field, R(0), R(1), false);
  CHECK(lo.last() == std::make_pair(R(0), R(-1, 2)));
  CHECK(hi.last() == std::make_pair(R(0), R(1, 2)));
  CHECK(lo.segments.at(0).speed == R(1, 2));
  CHECK(hi.segments.at(0).speed == R(-1, 2));
  CHECK(wft::audit_path(field, lo).ok());
  CHECK(wft::audit_path(field, hi).ok());

  auto flat = PiecewiseField<R>::single_slab(R(0), R(2), {}, {R(-1)});
  auto a = wft::backward_characteristic(flat, R(0), R(2), true);
  auto b = wft::backward_characteristic(flat, R(0), R(2), false);
  CHECK(a.vertices == b.vertices);
  CHECK(a.last().second == R(2));

  CHECK_THROWS_AS(wft::backward_characteristic(flat, R(0), R(0), true), std::invalid_argument);
}

TEST_CASE("oleinik checks") {
  auto rs = PiecewiseField<R>::single_slab(R(0), R(1), {{R(0), R(0)}}, {R(-1, 2), R(1, 2)});
  auto flagged = wft::oleinik_report(rs, R(1, 10), R(1));
  CHECK(flagged.violations == 1);
  CHECK(flagged.max_increase == R(1));
  CHECK(flagged.first_violation.find("x = 0") != std::string::npos);
  CHECK(wft::oleinik_report(standing_lax(), R(1, 10), R(1)).ok());
  CHECK_THROWS_AS(wft::oleinik_report(rs, R(0), R(1)), std::invalid_argument);

  // A Burgers fan from t = 0: rise h across each member, spacing h t.
  auto fan = coupled<R>(Profile<R>({R(0)}, {R(0), R(1)}), Profile<R>(R(-2)), R(1, 10), R(2));
  auto report = wft::oleinik_report(fan, R(1, 2), R(2));
  REQUIRE(report.c_i);
  CHECK(*report.c_i == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(*report.c_ii == 0.0);
  CHECK(*report.e == doctest::Approx(0.5));  // f'' = 1
  // The fan members are rarefaction shocks of a at this h.
  CHECK(report.violations > 0);
  CHECK(report.max_increase <= R(1, 10));

  std::mt19937_64 gen(3);
  for (int n = 0; n < 10; ++n) {
    auto field = coupled<R>(staircase(gen, 8), staircase(gen, 8), R(1, 4), R(2));
    auto entropic = wft::oleinik_report(field, R(1, 100), R(2));
    CHECK(entropic.ok());
    CHECK(entropic.jumps_checked > 0);
    CHECK(*entropic.c_i == 0.0);
  }
}

struct PathTally {
  long forward = 0;
  long forward_rejected = 0;
  long backward = 0;
  long backward_rejected = 0;
  long increasing_jump_segments = 0;
};

// Entropic fields (shock-only data) must trace every anchor; on general fields
// a path may stop at a rarefaction shock of a.
template <typename S>
PathTally check_random_paths(std::uint64_t seed, int scenarios, const S& h, bool entropic) {
  std::mt19937_64 gen(seed);
  std::mt19937_64 anchors(seed + 1);
  PathTally tally;
  for (int n = 0; n < scenarios; ++n) {
    wft::CoefficientField<S> field = [&] {
      if constexpr (std::is_same_v<S, R>) {
        if (entropic) return coupled<R>(staircase(gen, 8), staircase(gen, 8), h, S(2));
      }
      auto [p, q] = wft::random_profile_pair<S>(gen);
      return coupled<S>(p, q, h, S(2));
    }();
    auto pf = PiecewiseField<S>::from_coefficient(field, S(0), S(2));
    const auto mesh = wft::mesh_times(pf, S(2));
    std::uniform_real_distribution<double> where(-3.0, 3.0);
    std::vector<S> starts;
    for (int k = 0; k < 6; ++k) {
      starts.push_back(S(std::round(where(anchors) * 1024) / 1024 + 1.0 / 4096));
    }
    std::sort(starts.begin(), starts.end());
    std::vector<wft::CharacteristicPath<S>> paths;
    for (const S& x0 : starts) {
      try {
        auto path = wft::forward_characteristic(pf, x0, S(0), S(2));
        auto audit = wft::audit_path(pf, path);
        CHECK_MESSAGE(audit.sandwich_failures == 0, audit.first_failure);
        tally.increasing_jump_segments += audit.increasing_jump_segments;
        for (auto tie : {wft::TieBreak::kPreferLeft, wft::TieBreak::kPreferRight}) {
          wft::TraceOptions<S> opts;
          opts.tie_break = tie;
          auto other = wft::forward_characteristic(pf, x0, S(0), S(2), opts);
          for (const S& t : mesh) {
            CHECK(wft::to_double(wft::abs_value(S(other.position(t) - path.position(t)))) <=
                  1e-12);
          }
        }
        paths.push_back(std::move(path));
        ++tally.forward;
      } catch (const wft::RarefactionOnPath&) {
        CHECK_FALSE(entropic);
        ++tally.forward_rejected;
      }
    }
    for (std::size_t k = 0; k + 1 < paths.size(); ++k) {
      // Merged paths agree up to rounding in floating point.
      const S slack = wft::ScalarTraits<S>::kExact ? S(0) : S(1e-12);
      for (const S& t : mesh) CHECK_FALSE(paths[k + 1].position(t) + slack < paths[k].position(t));
    }
    for (const S& x0 : starts) {
      for (bool minimal : {true, false}) {
        try {
          auto back = wft::backward_characteristic(pf, x0, S(2), minimal);
          auto audit = wft::audit_path(pf, back);
          CHECK_MESSAGE(audit.ok(), audit.first_failure);
          tally.increasing_jump_segments += audit.increasing_jump_segments;
          ++tally.backward;
        } catch (const wft::RarefactionOnPath&) {
          CHECK_FALSE(entropic);
          ++tally.backward_rejected;
        }
      }
    }
  }
  if (entropic) {
    CHECK(tally.forward == 6 * scenarios);
    CHECK(tally.backward == 12 * scenarios);
    CHECK(tally.increasing_jump_segments == 0);
  }
  return tally;
}

TEST_CASE("random fields: uniqueness, order and genuineness") {
  check_random_paths<R>(11, 6, R(1, 4), true);
  auto exact = check_random_paths<R>(12, 4, R(1, 4), false);
  auto approx = check_random_paths<double>(13, 10, 0.2, false);
  MESSAGE("rational: forward " << exact.forward << " rejected " << exact.forward_rejected
                               << ", backward " << exact.backward << " rejected "
                               << exact.backward_rejected);
  MESSAGE("float: forward " << approx.forward << " rejected " << approx.forward_rejected
                            << ", backward " << approx.backward << " rejected "
                            << approx.backward_rejected);
  CHECK(exact.forward > 0);
  CHECK(approx.forward > 0);
}

TEST_CASE("maximum principle and conservation") {
  // u^II >= u^I on [-1, 1] initially.
  auto field = coupled<R>(Profile<R>({R(-1, 2), R(1, 2)}, {R(0), R(1), R(0)}),
                          Profile<R>({R(-3, 4), R(3, 4)}, {R(0), R(3, 2), R(0)}), R(1, 4), R(2));
  auto pf = PiecewiseField<R>::from_coefficient(field, R(0), R(2));
  auto report = wft::maximum_principle_check(pf, R(-1), R(1), R(2));
  CHECK(report.violations == 0);
  CHECK(report.samples >= 51);
  REQUIRE(report.conservation);
  CHECK(report.conservation->failures == 0);
  CHECK(report.conservation->max_error == R(0));
  CHECK(report.ok());

  auto point = wft::maximum_principle_check(pf, R(1, 3), R(1, 3), R(2));
  CHECK(point.ok());

  auto swapped = coupled<R>(Profile<R>({R(-3, 4), R(3, 4)}, {R(0), R(3, 2), R(0)}),
                            Profile<R>({R(-1, 2), R(1, 2)}, {R(0), R(1), R(0)}), R(1, 4), R(2));
  CHECK_THROWS_AS(wft::maximum_principle_check(
                      PiecewiseField<R>::from_coefficient(swapped, R(0), R(2)), R(-1), R(1), R(2)),
                  std::invalid_argument);

  // Conservation between a backward pair on an entropic field; its value at
  // t = 0 is the integral over the feet.
  std::mt19937_64 gen(8);
  auto shocks = coupled<R>(staircase(gen, 8), staircase(gen, 6), R(1, 4), R(2));
  auto spf = PiecewiseField<R>::from_coefficient(shocks, R(0), R(2));
  auto cons = wft::conservation_check(spf, R(-1), R(2), R(2), R(0));
  CHECK(cons.ok());
  const R feet = wft::integral(spf.psi_at(R(0)), cons.left.last().second, cons.right.last().second);
  CHECK(feet == cons.reference);
}

TEST_CASE("path export") {
  auto lax = wft::forward_characteristic(standing_lax(), R(-1), R(0), R(3));
  std::ostringstream out;
  wft::write_paths_csv<R>(out, {lax});
  CHECK(out.str() ==
        "path_id,direction,t,x\n"
        "0,forward,0,-1\n"
        "0,forward,2,0\n"
        "0,forward,3,0\n");
}
