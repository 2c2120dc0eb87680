#include <random>
#include <sstream>

#include "doctest.h"
#include "wft/coupling.hpp"
#include "wft/random_data.hpp"

using wft::CoefficientField;
using wft::FluxModel;
using wft::JumpKind;
using wft::Partition;
using wft::Profile;
using wft::Rational;

namespace {

CoefficientField<double> burgers_pair(Profile<double> a, Profile<double> b, double h = 0.1,
                                      double t_end = 2.0) {
  return wft::couple(FluxModel<double>::burgers(), h, std::move(a), std::move(b), t_end);
}

}  // namespace

TEST_CASE("classify") {
  CHECK(wft::classify(0.5, -0.5, 0.0) == JumpKind::kLax);
  CHECK(wft::classify(2.5, 1.5, 1.0) == JumpKind::kSlowUndercompressive);
  CHECK(wft::classify(-0.5, 0.5, 0.0) == JumpKind::kRarefactionShock);
  CHECK(wft::classify(-1.0, -2.0, 0.0) == JumpKind::kFastUndercompressive);
  // Equality goes to the undercompressive classes.
  CHECK(wft::classify(1.0, -1.0, 1.0) == JumpKind::kFastUndercompressive);
  CHECK(wft::classify(1.0, 2.0, 1.0) == JumpKind::kSlowUndercompressive);
  CHECK(wft::classify(1.0 + 5e-11, 0.0, 1.0) == JumpKind::kFastUndercompressive);
  CHECK(wft::classify(1.0 + 5e-11, 0.0, 1.0, 0.0) == JumpKind::kLax);
  CHECK(wft::classify(Rational(1, 2), Rational(-1, 2), Rational(0)) == JumpKind::kLax);
}

TEST_CASE("Lax jump of a: shock (1, -1) against zero") {
  auto field = burgers_pair(Profile<double>({0.0}, {1.0, -1.0}), Profile<double>(0.0));
  auto [a, jumps] = wft::build_coefficient(field, 0.5);
  REQUIRE(jumps.size() == 1);
  const auto& j = jumps[0];
  CHECK(j.a_minus == doctest::Approx(0.5));
  CHECK(j.a_plus == doctest::Approx(-0.5));
  CHECK(j.lambda == doctest::Approx(0.0));
  CHECK(j.kind == JumpKind::kLax);
  CHECK(j.partition == Partition::kI);
  CHECK(j.b_jump == -2.0);
  CHECK(wft::sign_table_holds(j));
  CHECK(a(-1.0) == 0.5);
  CHECK(a(1.0) == -0.5);
}

TEST_CASE("slow undercompressive jump: shock (2, 0) against 3") {
  using R = Rational;
  auto field = wft::couple(FluxModel<R>::burgers(), R(1, 10), Profile<R>({R(0)}, {R(2), R(0)}),
                           Profile<R>(R(3)), R(2));
  auto snap = field.snapshot(R(1, 2));
  REQUIRE(snap.jumps.size() == 1);
  const auto& j = snap.jumps[0];
  CHECK(j.a_minus == R(5, 2));
  CHECK(j.a_plus == R(3, 2));
  CHECK(j.lambda == R(1));
  CHECK(j.kind == JumpKind::kSlowUndercompressive);
  CHECK(j.kappa_minus == R(1));
  CHECK(j.kappa_plus == R(3));
  CHECK(wft::sign_table_holds(j));

  auto w = snap.weight_values(R(1));
  CHECK(w == std::vector<R>{R(3), R(1)});
  auto weight = wft::build_weight(field, R(1), R(1, 2));
  CHECK(weight(R(1)) == R(1));
  CHECK(weight(R(1, 4)) == R(3));
  CHECK(wft::trace_combination(j, w[0], w[1]) == R(-2));
  CHECK(wft::trace_combination_closed_form(j, R(1), snap.tv_b()) == R(-2));
}

TEST_CASE("equal constants give a constant coefficient and w = m") {
  auto field = burgers_pair(Profile<double>(0.4), Profile<double>(0.4));
  auto [a, jumps] = wft::build_coefficient(field, 1.0);
  CHECK(jumps.empty());
  CHECK(a.jump_count() == 0);
  CHECK(a(0.0) == doctest::Approx(0.4));
  auto w = wft::build_weight(field, 2.5, 1.0);
  CHECK(w.jump_count() == 0);
  CHECK(w(0.0) == 2.5);
}

TEST_CASE("coincident fronts") {
  CHECK_THROWS_AS(burgers_pair(Profile<double>({0.0}, {1.0, 0.0}),
                               Profile<double>({0.0}, {2.0, 0.0}))
                      .snapshot(0.0),
                  wft::DegenerateInput);
  // Shocks (2, 0) from 0 and (3, 1) from -1 cross at t = 1: 1 = -1 + 2 t.
  auto crossing = burgers_pair(Profile<double>({0.0}, {2.0, 0.0}),
                               Profile<double>({-1.0}, {3.0, 1.0}));
  const auto& times = crossing.slab_times();
  CHECK(std::find_if(times.begin(), times.end(),
                     [](double t) { return std::abs(t - 1.0) < 1e-12; }) != times.end());
  CHECK_THROWS_AS(crossing.snapshot(1.0), wft::DegenerateInput);
  CHECK_NOTHROW(crossing.snapshot(1.1));

  auto same = Profile<double>({-1.0, 0.5}, {0.0, 1.5, 0.0});
  auto identical = burgers_pair(same, same, 0.25);
  auto snap = identical.snapshot(0.7);
  REQUIRE(!snap.jumps.empty());
  for (const auto& j : snap.jumps) {
    CHECK(j.partition == Partition::kBoth);
    CHECK(j.kappa_minus == 0.0);
    CHECK(j.kappa_plus == 0.0);
  }
  CHECK(snap.tv_b() == doctest::Approx(2 * 3.0));
  for (double w : snap.weight_values(1.0)) CHECK(w >= 1.0);
}

template <typename S>
void check_random_fields(std::uint64_t seed, int trials, const S& h) {
  std::mt19937_64 gen(seed);
  auto flux = FluxModel<S>::burgers();
  int checked = 0;
  int closed_forms = 0;
  const S slack = wft::ScalarTraits<S>::kExact ? S(0) : S(1e-14);
  for (int trial = 0; trial < trials; ++trial) {
    auto [p, q] = wft::random_profile_pair<S>(gen);
    CoefficientField<S> field = wft::couple(flux, h, p, q, S(2));
    const auto& times = field.slab_times();
    for (std::size_t k = 1; k < times.size(); ++k) {
      const S mid = (times[k - 1] + times[k]) / 2;
      auto snap = field.snapshot(mid);
      const S tv = snap.tv_b();
      for (const S& m : {S(0), S(1), S(100)}) {
        auto w = snap.weight_values(m);
        for (const auto& value : w) {
          CHECK(!(value < m));
          CHECK(!(m + tv + slack * (1 + m + tv) < value));
        }
        for (std::size_t j = 0; j < snap.jumps.size(); ++j) {
          const auto& jump = snap.jumps[j];
          const S dw = w[j + 1] - w[j];
          if (jump.kind == JumpKind::kSlowUndercompressive && wft::closed_form_applies(jump)) {
            CHECK(!(S(0) < dw));
          }
          if (jump.kind == JumpKind::kFastUndercompressive && wft::closed_form_applies(jump)) {
            CHECK(!(dw < S(0)));
          }
          if (wft::closed_form_applies(jump)) {
            ++closed_forms;
            const S got = wft::trace_combination(jump, w[j], w[j + 1]);
            const S want = wft::trace_combination_closed_form(jump, m, tv);
            if constexpr (wft::ScalarTraits<S>::kExact) {
              CHECK(got == want);
            } else {
              CHECK(got == doctest::Approx(want).epsilon(1e-12));
            }
          }
        }
      }
      for (const auto& jump : snap.jumps) {
        ++checked;
        CHECK(wft::sign_table_holds(jump));
        if (jump.kind == JumpKind::kRarefactionShock) CHECK(!(h < wft::abs_value(jump.b_jump)));
      }
    }
  }
  CHECK(checked > 100);
  CHECK(closed_forms > 100);
}

TEST_CASE("sign table, weight bounds, jump law and closed forms on random pairs") {
  check_random_fields<double>(11, 20, 0.2);
  check_random_fields<Rational>(12, 5, Rational(1, 4));
}

TEST_CASE("jump table export") {
  auto field = burgers_pair(Profile<double>({0.0}, {2.0, 0.0}), Profile<double>(3.0));
  std::ostringstream out;
  wft::write_jump_table(out, std::vector{field.snapshot(0.5)}, 1.0);
  CHECK(out.str() ==
        "t,x,kind,partition,lambda,a_minus,a_plus,b_jump,w_minus,w_plus\n"
        "0.5,0.5,slow_uc,I,1,2.5,1.5,-2,3,1\n");
}
