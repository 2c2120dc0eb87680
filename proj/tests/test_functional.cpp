#include <random>
#include <sstream>

#include "doctest.h"
#include "wft/functional.hpp"
#include "wft/random_data.hpp"

using wft::CoefficientField;
using wft::FluxModel;
using wft::Profile;
using wft::Rational;

namespace {

template <typename S>
CoefficientField<S> pair_of(Profile<S> a, Profile<S> b, S h = S(1) / 10, S t_end = S(2)) {
  return wft::couple(FluxModel<S>::burgers(), h, std::move(a), std::move(b), t_end);
}

// Nonincreasing staircase from `left` down to 0.
Profile<double> staircase(std::mt19937_64& gen, double left) {
  std::uniform_real_distribution<double> pos(-2.0, 2.0);
  std::uniform_int_distribution<int> steps(1, 4);
  const int n = steps(gen);
  std::vector<double> br;
  for (int i = 0; i < n; ++i) br.push_back(pos(gen));
  std::sort(br.begin(), br.end());
  std::vector<double> vals{left};
  std::uniform_real_distribution<double> frac(0.0, 1.0);
  for (int i = 0; i + 1 < n; ++i) vals.push_back(vals.back() * frac(gen));
  vals.push_back(0.0);
  return Profile<double>(br, vals);
}

}  // namespace

TEST_CASE("local rates on the hand scenarios") {
  using R = Rational;
  // u^I shock (1, -1), u^II = 0.
  auto lax = pair_of<R>(Profile<R>({R(0)}, {R(1), R(-1)}), Profile<R>(R(0)));
  auto snap = lax.snapshot(R(1, 2));
  auto plain = wft::norm_rate(snap);
  CHECK(plain.direct == R(-1));
  CHECK(plain.from_classes() == R(-1));
  CHECK(plain.lax == R(1));
  // Both weights vanish when m = 0: w_- = m + V^I(x-) = 0, w_+ = m + V^I(inf) - V^I(x+) = 0.
  CHECK(snap.weight_values(R(0)) == std::vector<R>{R(0), R(0)});
  CHECK(wft::norm_rate(snap, std::optional<R>(R(0))).direct == R(0));
  auto m1 = wft::norm_rate(snap, std::optional<R>(R(1)));
  CHECK(m1.direct == R(-1));
  CHECK(m1.from_classes() == R(-1));

  // u^I shock (2, 0), u^II = 3, m = 1.
  auto uc = pair_of<R>(Profile<R>({R(0)}, {R(2), R(0)}), Profile<R>(R(3)));
  auto uc_snap = uc.snapshot(R(1, 2));
  auto weighted = wft::norm_rate(uc_snap, std::optional<R>(R(1)));
  CHECK(weighted.direct == R(-3));
  CHECK(weighted.from_classes() == R(-3));
  CHECK(weighted.slow_fast == R(3));
  CHECK(wft::norm_rate(uc_snap).direct == R(0));
  const auto& j = uc_snap.jumps.at(0);
  CHECK(wft::mu_psi_atom(j.a_minus, j.lambda, j.psi_minus(), wft::abs_value(j.b_jump)) == R(3));
}

TEST_CASE("L1 identity on a compactly supported Lax scenario") {
  // The Lax jump of u^I sits inside a window where u^II = 0; outside it the
  // two solutions agree. The u^II fronts are undercompressive with psi_- = 0.
  using R = Rational;
  auto field = pair_of<R>(Profile<R>({R(0)}, {R(1), R(-1)}),
                          Profile<R>({R(-2), R(2)}, {R(1), R(0), R(-1)}), R(1, 10), R(1));
  auto report = wft::l1_identity_report(field, R(0), R(1));
  CHECK(report.ok);
  CHECK(report.norm_start == R(4));
  CHECK(report.norm_end == R(3));
  CHECK(report.lax_term == R(1));
  CHECK(report.rs_term == R(0));
  CHECK(report.residual == R(0));
  auto w = wft::weighted_identity_report(field, R(1), R(0), R(1));
  CHECK(w.ok);
  CHECK(w.residual == R(0));
  // TV(b) = 4, |b| = 2, |a_- - lambda| |psi_-| = 1/2: rate -(2 + 4 - 2) / 2.
  CHECK(w.lax_term == R(2));

  auto t51 = wft::theorem51_check(field, R(1), R(0), R(1));
  CHECK(t51.holds);
  CHECK(t51.product_i < R(0));
}

TEST_CASE("identical data give zero everywhere") {
  auto data = Profile<double>({-1.0, 0.0, 1.0}, {0.0, 1.0, -0.5, 0.0});
  auto field = pair_of<double>(data, data, 0.2);
  auto report = wft::weighted_identity_report(field, 1.0, 0.0, 2.0);
  CHECK(report.ok);
  CHECK(report.norm_start == 0.0);
  CHECK(report.norm_end == 0.0);
  CHECK(report.lax_term == 0.0);
  CHECK(report.rs_term == 0.0);
  auto t51 = wft::theorem51_check(field, 1.0, 0.0, 2.0);
  CHECK(t51.holds);
  CHECK(t51.lhs == 0.0);
  auto study = wft::limit_study<double>(
      FluxModel<double>::burgers(), [&](const double&) { return std::make_pair(data, data); },
      {0.2, 0.1, 0.05}, 1.0, 0.0, 1.0);
  CHECK(study.ok);
  for (const auto& row : study.rows) {
    CHECK(row.weighted_end == 0.0);
    CHECK(row.rs_term == 0.0);
  }
}

template <typename S>
void check_identities(std::uint64_t seed, int scenarios, const S& h) {
  std::mt19937_64 gen(seed);
  for (int n = 0; n < scenarios; ++n) {
    auto [p, q] = wft::random_profile_pair<S>(gen);
    auto field = pair_of<S>(p, q, h, S(2));
    auto plain = wft::l1_identity_report(field, S(0), S(2));
    CHECK_MESSAGE(plain.ok, plain.first_violation);
    CHECK(plain.symmetry_failures == 0);
    CHECK(plain.sign_lemma_failures == 0);
    for (const S& m : {S(0), S(1), S(100)}) {
      auto weighted = wft::weighted_identity_report(field, m, S(0), S(2));
      CHECK_MESSAGE(weighted.ok, weighted.first_violation);
      CHECK(weighted.closed_form_failures == 0);
      CHECK(weighted.closed_form_checks > 0);
      if constexpr (wft::ScalarTraits<S>::kExact) {
        CHECK(weighted.max_interval_residual == S(0));
        CHECK(weighted.residual == S(0));
      }
      auto t51 = wft::theorem51_check(field, m, S(0), S(2));
      CHECK_MESSAGE(t51.holds, t51.first_violation);
    }
    if constexpr (wft::ScalarTraits<S>::kExact) CHECK(plain.max_interval_residual == S(0));
    auto bound = wft::theorem31_bound_report(field, S(0), S(2));
    CHECK(bound.holds);
    CHECK(bound.rs_within_bound);
    auto corollary = wft::corollary_bound_report(field, S(1), S(0), S(2));
    CHECK(corollary.ok);
  }
}

TEST_CASE("identities on random pairs") {
  check_identities<double>(21, 10, 0.2);
  check_identities<Rational>(22, 3, Rational(1, 4));
}

TEST_CASE("large m recovers the plain identity") {
  std::mt19937_64 gen(5);
  auto [p, q] = wft::random_profile_pair<double>(gen);
  auto field = pair_of<double>(p, q, 0.2, 2.0);
  auto plain = wft::l1_identity_report(field, 0.0, 2.0);
  double previous = 1e300;
  for (double m : {1e3, 1e6}) {
    auto w = wft::weighted_identity_report(field, m, 0.0, 2.0);
    CHECK_MESSAGE(w.ok, w.first_violation);
    const double gap = std::abs(w.norm_end / m - plain.norm_end) +
                       std::abs(w.lax_term / (2 * m) * 2 - plain.lax_term) +
                       std::abs(w.rs_term / m - plain.rs_term);
    CHECK(gap < previous / 100);
    previous = gap;
  }
  CHECK(previous < 1e-4);
}

TEST_CASE("shock-only data: no rarefaction shocks, norms never increase") {
  std::mt19937_64 gen(31);
  for (int n = 0; n < 10; ++n) {
    auto field = pair_of<double>(staircase(gen, 2.0), staircase(gen, 2.0), 0.1, 2.0);
    auto plain = wft::l1_identity_report(field, 0.0, 2.0);
    auto weighted = wft::weighted_identity_report(field, 1.0, 0.0, 2.0);
    CHECK(plain.ok);
    CHECK(weighted.ok);
    CHECK(plain.rs_term == 0.0);
    CHECK(weighted.rs_term == 0.0);
    double last_plain = plain.norm_start;
    double last_weighted = weighted.norm_start;
    for (std::size_t k = 0; k < plain.intervals.size(); ++k) {
      CHECK(plain.intervals[k].norm_end <= last_plain + 1e-12);
      last_plain = plain.intervals[k].norm_end;
    }
    for (const auto& iv : weighted.intervals) {
      CHECK(iv.norm_start <= last_weighted + 1e-12);
      CHECK(iv.norm_end <= iv.norm_start + 1e-12);
      last_weighted = iv.norm_end;
    }
    auto corollary = wft::corollary_bound_report(field, 1.0, 0.0, 2.0);
    CHECK(corollary.weighted.slack >= -1e-12);
  }
}

TEST_CASE("convergence table export") {
  auto data = Profile<double>({0.0}, {1.0, 0.0});
  auto study = wft::limit_study<double>(
      FluxModel<double>::burgers(), [&](const double&) { return std::make_pair(data, data); },
      {0.5}, 0.0, 0.0, 1.0);
  std::ostringstream out;
  wft::write_convergence_csv(out, study);
  CHECK(out.str() ==
        "h,weighted_start,weighted_end,lax_term,slow_fast_term,rs_term,l1_rs_term,event_drop\n"
        "0.5,0,0,0,0,0,0,0\n");
  CHECK_THROWS_AS(wft::limit_study<double>(
                      FluxModel<double>::burgers(),
                      [&](const double&) { return std::make_pair(data, data); }, {0.1, 0.2}, 0.0,
                      0.0, 1.0),
                  std::invalid_argument);
}
