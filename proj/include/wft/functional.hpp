#ifndef WFT_FUNCTIONAL_HPP_
#define WFT_FUNCTIONAL_HPP_

#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "wft/coupling.hpp"

namespace wft {

// One interaction-free interval. Norms are limits from inside the interval;
// terms are integrated over it.
template <typename S>
struct IntervalTerms {
  S t0;
  S t1;
  S norm_start;
  S norm_end;
  S lax_term;
  S slow_fast_term;
  S rs_term;
  S residual;
  S tolerance;
  bool ok = true;
};

// Norm just before and just after an interior slab boundary.
template <typename S>
struct EventJump {
  S time;
  S before;
  S after;
};

template <typename S>
struct FunctionalReport {
  std::string identity;  // "l1" or "weighted"
  S s;
  S t;
  S m;
  S norm_start;
  S norm_end;
  S l1_start;
  S l1_end;
  S lax_term;
  S slow_fast_term;
  S rs_term;
  // Sum over events of before - after; zero for the plain norm.
  S event_drop;
  // |norm_end + decay terms + event_drop - norm_start - rs_term|.
  S residual;
  S max_interval_residual;
  std::vector<IntervalTerms<S>> intervals;
  std::vector<EventJump<S>> events;
  // Jump-level checks.
  long jumps_seen = 0;
  long symmetry_failures = 0;
  long sign_lemma_failures = 0;
  long closed_form_checks = 0;
  long closed_form_failures = 0;
  long event_increase_failures = 0;
  bool ok = true;
  std::string first_violation;
};

// d/dt of the norm at one time, two ways: `direct` sums
// (lambda - a_-)|psi_-| w_- + (a_+ - lambda)|psi_+| w_+ over the jumps; the
// class sums give rs - lax - slow_fast. Local, so psi need not be compactly
// supported. Without m the plain norm is used.
template <typename S>
struct NormRate {
  S direct;
  S lax;
  S slow_fast;
  S rs;
  S from_classes() const { return rs - lax - slow_fast; }
};

template <typename S>
NormRate<S> norm_rate(const CoefficientSnapshot<S>& snap, const std::optional<S>& m = std::nullopt);

// Identity for the plain L^1 norm of psi = u^II - u^I.
template <typename S>
FunctionalReport<S> l1_identity_report(const CoefficientField<S>& field, const S& s, const S& t);

// Identity for the weighted norm with parameter m.
template <typename S>
FunctionalReport<S> weighted_identity_report(const CoefficientField<S>& field, const S& m,
                                             const S& s, const S& t);

template <typename S>
struct BoundReport {
  S lhs;
  S rhs;
  S slack;
  // Measured rarefaction-shock contribution and the bound it is compared to.
  S rs_contribution;
  S rs_bound;
  double ratio = 0.0;
  bool holds = true;
  bool rs_within_bound = true;
  std::string detail;
};

// ||psi(t)||_w <= ||psi(s)||_w + (2m + TV(b)) sup_RS |b| int TV(psi), and the
// m -> infinity form for the plain norm. rs_contribution carries
// sup_RS |a_+ - a_-| and rs_bound sup f'' h.
template <typename S>
struct CorollaryReport {
  BoundReport<S> weighted;
  BoundReport<S> plain;
  S sup_rs_b;
  S sup_rs_a_jump;
  S a_jump_bound;
  S integrated_tv_psi;
  bool ok = true;
};

template <typename S>
CorollaryReport<S> corollary_bound_report(const CoefficientField<S>& field, const S& m,
                                          const S& s, const S& t);

// ||psi(t)||_1 + Lax term <= ||psi(s)||_1 + 2h(t - s) sup f'' (TV(u^I(0)) + TV(u^II(0))).
template <typename S>
BoundReport<S> theorem31_bound_report(const CoefficientField<S>& field, const S& s, const S& t);

template <typename S>
struct LimitRow {
  S h;
  S weighted_end;
  S weighted_start;
  S lax_term;
  S slow_fast_term;
  S rs_term;
  S l1_rs_term;
  S event_drop;
  bool balance_ok = true;
};

template <typename S>
struct LimitStudy {
  std::vector<LimitRow<S>> rows;
  bool rs_decrease_ok = true;
  bool balance_ok = true;
  bool ok = true;
  std::string detail;
};

// Builds the pair of initial data for a given h.
template <typename S>
using ScenarioAtH = std::function<std::pair<Profile<S>, Profile<S>>(const S& h)>;

// Runs both solutions for each h (decreasing) and tabulates the weighted
// balance. RS must satisfy RS_{k+1} <= 2 (h_{k+1} / h_k) RS_k + tol.
template <typename S>
LimitStudy<S> limit_study(const FluxModel<S>& flux, const ScenarioAtH<S>& scenario,
                          const std::vector<S>& h_list, const S& m, const S& s, const S& t);

template <typename S>
void write_convergence_csv(std::ostream& out, const LimitStudy<S>& study);

template <typename S>
struct Theorem51Report {
  S norm_start;
  S norm_end;
  S lax_term;        // factor 2m + TV(a)
  S product_i;       // int (a - f'(u^I)) psi dV^I
  S product_ii;      // int (f'(u^II) - a) psi dV^II
  S rs_defect;       // int sum_RS (2m + TV(b)) |a_- - lambda| |psi_-|
  S lhs;
  S rhs;
  S slack;
  bool holds = true;
  std::vector<S> interval_slack;
  std::string first_violation;
};

// The inequality with psi = u^II - u^I at finite h. The right side carries
// the rarefaction-shock defect, which vanishes as h -> 0.
template <typename S>
Theorem51Report<S> theorem51_check(const CoefficientField<S>& field, const S& m, const S& s,
                                   const S& t);

// Tolerance r (1 + magnitude) with r = relative_tolerance(); zero in exact mode.
template <typename S>
S identity_tolerance(const S& magnitude);

// Process-wide r, 1e-8 by default. Set it before starting worker threads.
void set_relative_tolerance(double value);
double relative_tolerance();

}  // namespace wft

#endif  // WFT_FUNCTIONAL_HPP_
