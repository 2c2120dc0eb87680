#include "wft/functional.hpp"

#include <algorithm>
#include <atomic>
#include <stdexcept>
#include <sstream>

namespace wft {

namespace {
std::atomic<double> g_relative_tolerance{1e-8};
}  // namespace

void set_relative_tolerance(double value) {
  if (!(value >= 0.0)) throw std::invalid_argument("tolerance must be nonnegative");
  g_relative_tolerance.store(value);
}

double relative_tolerance() { return g_relative_tolerance.load(); }

template <typename S>
S identity_tolerance(const S& magnitude) {
  if constexpr (ScalarTraits<S>::kExact) {
    return S(0);
  } else {
    return relative_tolerance() * (1.0 + std::abs(magnitude));
  }
}

namespace {

template <typename S>
S speed_gap(const ClassifiedJump<S>& j) {
  return abs_value(S(j.a_minus - j.lambda)) * abs_value(j.psi_minus());
}

// Tolerance for pointwise relations at a jump.
template <typename S>
S jump_tolerance(const ClassifiedJump<S>& j) {
  if constexpr (ScalarTraits<S>::kExact) {
    return S(0);
  } else {
    const double scale = (1.0 + std::abs(j.psi_minus()) + std::abs(j.psi_plus())) *
                         (1.0 + std::abs(j.lambda) + std::abs(j.a_minus) + std::abs(j.a_plus));
    return 1e-10 * scale;
  }
}

template <typename S>
void note_violation(FunctionalReport<S>& report, const std::string& what) {
  report.ok = false;
  if (report.first_violation.empty()) report.first_violation = what;
}

template <typename S>
std::string where(const S& x, const S& t) {
  std::ostringstream out;
  out << "x = " << to_double(x) << ", t = " << to_double(t);
  return out.str();
}

template <typename S>
void check_jump(FunctionalReport<S>& report, const ClassifiedJump<S>& j) {
  ++report.jumps_seen;
  const S tol = jump_tolerance(j);
  const S left_flux = (j.a_minus - j.lambda) * j.psi_minus();
  const S right_flux = (j.a_plus - j.lambda) * j.psi_plus();
  const bool sign_change = (j.psi_minus() < S(0) && S(0) < j.psi_plus()) ||
                           (j.psi_plus() < S(0) && S(0) < j.psi_minus());
  bool lemma = abs_value(S(left_flux - right_flux)) <= tol;
  if (j.kind == JumpKind::kLax || j.kind == JumpKind::kRarefactionShock) {
    const S sym = (j.lambda - j.a_minus) * abs_value(j.psi_minus()) +
                  (j.lambda - j.a_plus) * abs_value(j.psi_plus());
    if (abs_value(sym) > tol) {
      ++report.symmetry_failures;
      note_violation(report, "trace symmetry fails at " + where(j.position, j.time));
    }
    if (!sign_change) {
      lemma = lemma && abs_value(j.psi_minus()) <= tol && abs_value(j.psi_plus()) <= tol;
    }
  } else if (sign_change) {
    lemma = lemma && abs_value(left_flux) <= tol;
  }
  if (!lemma) {
    ++report.sign_lemma_failures;
    note_violation(report, "jump relation for psi fails at " + where(j.position, j.time));
  }
}

template <typename S>
FunctionalReport<S> identity_report(const CoefficientField<S>& field, bool weighted, const S& m,
                                    const S& s, const S& t) {
  FunctionalReport<S> report;
  report.identity = weighted ? "weighted" : "l1";
  report.s = s;
  report.t = t;
  report.m = m;
  report.lax_term = report.slow_fast_term = report.rs_term = report.event_drop = S(0);
  report.residual = report.max_interval_residual = S(0);

  auto slabs = field.slabs(s, t);
  if (slabs.empty()) {
    auto snap = field.snapshot(s);
    const auto w = weighted ? snap.weight_values(m) : std::vector<S>{};
    report.norm_start = report.norm_end = snap.weighted_norm_at(s, w);
    report.l1_start = report.l1_end = snap.weighted_norm_at(s, {});
    return report;
  }

  for (const auto& [t0, t1] : slabs) {
    const auto snap = field.snapshot(S((t0 + t1) / 2));
    const auto w = weighted ? snap.weight_values(m) : std::vector<S>{};
    const S tv_b = snap.tv_b();
    IntervalTerms<S> terms;
    terms.t0 = t0;
    terms.t1 = t1;
    terms.norm_start = snap.weighted_norm_at(t0, w);
    terms.norm_end = snap.weighted_norm_at(t1, w);
    const S l1_start = weighted ? snap.weighted_norm_at(t0, {}) : terms.norm_start;
    const S l1_end = weighted ? snap.weighted_norm_at(t1, {}) : terms.norm_end;
    S lax(0);
    S slow_fast(0);
    S rs(0);
    for (std::size_t k = 0; k < snap.jumps.size(); ++k) {
      const auto& j = snap.jumps[k];
      check_jump(report, j);
      const S x = speed_gap(j);
      const S b = abs_value(j.b_jump);
      if (!weighted) {
        if (j.kind == JumpKind::kLax) lax += 2 * x;
        if (j.kind == JumpKind::kRarefactionShock) rs += 2 * x;
        continue;
      }
      switch (j.kind) {
        case JumpKind::kLax:
          lax += (2 * m + tv_b - b) * x;
          break;
        case JumpKind::kRarefactionShock:
          rs += (2 * m + tv_b + b) * x;
          break;
        default:
          slow_fast += b * x;
      }
      if (closed_form_applies(j, field.classification_tol())) {
        ++report.closed_form_checks;
        const S got = trace_combination(j, w[k], w[k + 1], field.classification_tol());
        const S want = trace_combination_closed_form(j, m, tv_b);
        // got is a difference of weights, so its rounding scales with them.
        const S tol = ScalarTraits<S>::kExact
                          ? S(0)
                          : S(1e-12 * (1.0 + to_double(S(w[k] + w[k + 1] + abs_value(want)))));
        if (abs_value(S(got - want)) > tol) {
          ++report.closed_form_failures;
          note_violation(report, "weight trace combination differs from its closed form at " +
                                     where(j.position, j.time));
        }
      }
    }
    const S dt = t1 - t0;
    terms.lax_term = lax * dt;
    terms.slow_fast_term = slow_fast * dt;
    terms.rs_term = rs * dt;
    terms.residual = abs_value(S(terms.norm_end + terms.lax_term + terms.slow_fast_term -
                                 terms.norm_start - terms.rs_term));
    // Scale by the norm being balanced; for large m that is ||psi||_w.
    terms.tolerance = identity_tolerance(std::max(l1_start, terms.norm_start));
    terms.ok = terms.residual <= terms.tolerance;
    if (!terms.ok) {
      std::ostringstream msg;
      msg << "identity residual " << to_double(terms.residual) << " on [" << to_double(t0) << ", "
          << to_double(t1) << "]";
      note_violation(report, msg.str());
    }
    report.max_interval_residual = std::max(report.max_interval_residual, terms.residual);

    if (report.intervals.empty()) {
      report.norm_start = terms.norm_start;
      report.l1_start = l1_start;
    } else {
      const S before = report.intervals.back().norm_end;
      EventJump<S> ev{t0, before, terms.norm_start};
      const S tol = identity_tolerance(std::max(report.l1_end, before));
      const S change = ev.after - ev.before;
      // The plain norm is continuous in time; the weighted one may only drop.
      if ((weighted && change > tol) || (!weighted && abs_value(change) > tol)) {
        ++report.event_increase_failures;
        std::ostringstream msg;
        msg << "norm jumps by " << to_double(change) << " at t = " << to_double(t0);
        note_violation(report, msg.str());
      }
      report.event_drop += ev.before - ev.after;
      report.events.push_back(ev);
    }
    report.norm_end = terms.norm_end;
    report.l1_end = l1_end;
    report.lax_term += terms.lax_term;
    report.slow_fast_term += terms.slow_fast_term;
    report.rs_term += terms.rs_term;
    report.intervals.push_back(std::move(terms));
  }
  report.residual = abs_value(S(report.norm_end + report.lax_term + report.slow_fast_term +
                                report.event_drop - report.norm_start - report.rs_term));
  if (report.residual > identity_tolerance(std::max(report.l1_start, report.norm_start)) * S(static_cast<int>(slabs.size()))) {
    note_violation(report, std::string("summed identity residual too large"));
  }
  return report;
}

}  // namespace

template <typename S>
NormRate<S> norm_rate(const CoefficientSnapshot<S>& snap, const std::optional<S>& m) {
  NormRate<S> rate{S(0), S(0), S(0), S(0)};
  std::vector<S> w = m ? snap.weight_values(*m) : std::vector<S>(snap.piece_count(), S(1));
  const S tv_b = snap.tv_b();
  for (std::size_t k = 0; k < snap.jumps.size(); ++k) {
    const auto& j = snap.jumps[k];
    rate.direct += (j.lambda - j.a_minus) * abs_value(j.psi_minus()) * w[k] +
                   (j.a_plus - j.lambda) * abs_value(j.psi_plus()) * w[k + 1];
    const S x = speed_gap(j);
    const S b = abs_value(j.b_jump);
    if (!m) {
      if (j.kind == JumpKind::kLax) rate.lax += 2 * x;
      if (j.kind == JumpKind::kRarefactionShock) rate.rs += 2 * x;
    } else if (j.kind == JumpKind::kLax) {
      rate.lax += (2 * *m + tv_b - b) * x;
    } else if (j.kind == JumpKind::kRarefactionShock) {
      rate.rs += (2 * *m + tv_b + b) * x;
    } else {
      rate.slow_fast += b * x;
    }
  }
  return rate;
}

template <typename S>
FunctionalReport<S> l1_identity_report(const CoefficientField<S>& field, const S& s, const S& t) {
  return identity_report(field, false, S(0), s, t);
}

template <typename S>
FunctionalReport<S> weighted_identity_report(const CoefficientField<S>& field, const S& m,
                                             const S& s, const S& t) {
  if (m < S(0)) throw std::invalid_argument("weighted_identity_report: m must be >= 0");
  return identity_report(field, true, m, s, t);
}

template <typename S>
CorollaryReport<S> corollary_bound_report(const CoefficientField<S>& field, const S& m,
                                          const S& s, const S& t) {
  const auto weighted = weighted_identity_report(field, m, s, t);
  const auto plain = l1_identity_report(field, s, t);
  CorollaryReport<S> out;
  out.sup_rs_b = out.sup_rs_a_jump = out.integrated_tv_psi = S(0);
  S tv_b_max(0);
  for (const auto& [t0, t1] : field.slabs(s, t)) {
    const auto snap = field.snapshot(S((t0 + t1) / 2));
    tv_b_max = std::max(tv_b_max, snap.tv_b());
    out.integrated_tv_psi += total_variation(snap.psi()) * (t1 - t0);
    for (const auto& j : snap.jumps) {
      if (j.kind != JumpKind::kRarefactionShock) continue;
      out.sup_rs_b = std::max(out.sup_rs_b, abs_value(j.b_jump));
      out.sup_rs_a_jump = std::max(out.sup_rs_a_jump, abs_value(S(j.a_plus - j.a_minus)));
    }
  }
  const S h = std::max(field.run_i().h(), field.run_ii().h());
  out.a_jump_bound = ScalarTraits<S>::from_double(field.flux().sup_second_derivative()) * h;

  auto fill = [](BoundReport<S>& r, const S& lhs, const S& rhs, const S& tol) {
    r.lhs = lhs;
    r.rhs = rhs;
    r.slack = rhs - lhs;
    r.holds = !(rhs + tol < lhs);
  };
  const S tol = identity_tolerance(plain.l1_start);
  fill(out.weighted, weighted.norm_end,
       weighted.norm_start + (2 * m + tv_b_max) * out.sup_rs_b * out.integrated_tv_psi, tol);
  out.weighted.rs_contribution = weighted.rs_term;
  fill(out.plain, plain.norm_end,
       plain.norm_start + 2 * out.sup_rs_b * out.integrated_tv_psi, tol);
  out.plain.rs_contribution = plain.rs_term;
  out.weighted.rs_bound = out.plain.rs_bound = out.a_jump_bound;
  const bool a_ok = !(out.a_jump_bound + tol < out.sup_rs_a_jump);
  out.weighted.rs_within_bound = out.plain.rs_within_bound = a_ok;
  out.ok = out.weighted.holds && out.plain.holds && a_ok && weighted.ok && plain.ok;
  return out;
}

template <typename S>
BoundReport<S> theorem31_bound_report(const CoefficientField<S>& field, const S& s, const S& t) {
  const auto plain = l1_identity_report(field, s, t);
  BoundReport<S> out;
  const S h = std::max(field.run_i().h(), field.run_ii().h());
  const S sup_f2 = ScalarTraits<S>::from_double(field.flux().sup_second_derivative());
  const S tv0 = total_variation(field.run_i().initial()) + total_variation(field.run_ii().initial());
  out.rs_bound = 2 * h * (t - s) * sup_f2 * tv0;
  out.lhs = plain.norm_end + plain.lax_term;
  out.rhs = plain.norm_start + out.rs_bound;
  out.slack = out.rhs - out.lhs;
  out.rs_contribution = plain.rs_term;
  const S tol = identity_tolerance(plain.l1_start);
  out.holds = !(out.rhs + tol < out.lhs) && plain.ok;
  out.rs_within_bound = !(out.rs_bound + tol < out.rs_contribution);
  out.ratio = to_double(out.rs_bound) > 0.0
                  ? to_double(out.rs_contribution) / to_double(out.rs_bound)
                  : 0.0;
  if (!plain.ok) out.detail = plain.first_violation;
  return out;
}

template <typename S>
LimitStudy<S> limit_study(const FluxModel<S>& flux, const ScenarioAtH<S>& scenario,
                          const std::vector<S>& h_list, const S& m, const S& s, const S& t) {
  for (std::size_t k = 1; k < h_list.size(); ++k) {
    if (!(h_list[k] < h_list[k - 1])) {
      throw std::invalid_argument("limit_study: h_list must be decreasing");
    }
  }
  LimitStudy<S> study;
  for (const auto& h : h_list) {
    auto [data_i, data_ii] = scenario(h);
    const auto field = couple(flux, h, std::move(data_i), std::move(data_ii), t);
    const auto weighted = weighted_identity_report(field, m, s, t);
    const auto plain = l1_identity_report(field, s, t);
    LimitRow<S> row;
    row.h = h;
    row.weighted_start = weighted.norm_start;
    row.weighted_end = weighted.norm_end;
    row.lax_term = weighted.lax_term;
    row.slow_fast_term = weighted.slow_fast_term;
    row.rs_term = weighted.rs_term;
    row.l1_rs_term = plain.rs_term;
    row.event_drop = weighted.event_drop;
    const S tol = identity_tolerance(plain.l1_start);
    row.balance_ok = !(row.weighted_start + row.rs_term + tol <
                       row.weighted_end + row.lax_term + row.slow_fast_term) &&
                     weighted.ok;
    if (!row.balance_ok) {
      study.balance_ok = false;
      if (study.detail.empty()) {
        study.detail = "weighted balance fails at h = " + ScalarTraits<S>::to_string(h);
      }
    }
    if (!study.rows.empty()) {
      const auto& prev = study.rows.back();
      const S allowed = 2 * (h / prev.h) * prev.rs_term + tol;
      if (allowed < row.rs_term) {
        study.rs_decrease_ok = false;
        if (study.detail.empty()) {
          study.detail = "RS term does not decrease at h = " + ScalarTraits<S>::to_string(h);
        }
      }
    }
    study.rows.push_back(std::move(row));
  }
  study.ok = study.balance_ok && study.rs_decrease_ok;
  return study;
}

template <typename S>
void write_convergence_csv(std::ostream& out, const LimitStudy<S>& study) {
  using T = ScalarTraits<S>;
  out << "h,weighted_start,weighted_end,lax_term,slow_fast_term,rs_term,l1_rs_term,event_drop\n";
  for (const auto& r : study.rows) {
    out << T::to_string(r.h) << ',' << T::to_string(r.weighted_start) << ','
        << T::to_string(r.weighted_end) << ',' << T::to_string(r.lax_term) << ','
        << T::to_string(r.slow_fast_term) << ',' << T::to_string(r.rs_term) << ','
        << T::to_string(r.l1_rs_term) << ',' << T::to_string(r.event_drop) << '\n';
  }
}

template <typename S>
Theorem51Report<S> theorem51_check(const CoefficientField<S>& field, const S& m, const S& s,
                                   const S& t) {
  const auto weighted = weighted_identity_report(field, m, s, t);
  Theorem51Report<S> out;
  out.norm_start = weighted.norm_start;
  out.norm_end = weighted.norm_end;
  out.lax_term = out.product_i = out.product_ii = out.rs_defect = S(0);
  const S tol = identity_tolerance(weighted.l1_start);
  std::size_t index = 0;
  for (const auto& [t0, t1] : field.slabs(s, t)) {
    const auto snap = field.snapshot(S((t0 + t1) / 2));
    const S tv_b = snap.tv_b();
    S tv_a(0);
    for (const auto& j : snap.jumps) tv_a += abs_value(S(j.a_plus - j.a_minus));
    S lax(0);
    S p1(0);
    S p2(0);
    S rs(0);
    for (const auto& j : snap.jumps) {
      const S x = speed_gap(j);
      const S b = abs_value(j.b_jump);
      if (j.kind == JumpKind::kLax) lax += (2 * m + tv_a) * x;
      if (j.kind == JumpKind::kRarefactionShock) rs += (2 * m + tv_b) * x;
      if (j.partition != Partition::kII) p1 += mu_psi_atom(j.a_minus, j.lambda, j.psi_minus(), b);
      if (j.partition != Partition::kI) p2 -= mu_psi_atom(j.a_minus, j.lambda, j.psi_minus(), b);
    }
    const S dt = t1 - t0;
    out.lax_term += lax * dt;
    out.product_i += p1 * dt;
    out.product_ii += p2 * dt;
    out.rs_defect += rs * dt;
    const auto& terms = weighted.intervals[index++];
    const S slack = terms.norm_start + rs * dt - (terms.norm_end + (lax + p1 + p2) * dt);
    out.interval_slack.push_back(slack);
    if (slack < -tol && out.first_violation.empty()) {
      std::ostringstream msg;
      msg << "inequality fails on [" << to_double(t0) << ", " << to_double(t1) << "] by "
          << to_double(-slack);
      out.first_violation = msg.str();
    }
  }
  out.lhs = out.norm_end + out.lax_term + out.product_i + out.product_ii;
  out.rhs = out.norm_start + out.rs_defect;
  out.slack = out.rhs - out.lhs;
  out.holds = !(out.slack < -tol) && out.first_violation.empty();
  if (!weighted.ok && out.first_violation.empty()) out.first_violation = weighted.first_violation;
  return out;
}

#define WFT_INSTANTIATE_FUNCTIONAL(S)                                                          \
  template S identity_tolerance(const S&);                                                     \
  template NormRate<S> norm_rate(const CoefficientSnapshot<S>&, const std::optional<S>&);     \
  template FunctionalReport<S> l1_identity_report(const CoefficientField<S>&, const S&,        \
                                                  const S&);                                   \
  template FunctionalReport<S> weighted_identity_report(const CoefficientField<S>&, const S&,  \
                                                        const S&, const S&);                   \
  template CorollaryReport<S> corollary_bound_report(const CoefficientField<S>&, const S&,     \
                                                     const S&, const S&);                      \
  template BoundReport<S> theorem31_bound_report(const CoefficientField<S>&, const S&,         \
                                                 const S&);                                    \
  template LimitStudy<S> limit_study(const FluxModel<S>&, const ScenarioAtH<S>&,               \
                                     const std::vector<S>&, const S&, const S&, const S&);     \
  template void write_convergence_csv(std::ostream&, const LimitStudy<S>&);                   \
  template Theorem51Report<S> theorem51_check(const CoefficientField<S>&, const S&, const S&,  \
                                              const S&);

WFT_INSTANTIATE_FUNCTIONAL(double)
WFT_INSTANTIATE_FUNCTIONAL(Rational)

}  // namespace wft
