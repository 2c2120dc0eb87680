#include "wft/coupling.hpp"

#include <algorithm>
#include <sstream>

namespace wft {

const char* to_string(JumpKind kind) {
  switch (kind) {
    case JumpKind::kLax:
      return "lax";
    case JumpKind::kSlowUndercompressive:
      return "slow_uc";
    case JumpKind::kFastUndercompressive:
      return "fast_uc";
    case JumpKind::kRarefactionShock:
      return "rarefaction_shock";
  }
  return "?";
}

const char* to_string(Partition partition) {
  switch (partition) {
    case Partition::kI:
      return "I";
    case Partition::kII:
      return "II";
    case Partition::kBoth:
      return "both";
  }
  return "?";
}

template <typename S>
JumpKind classify(const S& a_minus, const S& a_plus, const S& lambda, const S& tol) {
  const int left = sign_with_tolerance(S(a_minus - lambda), tol);
  const int right = sign_with_tolerance(S(a_plus - lambda), tol);
  if (left > 0 && right < 0) return JumpKind::kLax;
  if (left >= 0 && right >= 0) return JumpKind::kSlowUndercompressive;
  if (left <= 0 && right <= 0) return JumpKind::kFastUndercompressive;
  return JumpKind::kRarefactionShock;
}

template <typename S>
bool sign_table_holds(const ClassifiedJump<S>& jump, const S& tol) {
  if (jump.partition == Partition::kBoth) return true;
  const int flip = jump.partition == Partition::kI ? 1 : -1;
  auto side_ok = [&](const S& speed_gap, const S& kappa) {
    const int s = sign_with_tolerance(speed_gap, tol);
    const int k = sign_with_tolerance(kappa, tol);
    return s == flip * k || s == 0 || k == 0;
  };
  return side_ok(S(jump.a_minus - jump.lambda), jump.kappa_plus) &&
         side_ok(S(jump.a_plus - jump.lambda), jump.kappa_minus);
}

template <typename S>
S trace_combination(const ClassifiedJump<S>& jump, const S& w_minus, const S& w_plus,
                    const S& tol) {
  const int left = sign_with_tolerance(S(jump.lambda - jump.a_minus), tol);
  const int right = sign_with_tolerance(S(jump.a_plus - jump.lambda), tol);
  return S(left) * w_minus + S(right) * w_plus;
}

template <typename S>
S trace_combination_closed_form(const ClassifiedJump<S>& jump, const S& m, const S& tv_b) {
  const S b = abs_value(jump.b_jump);
  switch (jump.kind) {
    case JumpKind::kLax:
      return -(2 * m + tv_b - b);
    case JumpKind::kRarefactionShock:
      return 2 * m + tv_b + b;
    default:
      return -b;
  }
}

template <typename S>
bool closed_form_applies(const ClassifiedJump<S>& jump, const S& tol) {
  return jump.partition != Partition::kBoth &&
         sign_with_tolerance(S(jump.a_minus - jump.lambda), tol) != 0 &&
         sign_with_tolerance(S(jump.a_plus - jump.lambda), tol) != 0 &&
         sign_with_tolerance(jump.kappa_minus, tol) != 0 &&
         sign_with_tolerance(jump.kappa_plus, tol) != 0;
}

template <typename S>
Profile<S> CoefficientSnapshot<S>::a() const {
  std::vector<S> br;
  for (const auto& j : jumps) br.push_back(j.position);
  return Profile<S>(std::move(br), a_values);
}

template <typename S>
Profile<S> CoefficientSnapshot<S>::psi() const {
  std::vector<S> br;
  std::vector<S> vals;
  for (const auto& j : jumps) br.push_back(j.position);
  for (std::size_t k = 0; k < piece_count(); ++k) vals.push_back(kappa(k));
  return Profile<S>(std::move(br), std::move(vals));
}

template <typename S>
S CoefficientSnapshot<S>::v1_total() const {
  S total(0);
  for (const auto& j : jumps) {
    if (j.partition != Partition::kII) total += abs_value(j.b_jump);
  }
  return total;
}

template <typename S>
S CoefficientSnapshot<S>::v2_total() const {
  S total(0);
  for (const auto& j : jumps) {
    if (j.partition != Partition::kI) total += abs_value(j.b_jump);
  }
  return total;
}

template <typename S>
std::vector<S> CoefficientSnapshot<S>::weight_values(const S& m) const {
  if (m < S(0)) throw std::invalid_argument("weight: m must be >= 0");
  const S v1_all = v1_total();
  const S v2_all = v2_total();
  std::vector<S> w;
  w.reserve(piece_count());
  S v1(0);
  S v2(0);
  for (std::size_t k = 0; k < piece_count(); ++k) {
    if (k > 0) {
      const auto& j = jumps[k - 1];
      if (j.partition != Partition::kII) v1 += abs_value(j.b_jump);
      if (j.partition != Partition::kI) v2 += abs_value(j.b_jump);
    }
    if (S(0) < kappa(k)) {
      w.push_back(m + v1_all - v1 + v2);
    } else {
      w.push_back(m + v1 + v2_all - v2);
    }
  }
  return w;
}

template <typename S>
S CoefficientSnapshot<S>::weighted_norm_at(const S& t, const std::vector<S>& weight) const {
  if (!(kappa(0) == S(0)) || !(kappa(piece_count() - 1) == S(0))) {
    throw std::invalid_argument("weighted norm: psi is not compactly supported");
  }
  S sum(0);
  for (std::size_t k = 1; k + 1 < piece_count(); ++k) {
    const S width = jumps[k].position_at(t) - jumps[k - 1].position_at(t);
    S term = abs_value(kappa(k)) * width;
    if (!weight.empty()) term *= weight[k];
    sum += term;
  }
  return sum;
}

template <typename S>
CoefficientField<S>::CoefficientField(FrontTrackingRun<S> run_i, FrontTrackingRun<S> run_ii,
                                      S classification_tol)
    : run_i_(std::make_shared<const FrontTrackingRun<S>>(std::move(run_i))),
      run_ii_(std::make_shared<const FrontTrackingRun<S>>(std::move(run_ii))),
      tol_(std::move(classification_tol)) {
  if (run_i_->flux().name() != run_ii_->flux().name()) {
    throw std::invalid_argument("CoefficientField: runs use different fluxes");
  }
  horizon_ = std::min(run_i_->horizon(), run_ii_->horizon());
  compute_slab_times();
}

template <typename S>
void CoefficientField<S>::compute_slab_times() {
  const S eps = ScalarTraits<S>::eps_time();
  std::vector<S> base{S(0), horizon_};
  for (const auto* run : {run_i_.get(), run_ii_.get()}) {
    for (const auto& t : run->event_times()) {
      if (S(0) < t && t < horizon_) base.push_back(t);
    }
  }
  std::sort(base.begin(), base.end());
  base.erase(std::unique(base.begin(), base.end()), base.end());

  struct Item {
    const Front<S>* front;
    bool first_run;
  };
  std::vector<S> crossings;
  for (std::size_t w = 1; w < base.size(); ++w) {
    const S& t0 = base[w - 1];
    const S& t1 = base[w];
    if (!(t0 < t1)) continue;
    const S mid = (t0 + t1) / 2;
    std::vector<Item> items;
    for (const auto* f : run_i_->fronts_at(mid)) items.push_back({f, true});
    for (const auto* f : run_ii_->fronts_at(mid)) items.push_back({f, false});
    // Order just after t0, then bubble into the order at t1; every swap of
    // fronts from different runs is a crossing inside the window.
    std::stable_sort(items.begin(), items.end(), [&](const Item& p, const Item& q) {
      const S xp = p.front->position(t0);
      const S xq = q.front->position(t0);
      if (xp != xq) return xp < xq;
      return p.front->speed < q.front->speed;
    });
    for (std::size_t i = 1; i < items.size(); ++i) {
      for (std::size_t k = i; k > 0; --k) {
        const Front<S>& left = *items[k - 1].front;
        const Front<S>& right = *items[k].front;
        if (!(right.position(t1) < left.position(t1))) break;
        if (items[k - 1].first_run != items[k].first_run && left.speed != right.speed) {
          const S tc = (right.origin_x - left.origin_x + left.speed * left.birth_time -
                        right.speed * right.birth_time) /
                       (left.speed - right.speed);
          if (t0 + eps < tc && tc < t1 - eps) crossings.push_back(tc);
        }
        std::swap(items[k - 1], items[k]);
      }
    }
  }
  base.insert(base.end(), crossings.begin(), crossings.end());
  std::sort(base.begin(), base.end());
  slab_times_.clear();
  for (auto& t : base) {
    if (slab_times_.empty() || slab_times_.back() + eps < t) slab_times_.push_back(t);
  }
  if (slab_times_.back() != horizon_) slab_times_.back() = horizon_;
}

template <typename S>
std::vector<std::pair<S, S>> CoefficientField<S>::slabs(const S& s, const S& t) const {
  if (t < s || s < S(0) || horizon_ < t) {
    throw std::out_of_range("slabs: [s, t] outside [0, horizon]");
  }
  std::vector<std::pair<S, S>> out;
  for (std::size_t i = 1; i < slab_times_.size(); ++i) {
    const S lo = std::max(s, slab_times_[i - 1]);
    const S hi = std::min(t, slab_times_[i]);
    if (lo < hi) out.emplace_back(lo, hi);
  }
  return out;
}

template <typename S>
CoefficientSnapshot<S> CoefficientField<S>::snapshot(const S& t) const {
  if (t < S(0) || horizon_ < t) throw std::out_of_range("snapshot: time outside [0, horizon]");
  const FluxModel<S>& flux = run_i_->flux();
  const auto fi = run_i_->fronts_at(t);
  const auto fii = run_ii_->fronts_at(t);
  CoefficientSnapshot<S> snap;
  snap.time = t;
  S u1 = run_i_->initial().far_left();
  S u2 = run_ii_->initial().far_left();
  auto push_piece = [&]() {
    snap.a_values.push_back(secant_speed(flux, u1, u2));
    snap.u1_values.push_back(u1);
    snap.u2_values.push_back(u2);
  };
  push_piece();

  std::size_t i = 0;
  std::size_t j = 0;
  const S eps_x = ScalarTraits<S>::eps_position();
  while (i < fi.size() || j < fii.size()) {
    ClassifiedJump<S> jump;
    jump.time = t;
    std::optional<S> xi;
    std::optional<S> xii;
    if (i < fi.size()) xi = fi[i]->position(t);
    if (j < fii.size()) xii = fii[j]->position(t);
    const bool coincide = xi && xii && abs_value(S(*xi - *xii)) <= eps_x;
    const Front<S>* front = nullptr;
    if (coincide) {
      const Front<S>& p = *fi[i];
      const Front<S>& q = *fii[j];
      if (p.left_state != q.left_state || p.right_state != q.right_state ||
          abs_value(S(p.speed - q.speed)) > ScalarTraits<S>::eps_speed()) {
        std::ostringstream msg;
        msg << "fronts of both solutions coincide at x = " << to_double(*xi)
            << ", t = " << to_double(t)
            << "; perturb one initial datum by an offset of at least 1e-9";
        throw DegenerateInput(msg.str());
      }
      front = &p;
      jump.partition = Partition::kBoth;
      jump.front_i = p.id;
      jump.front_ii = q.id;
      jump.u1_minus = u1;
      jump.u2_minus = u2;
      u1 = p.right_state;
      u2 = q.right_state;
      ++i;
      ++j;
    } else if (xi && (!xii || *xi < *xii)) {
      front = fi[i++];
      jump.partition = Partition::kI;
      jump.front_i = front->id;
      jump.u1_minus = u1;
      jump.u2_minus = u2;
      u1 = front->right_state;
    } else {
      front = fii[j++];
      jump.partition = Partition::kII;
      jump.front_ii = front->id;
      jump.u1_minus = u1;
      jump.u2_minus = u2;
      u2 = front->right_state;
    }
    jump.position = front->position(t);
    jump.lambda = front->speed;
    jump.u1_plus = u1;
    jump.u2_plus = u2;
    jump.b_jump = jump.partition == Partition::kII ? S(jump.u2_plus - jump.u2_minus)
                                                   : S(jump.u1_plus - jump.u1_minus);
    jump.kappa_minus = jump.u2_minus - jump.u1_minus;
    jump.kappa_plus = jump.u2_plus - jump.u1_plus;
    jump.a_minus = snap.a_values.back();
    push_piece();
    jump.a_plus = snap.a_values.back();
    jump.kind = classify(jump.a_minus, jump.a_plus, jump.lambda, tol_);
    snap.jumps.push_back(std::move(jump));
  }
  return snap;
}

template <typename S>
std::pair<Profile<S>, std::vector<ClassifiedJump<S>>> build_coefficient(
    const CoefficientField<S>& field, const S& t) {
  auto snap = field.snapshot(t);
  return {snap.a(), std::move(snap.jumps)};
}

template <typename S>
Profile<S> build_weight(const CoefficientField<S>& field, const S& m, const S& t) {
  auto snap = field.snapshot(t);
  std::vector<S> br;
  for (const auto& j : snap.jumps) br.push_back(j.position);
  return Profile<S>(std::move(br), snap.weight_values(m));
}

template <typename S>
void write_jump_table(std::ostream& out, const std::vector<CoefficientSnapshot<S>>& snapshots,
                      const S& m, bool header) {
  using T = ScalarTraits<S>;
  if (header) out << "t,x,kind,partition,lambda,a_minus,a_plus,b_jump,w_minus,w_plus\n";
  for (const auto& snap : snapshots) {
    const auto w = snap.weight_values(m);
    for (std::size_t k = 0; k < snap.jumps.size(); ++k) {
      const auto& j = snap.jumps[k];
      out << T::to_string(j.time) << ',' << T::to_string(j.position) << ',' << to_string(j.kind)
          << ',' << to_string(j.partition) << ',' << T::to_string(j.lambda) << ','
          << T::to_string(j.a_minus) << ',' << T::to_string(j.a_plus) << ','
          << T::to_string(j.b_jump) << ',' << T::to_string(w[k]) << ','
          << T::to_string(w[k + 1]) << '\n';
    }
  }
}

#define WFT_INSTANTIATE_COUPLING(S)                                                          \
  template JumpKind classify(const S&, const S&, const S&, const S&);                        \
  template bool sign_table_holds(const ClassifiedJump<S>&, const S&);                        \
  template S trace_combination(const ClassifiedJump<S>&, const S&, const S&, const S&);      \
  template S trace_combination_closed_form(const ClassifiedJump<S>&, const S&, const S&);    \
  template bool closed_form_applies(const ClassifiedJump<S>&, const S&);                     \
  template struct CoefficientSnapshot<S>;                                                    \
  template class CoefficientField<S>;                                                        \
  template std::pair<Profile<S>, std::vector<ClassifiedJump<S>>> build_coefficient(          \
      const CoefficientField<S>&, const S&);                                                 \
  template Profile<S> build_weight(const CoefficientField<S>&, const S&, const S&);          \
  template void write_jump_table(std::ostream&, const std::vector<CoefficientSnapshot<S>>&, \
                                 const S&, bool);

WFT_INSTANTIATE_COUPLING(double)
WFT_INSTANTIATE_COUPLING(Rational)

}  // namespace wft
