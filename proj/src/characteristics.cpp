#include "wft/characteristics.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace wft {

const char* to_string(PathDirection direction) {
  switch (direction) {
    case PathDirection::kForward:
      return "forward";
    case PathDirection::kBackwardMinimal:
      return "backward_minimal";
    case PathDirection::kBackwardMaximal:
      return "backward_maximal";
  }
  return "?";
}

namespace {

template <typename S>
std::string where(const S& x, const S& t) {
  std::ostringstream out;
  out.precision(17);
  out << "x = " << to_double(x) << ", t = " << to_double(t);
  return out.str();
}

}  // namespace

template <typename S>
PiecewiseField<S>::PiecewiseField(std::vector<FieldSlab<S>> slabs, S classification_tol)
    : slabs_(std::move(slabs)), tol_(std::move(classification_tol)) {
  if (slabs_.empty()) throw std::invalid_argument("PiecewiseField: no slabs");
  for (std::size_t k = 0; k < slabs_.size(); ++k) {
    auto& slab = slabs_[k];
    if (!(slab.t0 < slab.t1)) throw std::invalid_argument("PiecewiseField: empty slab");
    if (k > 0 && slab.t0 != slabs_[k - 1].t1) {
      throw std::invalid_argument("PiecewiseField: slabs must be contiguous");
    }
    if (slab.a_values.size() != slab.jumps.size() + 1) {
      throw std::invalid_argument("PiecewiseField: need one more value of a than jumps");
    }
    if (!slab.psi_values.empty() && slab.psi_values.size() != slab.a_values.size()) {
      throw std::invalid_argument("PiecewiseField: psi values do not match the pieces");
    }
    if (slab.psi_values.empty() != slabs_.front().psi_values.empty()) {
      throw std::invalid_argument("PiecewiseField: psi must be carried on every slab or none");
    }
    for (std::size_t j = 0; j < slab.jumps.size(); ++j) {
      auto& jump = slab.jumps[j];
      if (j > 0 && jump.x0 < slab.jumps[j - 1].x0) {
        throw std::invalid_argument("PiecewiseField: jumps must be ordered");
      }
      jump.a_minus = slab.a_values[j];
      jump.a_plus = slab.a_values[j + 1];
      jump.kind = classify(jump.a_minus, jump.a_plus, jump.lambda, tol_);
    }
  }
}

template <typename S>
PiecewiseField<S> PiecewiseField<S>::from_coefficient(const CoefficientField<S>& field,
                                                      const S& s, const S& t) {
  std::vector<FieldSlab<S>> slabs;
  for (const auto& [t0, t1] : field.slabs(s, t)) {
    const auto snap = field.snapshot(S((t0 + t1) / 2));
    FieldSlab<S> slab;
    slab.t0 = t0;
    slab.t1 = t1;
    for (const auto& j : snap.jumps) {
      S x0 = j.position_at(t0);
      // Extrapolation back from the midpoint can reorder a merge by rounding.
      if (!slab.jumps.empty() && x0 < slab.jumps.back().x0) x0 = slab.jumps.back().x0;
      slab.jumps.push_back({x0, j.lambda, j.a_minus, j.a_plus, j.kind});
    }
    slab.a_values = snap.a_values;
    for (std::size_t k = 0; k < snap.piece_count(); ++k) slab.psi_values.push_back(snap.kappa(k));
    slabs.push_back(std::move(slab));
  }
  return PiecewiseField(std::move(slabs), field.classification_tol());
}

template <typename S>
PiecewiseField<S> PiecewiseField<S>::single_slab(const S& t0, const S& t1,
                                                 std::vector<std::pair<S, S>> jumps,
                                                 std::vector<S> a_values,
                                                 std::vector<S> psi_values) {
  FieldSlab<S> slab;
  slab.t0 = t0;
  slab.t1 = t1;
  for (auto& [x, lambda] : jumps) slab.jumps.push_back({x, lambda, S(0), S(0), JumpKind::kLax});
  slab.a_values = std::move(a_values);
  slab.psi_values = std::move(psi_values);
  return PiecewiseField(std::vector<FieldSlab<S>>{std::move(slab)});
}

template <typename S>
bool PiecewiseField<S>::carries_psi() const {
  return !slabs_.front().psi_values.empty();
}

template <typename S>
std::size_t PiecewiseField<S>::slab_index(const S& t, bool from_left) const {
  if (t < start() || end() < t) throw std::out_of_range("PiecewiseField: time outside the field");
  if (from_left) {
    auto it = std::lower_bound(slabs_.begin(), slabs_.end(), t,
                               [](const FieldSlab<S>& slab, const S& v) { return slab.t1 < v; });
    return static_cast<std::size_t>(it - slabs_.begin());
  }
  auto it = std::upper_bound(slabs_.begin(), slabs_.end(), t,
                             [](const S& v, const FieldSlab<S>& slab) { return v < slab.t0; });
  const auto k = static_cast<std::size_t>(it - slabs_.begin());
  return k == 0 ? 0 : k - 1;
}

template <typename S>
Profile<S> PiecewiseField<S>::psi_at(const S& t, bool from_left) const {
  if (!carries_psi()) throw std::logic_error("PiecewiseField: psi is not carried");
  const auto& slab = slabs_[slab_index(t, from_left)];
  std::vector<S> breakpoints;
  for (const auto& jump : slab.jumps) {
    S x = jump.position(t, slab.t0);
    // Extrapolated positions can cross by rounding at a merge.
    if (!breakpoints.empty() && x < breakpoints.back()) x = breakpoints.back();
    breakpoints.push_back(std::move(x));
  }
  return Profile<S>(std::move(breakpoints), slab.psi_values);
}

template <typename S>
S CharacteristicPath<S>::position(const S& t) const {
  for (const auto& seg : segments) {
    const S& lo = seg.t_start < seg.t_end ? seg.t_start : seg.t_end;
    const S& hi = seg.t_start < seg.t_end ? seg.t_end : seg.t_start;
    if (!(t < lo) && !(hi < t)) return seg.x_start + seg.speed * (t - seg.t_start);
  }
  if (segments.empty() && t == anchor_t) return anchor_x;
  throw std::out_of_range("CharacteristicPath: time outside the traced range");
}

namespace {

// Jumps of a slab passing within tol of x at time t (a contiguous run).
template <typename S>
struct Location {
  std::size_t first_piece = 0;  // piece left of the first coincident jump
  std::size_t count = 0;        // coincident jumps
};

template <typename S>
Location<S> locate(const FieldSlab<S>& slab, const S& x, const S& t, const S& tol) {
  Location<S> loc;
  std::size_t k = 0;
  while (k < slab.jumps.size() && slab.jumps[k].position(t, slab.t0) < x - tol) ++k;
  loc.first_piece = k;
  while (k < slab.jumps.size() && !(x + tol < slab.jumps[k].position(t, slab.t0))) {
    ++k;
    ++loc.count;
  }
  return loc;
}

// One admissible way to leave a point: inside a piece or along a jump.
template <typename S>
struct Motion {
  bool on_jump = false;
  std::size_t index = 0;  // piece or jump index
  S speed;
  S a_minus;
  S a_plus;
};

template <typename S>
Motion<S> piece_motion(const FieldSlab<S>& slab, std::size_t piece) {
  return {false, piece, slab.a_values[piece], slab.a_values[piece], slab.a_values[piece]};
}

template <typename S>
Motion<S> jump_motion(const FieldSlab<S>& slab, std::size_t j) {
  const auto& jump = slab.jumps[j];
  return {true, j, jump.lambda, jump.a_minus, jump.a_plus};
}

// Candidates in left-to-right order just after (forward) or just before
// (backward) the current time.
template <typename S>
std::vector<Motion<S>> candidates(const FieldSlab<S>& slab, const Location<S>& loc, bool forward,
                                  int backward_extremal, const S& tol) {
  std::vector<Motion<S>> out;
  const std::size_t r = loc.count;
  if (r == 0) {
    out.push_back(piece_motion(slab, loc.first_piece));
    return out;
  }
  // Forward, the coincident jumps fan out left to right with increasing
  // speed; backward, with decreasing speed.
  for (std::size_t i = 0; i <= r; ++i) {
    const std::size_t piece = loc.first_piece + i;
    const S& a = slab.a_values[piece];
    bool ok = true;
    if (i > 0) {
      const S& lam = slab.jumps[piece - 1].lambda;
      ok = ok && (forward ? !(a < lam - tol) : !(lam + tol < a));
    }
    if (i < r) {
      const S& lam = slab.jumps[piece].lambda;
      ok = ok && (forward ? !(lam + tol < a) : !(a < lam - tol));
    }
    if (ok) out.push_back(piece_motion(slab, piece));
    if (i < r) {
      const std::size_t j = piece;
      const auto& jump = slab.jumps[j];
      bool along = false;
      if (forward) {
        along = !(jump.lambda + tol < jump.a_plus) && !(jump.a_minus + tol < jump.lambda);
      } else if (backward_extremal < 0) {
        along = abs_value(S(jump.a_minus - jump.lambda)) <= tol;
      } else {
        along = abs_value(S(jump.a_plus - jump.lambda)) <= tol;
      }
      if (along) out.push_back(jump_motion(slab, j));
    }
  }
  return out;
}

template <typename S>
Motion<S> choose_forward(const FieldSlab<S>& slab, const Location<S>& loc, const S& x,
                         const S& t, const PiecewiseField<S>& field,
                         const TraceOptions<S>& options) {
  const S& tol = field.classification_tol();
  auto list = candidates(slab, loc, true, 0, tol);
  if (list.empty()) {
    throw RarefactionOnPath("forward characteristic has no admissible continuation at " +
                            where(x, t));
  }
  S lo = list.front().speed;
  S hi = lo;
  for (const auto& m : list) {
    lo = std::min(lo, m.speed);
    hi = std::max(hi, m.speed);
  }
  if (tol < hi - lo) {
    throw RarefactionOnPath("forward characteristic is not unique at " + where(x, t) +
                            " (rarefaction shock of the coefficient)");
  }
  switch (options.tie_break) {
    case TieBreak::kPreferLeft:
      return list.front();
    case TieBreak::kPreferRight:
      return list.back();
    case TieBreak::kPreferJump:
      for (const auto& m : list) {
        if (m.on_jump) return m;
      }
      return list.front();
  }
  return list.front();
}

template <typename S>
Motion<S> choose_backward(const FieldSlab<S>& slab, const Location<S>& loc, const S& x,
                          const S& t, bool minimal, const PiecewiseField<S>& field) {
  auto list = candidates(slab, loc, false, minimal ? -1 : 1, field.classification_tol());
  if (list.empty()) {
    throw RarefactionOnPath("backward characteristic meets a rarefaction shock at " +
                            where(x, t));
  }
  // Leftmost just before t is the largest speed.
  const Motion<S>* best = &list.front();
  for (const auto& m : list) {
    if (minimal ? best->speed < m.speed : m.speed < best->speed) best = &m;
  }
  return *best;
}

template <typename S>
void push_segment(CharacteristicPath<S>& path, const S& t0, const S& x0, const S& t1,
                  const S& x1, const Motion<S>& motion) {
  path.segments.push_back(
      {t0, t1, x0, x1, motion.speed, motion.a_minus, motion.a_plus, motion.on_jump});
  path.vertices.emplace_back(t1, x1);
}

}  // namespace

template <typename S>
CharacteristicPath<S> forward_characteristic(const PiecewiseField<S>& field, const S& x0,
                                             const S& t0, const S& t_end,
                                             const TraceOptions<S>& options) {
  if (!(t0 < t_end)) throw std::invalid_argument("forward_characteristic: need t_end > t0");
  if (t0 < field.start() || field.end() < t_end) {
    throw std::invalid_argument("forward_characteristic: times outside the field");
  }
  CharacteristicPath<S> path;
  path.anchor_x = x0;
  path.anchor_t = t0;
  path.direction = PathDirection::kForward;
  path.vertices.emplace_back(t0, x0);
  S t = t0;
  S x = x0;
  while (t < t_end) {
    const auto& slab = field.slabs()[field.slab_index(t)];
    const S t1 = std::min(slab.t1, t_end);
    const auto loc = locate(slab, x, t, options.snap_tol);
    const auto motion = choose_forward(slab, loc, x, t, field, options);
    if (motion.on_jump) {
      const S x1 = slab.jumps[motion.index].position(t1, slab.t0);
      push_segment(path, t, x, t1, x1, motion);
      t = t1;
      x = x1;
      continue;
    }
    // Inside a piece: stop at the first jump line it runs into.
    const std::size_t k = motion.index;
    const auto skip = [&](std::size_t j) {
      return loc.count > 0 && j >= loc.first_piece && j < loc.first_piece + loc.count;
    };
    std::optional<S> hit;
    std::size_t hit_jump = 0;
    const S& a = motion.speed;
    if (k > 0 && !skip(k - 1) && a < slab.jumps[k - 1].lambda) {
      const auto& jump = slab.jumps[k - 1];
      const S tau = t + (x - jump.position(t, slab.t0)) / (jump.lambda - a);
      if (tau < t1) {
        hit = tau;
        hit_jump = k - 1;
      }
    }
    if (k < slab.jumps.size() && !skip(k) && slab.jumps[k].lambda < a) {
      const auto& jump = slab.jumps[k];
      const S tau = t + (jump.position(t, slab.t0) - x) / (a - jump.lambda);
      if (tau < t1 && (!hit || tau < *hit)) {
        hit = tau;
        hit_jump = k;
      }
    }
    // A hit within rounding of the slab end is the collision at the end.
    if (hit && !(*hit < t1 - ScalarTraits<S>::eps_time())) hit.reset();
    if (hit) {
      const S x1 = slab.jumps[hit_jump].position(*hit, slab.t0);
      push_segment(path, t, x, *hit, x1, motion);
      t = *hit;
      x = x1;
    } else {
      const S x1 = x + a * (t1 - t);
      push_segment(path, t, x, t1, x1, motion);
      t = t1;
      x = x1;
    }
  }
  return path;
}

template <typename S>
CharacteristicPath<S> backward_characteristic(const PiecewiseField<S>& field, const S& x0,
                                              const S& t0, bool minimal,
                                              const TraceOptions<S>& options) {
  if (!(field.start() < t0) || field.end() < t0) {
    throw std::invalid_argument("backward_characteristic: anchor time outside the field");
  }
  CharacteristicPath<S> path;
  path.anchor_x = x0;
  path.anchor_t = t0;
  path.direction = minimal ? PathDirection::kBackwardMinimal : PathDirection::kBackwardMaximal;
  path.vertices.emplace_back(t0, x0);
  S t = t0;
  S x = x0;
  while (field.start() < t) {
    const auto& slab = field.slabs()[field.slab_index(t, true)];
    const S& ta = slab.t0;
    const auto loc = locate(slab, x, t, options.snap_tol);
    const auto motion = choose_backward(slab, loc, x, t, minimal, field);
    if (motion.on_jump) {
      const S xa = slab.jumps[motion.index].x0;
      push_segment(path, t, x, ta, xa, motion);
      t = ta;
      x = xa;
      continue;
    }
    const std::size_t k = motion.index;
    const auto skip = [&](std::size_t j) {
      return loc.count > 0 && j >= loc.first_piece && j < loc.first_piece + loc.count;
    };
    std::optional<S> hit;
    std::size_t hit_jump = 0;
    const S& a = motion.speed;
    // Going back in time, the gap to a jump line shrinks at rate |a - lambda|.
    if (k > 0 && !skip(k - 1) && slab.jumps[k - 1].lambda < a) {
      const auto& jump = slab.jumps[k - 1];
      const S tau = t - (x - jump.position(t, ta)) / (a - jump.lambda);
      if (ta < tau) {
        hit = tau;
        hit_jump = k - 1;
      }
    }
    if (k < slab.jumps.size() && !skip(k) && a < slab.jumps[k].lambda) {
      const auto& jump = slab.jumps[k];
      const S tau = t - (jump.position(t, ta) - x) / (jump.lambda - a);
      if (ta < tau && (!hit || *hit < tau)) {
        hit = tau;
        hit_jump = k;
      }
    }
    if (hit && !(ta + ScalarTraits<S>::eps_time() < *hit)) hit.reset();
    if (hit) {
      const S x1 = slab.jumps[hit_jump].position(*hit, ta);
      push_segment(path, t, x, *hit, x1, motion);
      t = *hit;
      x = x1;
    } else {
      const S x1 = x - a * (t - ta);
      push_segment(path, t, x, ta, x1, motion);
      t = ta;
      x = x1;
    }
  }
  return path;
}

template <typename S>
PathAudit<S> audit_path(const PiecewiseField<S>& field, const CharacteristicPath<S>& path,
                        const S& tol) {
  PathAudit<S> audit;
  auto fail = [&](long& counter, const std::string& what, const PathSegment<S>& seg) {
    ++counter;
    if (audit.first_failure.empty()) {
      std::ostringstream msg;
      msg << what << " on the segment from " << where(seg.x_start, seg.t_start)
          << " (speed " << to_double(seg.speed) << ", a- " << to_double(seg.a_minus) << ", a+ "
          << to_double(seg.a_plus) << (seg.on_jump ? ", on a jump)" : ")");
      audit.first_failure = msg.str();
    }
  };
  for (const auto& seg : path.segments) {
    ++audit.segments;
    const S tm = (seg.t_start + seg.t_end) / 2;
    const S xm = seg.x_start + seg.speed * (tm - seg.t_start);
    const auto& slab = field.slabs()[field.slab_index(tm)];
    const auto loc = locate(slab, xm, tm, tol);
    S a_minus;
    S a_plus;
    if (loc.count == 0) {
      a_minus = slab.a_values[loc.first_piece];
      a_plus = a_minus;
    } else {
      a_minus = slab.a_values[loc.first_piece];
      a_plus = slab.a_values[loc.first_piece + loc.count];
    }
    const S& v = seg.speed;
    if (loc.count > 0 && tol < a_plus - a_minus) {
      // Riding an increasing jump of a: neither the sandwich nor genuineness is
      // defined there.
      ++audit.increasing_jump_segments;
      continue;
    }
    if (v + tol < a_plus || a_minus + tol < v) {
      fail(audit.sandwich_failures, "speed outside [a+, a-]", seg);
    }
    if (path.direction == PathDirection::kBackwardMinimal &&
        tol < abs_value(S(v - a_minus))) {
      fail(audit.genuineness_failures, "minimal path not moving at a-", seg);
    }
    if (path.direction == PathDirection::kBackwardMaximal && tol < abs_value(S(v - a_plus))) {
      fail(audit.genuineness_failures, "maximal path not moving at a+", seg);
    }
  }
  return audit;
}

template <typename S>
OleinikReport<S> oleinik_report(const PiecewiseField<S>& field, const S& t_lo, const S& t_hi,
                                const S& tol) {
  if (!(S(0) < t_lo) || t_hi < t_lo) {
    throw std::invalid_argument("oleinik_report: the window must satisfy 0 < t_lo <= t_hi");
  }
  OleinikReport<S> report;
  report.max_increase = S(0);
  for (const auto& slab : field.slabs()) {
    if (!(t_lo < slab.t1) || !(slab.t0 < t_hi)) continue;
    const S tm = (std::max(slab.t0, t_lo) + std::min(slab.t1, t_hi)) / 2;
    for (const auto& jump : slab.jumps) {
      ++report.jumps_checked;
      const S rise = jump.a_plus - jump.a_minus;
      report.max_increase = std::max(report.max_increase, rise);
      if (tol < rise) {
        ++report.violations;
        if (report.first_violation.empty()) {
          report.first_violation = "a+ > a- at " + where(jump.position(tm, slab.t0), tm);
        }
      }
    }
  }
  return report;
}

template <typename S>
std::optional<double> slope_constant(const FrontTrackingRun<S>& run,
                                     const std::vector<std::pair<S, S>>& slabs) {
  std::optional<double> best;
  for (const auto& [t0, t1] : slabs) {
    const auto fronts = run.fronts_at(S((t0 + t1) / 2));
    for (std::size_t k = 0; k + 1 < fronts.size(); ++k) {
      const auto& left = *fronts[k];
      const auto& right = *fronts[k + 1];
      if (!(left.left_state < left.right_state) || !(right.left_state < right.right_state)) {
        continue;
      }
      const S half_rise = (right.right_state - left.left_state) / 2;
      for (const S& t : {t0, t1}) {
        const S dx = right.position(t) - left.position(t);
        if (!(S(0) < dx)) continue;
        const double c = to_double(S(t * half_rise / dx));
        if (!best || *best < c) best = c;
      }
    }
  }
  return best;
}

template <typename S>
OleinikReport<S> oleinik_report(const CoefficientField<S>& field, const S& t_lo, const S& t_hi,
                                const S& tol) {
  auto report = oleinik_report(PiecewiseField<S>::from_coefficient(field, t_lo, t_hi), t_lo,
                               t_hi, tol);
  const auto slabs = field.slabs(t_lo, t_hi);
  report.c_i = slope_constant(field.run_i(), slabs).value_or(0.0);
  report.c_ii = slope_constant(field.run_ii(), slabs).value_or(0.0);
  report.e = field.flux().sup_second_derivative() * (*report.c_i + *report.c_ii) / 2;
  const S h = std::max(field.run_i().h(), field.run_ii().h());
  report.allowance =
      ScalarTraits<S>::from_double(field.flux().sup_second_derivative()) * h + tol;
  return report;
}

template <typename S>
std::vector<S> mesh_times(const PiecewiseField<S>& field, const S& t_end) {
  std::vector<S> mesh;
  const S& t0 = field.start();
  for (const auto& slab : field.slabs()) {
    if (t_end < slab.t0) break;
    mesh.push_back(slab.t0);
    const S t1 = std::min(slab.t1, t_end);
    mesh.push_back((slab.t0 + t1) / 2);
  }
  for (int k = 0; k <= 50; ++k) mesh.push_back(t0 + (t_end - t0) * S(k) / S(50));
  std::sort(mesh.begin(), mesh.end());
  mesh.erase(std::unique(mesh.begin(), mesh.end()), mesh.end());
  while (!mesh.empty() && t_end < mesh.back()) mesh.pop_back();
  return mesh;
}

template <typename S>
ConservationReport<S> conservation_check(const PiecewiseField<S>& field, const S& y_bar,
                                         const S& z_bar, const S& t_bar, const S& tol,
                                         const TraceOptions<S>& options) {
  if (!field.carries_psi()) throw std::invalid_argument("conservation_check: field has no psi");
  ConservationReport<S> report;
  report.left = backward_characteristic(field, y_bar, t_bar, false, options);
  report.right = backward_characteristic(field, z_bar, t_bar, true, options);
  report.mesh = mesh_times(field, t_bar);
  report.max_error = S(0);
  bool first = true;
  for (const S& t : report.mesh) {
    const S value = integral(field.psi_at(t), report.left.position(t), report.right.position(t));
    if (first) {
      report.reference = value;
      first = false;
      continue;
    }
    const S err = abs_value(S(value - report.reference));
    report.max_error = std::max(report.max_error, err);
    if (tol < err) {
      ++report.failures;
      if (report.first_failure.empty()) {
        std::ostringstream msg;
        msg << "integral drifts by " << to_double(err) << " at t = " << to_double(t);
        report.first_failure = msg.str();
      }
    }
  }
  return report;
}

template <typename S>
MaximumPrincipleReport<S> maximum_principle_check(const PiecewiseField<S>& field, const S& xi0,
                                                  const S& zeta0, const S& t_end, const S& tol) {
  if (!field.carries_psi()) {
    throw std::invalid_argument("maximum_principle_check: field has no psi");
  }
  if (zeta0 < xi0) throw std::invalid_argument("maximum_principle_check: need xi0 <= zeta0");
  const S& t0 = field.start();
  if (auto inf = infimum_on(field.psi_at(t0), xi0, zeta0); inf && *inf < -tol) {
    throw std::invalid_argument("maximum_principle_check: psi is negative initially on [" +
                                std::to_string(to_double(xi0)) + ", " +
                                std::to_string(to_double(zeta0)) + "]");
  }
  MaximumPrincipleReport<S> report;
  report.left = forward_characteristic(field, xi0, t0, t_end);
  report.right = forward_characteristic(field, zeta0, t0, t_end);
  report.mesh = mesh_times(field, t_end);
  // Funnel ends sit on jump lines up to rounding; pieces thinner than this are
  // not sampled in floating point.
  const S shave = ScalarTraits<S>::kExact ? S(0) : S(1e-9);
  for (const S& t : report.mesh) {
    const S lo = report.left.position(t) + shave;
    const S hi = report.right.position(t) - shave;
    for (bool from_left : {false, true}) {
      if (from_left && (t == t0 || field.slab_index(t, true) == field.slab_index(t))) continue;
      ++report.samples;
      const auto inf = infimum_on(field.psi_at(t, from_left), lo, hi);
      if (inf && *inf < -tol) {
        ++report.violations;
        if (report.first_violation.empty()) {
          std::ostringstream msg;
          msg << "psi = " << to_double(*inf) << " inside (" << to_double(lo) << ", "
              << to_double(hi) << ") at t = " << to_double(t);
          report.first_violation = msg.str();
        }
      }
    }
  }
  if (field.start() < t_end) {
    const S y_bar = report.left.position(t_end);
    const S z_bar = report.right.position(t_end);
    try {
      report.conservation = conservation_check(
          field, y_bar, z_bar, t_end,
          ScalarTraits<S>::kExact ? S(0) : S(1e-10), TraceOptions<S>{});
    } catch (const RarefactionOnPath& err) {
      report.conservation_skipped = err.what();
    }
  }
  return report;
}

template <typename S>
void write_paths_csv(std::ostream& out, const std::vector<CharacteristicPath<S>>& paths,
                     bool header) {
  if (header) out << "path_id,direction,t,x\n";
  for (std::size_t id = 0; id < paths.size(); ++id) {
    for (const auto& [t, x] : paths[id].vertices) {
      out << id << ',' << to_string(paths[id].direction) << ',' << ScalarTraits<S>::to_string(t)
          << ',' << ScalarTraits<S>::to_string(x) << '\n';
    }
  }
}

#define WFT_INSTANTIATE_CHARACTERISTICS(S)                                                     \
  template class PiecewiseField<S>;                                                            \
  template struct CharacteristicPath<S>;                                                       \
  template CharacteristicPath<S> forward_characteristic(const PiecewiseField<S>&, const S&,    \
                                                        const S&, const S&,                    \
                                                        const TraceOptions<S>&);               \
  template CharacteristicPath<S> backward_characteristic(const PiecewiseField<S>&, const S&,   \
                                                         const S&, bool,                       \
                                                         const TraceOptions<S>&);              \
  template PathAudit<S> audit_path(const PiecewiseField<S>&, const CharacteristicPath<S>&,     \
                                   const S&);                                                  \
  template OleinikReport<S> oleinik_report(const PiecewiseField<S>&, const S&, const S&,       \
                                           const S&);                                          \
  template OleinikReport<S> oleinik_report(const CoefficientField<S>&, const S&, const S&,     \
                                           const S&);                                          \
  template std::optional<double> slope_constant(const FrontTrackingRun<S>&,                    \
                                                const std::vector<std::pair<S, S>>&);          \
  template std::vector<S> mesh_times(const PiecewiseField<S>&, const S&);                      \
  template ConservationReport<S> conservation_check(const PiecewiseField<S>&, const S&,        \
                                                    const S&, const S&, const S&,              \
                                                    const TraceOptions<S>&);                   \
  template MaximumPrincipleReport<S> maximum_principle_check(                                  \
      const PiecewiseField<S>&, const S&, const S&, const S&, const S&);                       \
  template void write_paths_csv(std::ostream&, const std::vector<CharacteristicPath<S>>&, bool);

WFT_INSTANTIATE_CHARACTERISTICS(double)
WFT_INSTANTIATE_CHARACTERISTICS(Rational)

}  // namespace wft
