#ifndef WFT_COUPLING_HPP_
#define WFT_COUPLING_HPP_

#include <memory>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "wft/front_tracking.hpp"

namespace wft {

enum class JumpKind { kLax, kSlowUndercompressive, kFastUndercompressive, kRarefactionShock };
// kBoth marks a front shared by the two runs (same position, states and speed).
enum class Partition { kI, kII, kBoth };

const char* to_string(JumpKind kind);
const char* to_string(Partition partition);

// Two runs put a front at the same place with different states or speeds.
class DegenerateInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Four-way classification of a jump of a. Differences |a_pm - lambda| within
// tol count as equality, which lands in the undercompressive classes.
template <typename S>
JumpKind classify(const S& a_minus, const S& a_plus, const S& lambda,
                  const S& tol = ScalarTraits<S>::eps_speed());

template <typename S>
struct ClassifiedJump {
  S position;
  S time;
  S lambda;
  S a_minus;
  S a_plus;
  JumpKind kind = JumpKind::kLax;
  Partition partition = Partition::kI;
  // Signed jump of the owning run; for kBoth the common jump.
  S b_jump;
  S kappa_minus;
  S kappa_plus;
  // Traces of u^I and u^II.
  S u1_minus, u1_plus, u2_minus, u2_plus;
  // Front ids in each run, -1 when the run has no front here.
  int front_i = -1;
  int front_ii = -1;

  S position_at(const S& t) const { return position + lambda * (t - time); }
  const S& psi_minus() const { return kappa_minus; }
  const S& psi_plus() const { return kappa_plus; }
};

// Sign table sgn(a_pm - lambda) = +-sgn(kappa_mp), + for J_I and - for J_II.
// A side passes when either sign is within tol of zero. kBoth jumps are not
// covered by the table and always pass.
template <typename S>
bool sign_table_holds(const ClassifiedJump<S>& jump, const S& tol = ScalarTraits<S>::eps_speed());

// sgn(lambda - a_-) w_- + sgn(a_+ - lambda) w_+, the factor multiplying
// |a_- - lambda| |psi_-| in the rate of the weighted norm.
template <typename S>
S trace_combination(const ClassifiedJump<S>& jump, const S& w_minus, const S& w_plus,
                    const S& tol = ScalarTraits<S>::eps_speed());

// What that combination must equal by class: -(2m + TV(b) - |b|) at Lax
// jumps, 2m + TV(b) + |b| at rarefaction shocks, -|b| at undercompressive
// ones.
template <typename S>
S trace_combination_closed_form(const ClassifiedJump<S>& jump, const S& m, const S& tv_b);

// The closed form is only claimed when the jump belongs to one run and
// neither a_pm - lambda nor kappa_pm is within tol of zero (otherwise the
// term it multiplies vanishes).
template <typename S>
bool closed_form_applies(const ClassifiedJump<S>& jump,
                         const S& tol = ScalarTraits<S>::eps_speed());

// a, u^I, u^II and the classified jumps of a at one time, left to right.
// Piece k lies between jumps k-1 and k.
template <typename S>
struct CoefficientSnapshot {
  S time;
  std::vector<ClassifiedJump<S>> jumps;
  std::vector<S> a_values;
  std::vector<S> u1_values;
  std::vector<S> u2_values;

  std::size_t piece_count() const { return a_values.size(); }
  S kappa(std::size_t piece) const { return u2_values[piece] - u1_values[piece]; }
  Profile<S> a() const;
  Profile<S> psi() const;
  // Sum of |b| over J_I (resp. J_II) jumps; kBoth jumps count in both.
  S v1_total() const;
  S v2_total() const;
  S tv_b() const { return v1_total() + v2_total(); }
  // Weight on every piece.
  std::vector<S> weight_values(const S& m) const;
  // Integral of |psi| w with the jumps moved affinely to time t (t inside the
  // snapshot's slab). An empty weight means w = 1.
  S weighted_norm_at(const S& t, const std::vector<S>& weight) const;
};

// The averaged coefficient a of two runs over their common horizon.
template <typename S>
class CoefficientField {
 public:
  CoefficientField(FrontTrackingRun<S> run_i, FrontTrackingRun<S> run_ii,
                   S classification_tol = ScalarTraits<S>::eps_speed());

  const FrontTrackingRun<S>& run_i() const { return *run_i_; }
  const FrontTrackingRun<S>& run_ii() const { return *run_ii_; }
  const FluxModel<S>& flux() const { return run_i_->flux(); }
  const S& horizon() const { return horizon_; }
  const S& classification_tol() const { return tol_; }

  // Times in [0, horizon] where the jump set of a changes: events of either
  // run and crossings of a u^I front with a u^II front, plus both ends.
  const std::vector<S>& slab_times() const { return slab_times_; }

  // Throws DegenerateInput at a coincidence of fronts from different runs
  // that do not carry identical waves.
  CoefficientSnapshot<S> snapshot(const S& t) const;

  // [t0, t1] pieces of [s, t] free of slab boundaries in their interior.
  std::vector<std::pair<S, S>> slabs(const S& s, const S& t) const;

 private:
  void compute_slab_times();

  std::shared_ptr<const FrontTrackingRun<S>> run_i_;
  std::shared_ptr<const FrontTrackingRun<S>> run_ii_;
  S tol_;
  S horizon_;
  std::vector<S> slab_times_;
};

// Tracks both data with the same flux and h up to t_end.
template <typename S>
CoefficientField<S> couple(const FluxModel<S>& flux, const S& h, Profile<S> data_i,
                           Profile<S> data_ii, const S& t_end) {
  FrontTrackingRun<S> run_i(flux, h, std::move(data_i));
  FrontTrackingRun<S> run_ii(flux, h, std::move(data_ii));
  run_i.evolve(t_end);
  run_ii.evolve(t_end);
  return CoefficientField<S>(std::move(run_i), std::move(run_ii));
}

// a at time t and its classified jumps.
template <typename S>
std::pair<Profile<S>, std::vector<ClassifiedJump<S>>> build_coefficient(
    const CoefficientField<S>& field, const S& t);

template <typename S>
Profile<S> build_weight(const CoefficientField<S>& field, const S& m, const S& t);

// CSV rows t,x,kind,partition,lambda,a_minus,a_plus,b_jump,w_minus,w_plus.
template <typename S>
void write_jump_table(std::ostream& out, const std::vector<CoefficientSnapshot<S>>& snapshots,
                      const S& m, bool header = true);

}  // namespace wft

#endif  // WFT_COUPLING_HPP_
