#ifndef WFT_CHARACTERISTICS_HPP_
#define WFT_CHARACTERISTICS_HPP_

#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "wft/coupling.hpp"

namespace wft {

// A path reached a point where more than one continuation is admissible (a
// rarefaction shock of a), or none is.
class RarefactionOnPath : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <typename S>
struct FieldJump {
  S x0;  // position at the slab start
  S lambda;
  S a_minus;
  S a_plus;
  JumpKind kind = JumpKind::kLax;

  S position(const S& t, const S& t0) const { return x0 + lambda * (t - t0); }
};

// a (and optionally psi) constant between straight jump lines on [t0, t1].
template <typename S>
struct FieldSlab {
  S t0;
  S t1;
  std::vector<FieldJump<S>> jumps;
  std::vector<S> a_values;
  std::vector<S> psi_values;  // empty when psi is not carried
};

// Piecewise-constant coefficient on a stack of slabs covering [start, end].
template <typename S>
class PiecewiseField {
 public:
  PiecewiseField() = default;
  explicit PiecewiseField(std::vector<FieldSlab<S>> slabs,
                          S classification_tol = ScalarTraits<S>::eps_speed());

  // Slabs of a coupled pair restricted to [s, t], psi = u^II - u^I included.
  static PiecewiseField from_coefficient(const CoefficientField<S>& field, const S& s,
                                         const S& t);

  // One slab on [t0, t1]: jumps given by position at t0 and speed.
  static PiecewiseField single_slab(const S& t0, const S& t1,
                                    std::vector<std::pair<S, S>> jumps, std::vector<S> a_values,
                                    std::vector<S> psi_values = {});

  const std::vector<FieldSlab<S>>& slabs() const { return slabs_; }
  const S& start() const { return slabs_.front().t0; }
  const S& end() const { return slabs_.back().t1; }
  bool carries_psi() const;
  const S& classification_tol() const { return tol_; }

  // Slab containing t; at a boundary the later slab (or the earlier one when
  // `from_left`).
  std::size_t slab_index(const S& t, bool from_left = false) const;

  // psi at time t as a profile; at slab boundaries the slab chosen as above.
  Profile<S> psi_at(const S& t, bool from_left = false) const;

 private:
  std::vector<FieldSlab<S>> slabs_;
  S tol_;
};

enum class PathDirection { kForward, kBackwardMinimal, kBackwardMaximal };
const char* to_string(PathDirection direction);

template <typename S>
struct PathSegment {
  S t_start;
  S t_end;
  S x_start;
  S x_end;
  S speed;
  // One-sided traces of a along the segment; equal off the jumps.
  S a_minus;
  S a_plus;
  bool on_jump = false;
};

template <typename S>
struct CharacteristicPath {
  S anchor_x;
  S anchor_t;
  PathDirection direction = PathDirection::kForward;
  // Vertices in tracing order (time decreasing for backward paths).
  std::vector<std::pair<S, S>> vertices;  // (t, x)
  std::vector<PathSegment<S>> segments;

  // Position at t inside the traced time range.
  S position(const S& t) const;
  const std::pair<S, S>& last() const { return vertices.back(); }
};

// How to pick among coincident continuations that move with the same speed.
enum class TieBreak { kPreferJump, kPreferLeft, kPreferRight };

template <typename S>
struct TraceOptions {
  TieBreak tie_break = TieBreak::kPreferJump;
  // Points closer than this to a jump line are on it. Zero in exact mode.
  S snap_tol = ScalarTraits<S>::kExact ? S(0) : S(1e-10);
};

template <typename S>
CharacteristicPath<S> forward_characteristic(const PiecewiseField<S>& field, const S& x0,
                                             const S& t0, const S& t_end,
                                             const TraceOptions<S>& options = {});

// Traces back to the field's start time.
template <typename S>
CharacteristicPath<S> backward_characteristic(const PiecewiseField<S>& field, const S& x0,
                                              const S& t0, bool minimal,
                                              const TraceOptions<S>& options = {});

template <typename S>
struct PathAudit {
  long segments = 0;
  long sandwich_failures = 0;
  long genuineness_failures = 0;
  // Segments along a jump with a_+ > a_-, where the checks do not apply.
  long increasing_jump_segments = 0;
  std::string first_failure;
  bool ok() const { return sandwich_failures == 0 && genuineness_failures == 0; }
};

// Re-locates every segment midpoint in the field and checks the sandwich
// a_+ <= y' <= a_- and, for backward paths, that y' equals a_- (minimal) or
// a_+ (maximal). Segments riding a jump with a_+ > a_- are only counted.
template <typename S>
PathAudit<S> audit_path(const PiecewiseField<S>& field, const CharacteristicPath<S>& path,
                        const S& tol = ScalarTraits<S>::kExact ? S(0) : S(1e-9));

template <typename S>
struct OleinikReport {
  long jumps_checked = 0;
  long violations = 0;  // jumps with a_+ > a_- + tol
  S max_increase;       // largest a_+ - a_- seen (0 if none positive)
  std::string first_violation;
  // Discrete slope constants of the runs: t du/dx over adjacent rising fronts.
  std::optional<double> c_i;
  std::optional<double> c_ii;
  std::optional<double> e;  // sup f'' (C^I + C^II) / 2
  // sup f'' h: what a fan member can leave at positive h. Set for coupled runs.
  std::optional<S> allowance;
  bool ok() const { return violations == 0; }
  bool within_allowance() const { return !allowance || !(*allowance < max_increase); }
};

// Jump check over slabs meeting [t_lo, t_hi]; t_lo must be positive.
template <typename S>
OleinikReport<S> oleinik_report(const PiecewiseField<S>& field, const S& t_lo, const S& t_hi,
                                const S& tol = ScalarTraits<S>::eps_speed());

// Same, plus the slope constants of both runs.
template <typename S>
OleinikReport<S> oleinik_report(const CoefficientField<S>& field, const S& t_lo, const S& t_hi,
                                const S& tol = ScalarTraits<S>::eps_speed());

// t du/dx for one run: over adjacent pairs of rising fronts, half the rise
// across the pair over their distance, sampled at the ends of each slab.
template <typename S>
std::optional<double> slope_constant(const FrontTrackingRun<S>& run,
                                     const std::vector<std::pair<S, S>>& slabs);

// Slab starts and midpoints up to t_end plus 50 uniform times, sorted.
template <typename S>
std::vector<S> mesh_times(const PiecewiseField<S>& field, const S& t_end);

template <typename S>
struct ConservationReport {
  CharacteristicPath<S> left;   // backward maximal
  CharacteristicPath<S> right;  // backward minimal
  std::vector<S> mesh;
  S reference;  // integral at the earliest mesh time
  S max_error;
  long failures = 0;
  std::string first_failure;
  bool ok() const { return failures == 0; }
};

// Integral of psi between the backward-maximal path from (y_bar, t_bar) and
// the backward-minimal path from (z_bar, t_bar), compared across the mesh.
template <typename S>
ConservationReport<S> conservation_check(const PiecewiseField<S>& field, const S& y_bar,
                                         const S& z_bar, const S& t_bar, const S& tol,
                                         const TraceOptions<S>& options = {});

template <typename S>
struct MaximumPrincipleReport {
  CharacteristicPath<S> left;   // xi
  CharacteristicPath<S> right;  // zeta
  std::vector<S> mesh;
  long samples = 0;
  long violations = 0;
  std::string first_violation;
  // Between the backward paths from xi(t_end) and zeta(t_end). Left empty,
  // with the reason, when a backward path meets a rarefaction shock.
  std::optional<ConservationReport<S>> conservation;
  std::string conservation_skipped;
  bool ok() const { return violations == 0 && (!conservation || conservation->ok()); }
};

// psi >= -tol inside the forward funnel from [xi0, zeta0] at the field's start
// time, on mesh_times. Both sides of a slab boundary are sampled.
// Throws std::invalid_argument when psi < 0 initially on the interval.
template <typename S>
MaximumPrincipleReport<S> maximum_principle_check(const PiecewiseField<S>& field, const S& xi0,
                                                  const S& zeta0, const S& t_end,
                                                  const S& tol = ScalarTraits<S>::kExact
                                                                     ? S(0)
                                                                     : S(1e-10));

// CSV rows path_id,t,x.
template <typename S>
void write_paths_csv(std::ostream& out, const std::vector<CharacteristicPath<S>>& paths,
                     bool header = true);

}  // namespace wft

#endif  // WFT_CHARACTERISTICS_HPP_
