#ifndef WFT_FRONT_TRACKING_HPP_
#define WFT_FRONT_TRACKING_HPP_

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "wft/flux.hpp"
#include "wft/profile.hpp"

namespace wft {

enum class FrontKind { kShock, kFanMember };

const char* to_string(FrontKind kind);

// A straight jump line x(t) = origin_x + speed (t - birth_time), alive on
// [birth_time, death_time).
template <typename S>
struct Front {
  int id = -1;
  S origin_x;
  S birth_time;
  S speed;
  S left_state;
  S right_state;
  FrontKind kind = FrontKind::kShock;
  std::optional<S> death_time;

  S position(const S& t) const { return origin_x + speed * (t - birth_time); }
  bool alive_at(const S& t) const {
    return !(t < birth_time) && (!death_time || t < *death_time);
  }
};

// Riemann fan at a point, before it is given an origin: states and speeds.
template <typename S>
struct RiemannWave {
  S left_state;
  S right_state;
  S speed;
  FrontKind kind;
};

// One merge of two adjacent fronts.
template <typename S>
struct Interaction {
  S time;
  S position;
  std::vector<int> incoming;
  std::vector<int> outgoing;
};

// Raised when the event geometry turns inconsistent in floating point.
class FrontTrackingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shock for u_left > u_right; a fan of ceil((u_right - u_left) / h) equal
// state increments for u_left < u_right; nothing for equal states.
template <typename S>
std::vector<RiemannWave<S>> solve_riemann(const FluxModel<S>& flux, const S& u_left,
                                          const S& u_right, const S& h);

// The x-t wave diagram of one front-tracking approximation.
template <typename S>
class FrontTrackingRun {
 public:
  FrontTrackingRun(FluxModel<S> flux, S h, Profile<S> initial);

  // Advances the interaction loop up to t_end (>= horizon()).
  void evolve(const S& t_end);

  const FluxModel<S>& flux() const { return flux_; }
  const S& h() const { return h_; }
  const Profile<S>& initial() const { return initial_; }
  const S& horizon() const { return horizon_; }
  const std::vector<Front<S>>& fronts() const { return fronts_; }
  const std::vector<Interaction<S>>& interactions() const { return interactions_; }
  // Distinct interaction times, increasing.
  std::vector<S> event_times() const;

  // Fronts alive at t, left to right. At an interaction time the outgoing
  // fronts are reported.
  std::vector<const Front<S>*> fronts_at(const S& t) const;
  Profile<S> sample(const S& t) const;

 private:
  struct Epoch {
    S start;
    std::vector<int> order;
  };
  struct Candidate {
    S time;
    int left;
    int right;
  };

  void push_candidate(std::vector<Candidate>* heap, int left, int right) const;
  const Epoch& epoch_at(const S& t) const;

  FluxModel<S> flux_;
  S h_;
  Profile<S> initial_;
  S horizon_;
  std::vector<Front<S>> fronts_;
  std::vector<Interaction<S>> interactions_;
  std::vector<Epoch> epochs_;
  // Pending collision candidates; kept between evolve() calls.
  std::vector<Candidate> heap_;
};

template <typename S>
FrontTrackingRun<S> evolve(FrontTrackingRun<S> run, const S& t_end) {
  run.evolve(t_end);
  return run;
}

// Midpoint sampling of a generator on n equal cells covering `support`.
// Outside the support the profile takes the generator's values at the
// support ends, so a generator vanishing there gives compact support.
Profile<double> sample_initial_data(const std::function<double(double)>& generator,
                                    Window<double> support, int n_cells);

}  // namespace wft

#endif  // WFT_FRONT_TRACKING_HPP_
