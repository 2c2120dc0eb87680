#ifndef WFT_PROFILE_HPP_
#define WFT_PROFILE_HPP_

#include <optional>
#include <utility>
#include <vector>

#include "wft/flux.hpp"
#include "wft/scalar.hpp"

namespace wft {

// Right-continuous piecewise-constant function of x.
//
// values[0] holds on (-inf, breakpoints[0]), values[k] on
// [breakpoints[k-1], breakpoints[k]), and values.back() on
// [breakpoints.back(), +inf). Adjacent values always differ: the constructor
// folds zero-strength jumps away.
template <typename S>
class Profile {
 public:
  Profile() : values_{S(0)} {}
  explicit Profile(S constant) : values_{std::move(constant)} {}
  // Throws unless breakpoints are nondecreasing and values has one more entry.
  // Repeated breakpoints collapse (the middle values have zero width).
  Profile(std::vector<S> breakpoints, std::vector<S> values);

  const std::vector<S>& breakpoints() const { return breakpoints_; }
  const std::vector<S>& values() const { return values_; }
  std::size_t jump_count() const { return breakpoints_.size(); }
  const S& far_left() const { return values_.front(); }
  const S& far_right() const { return values_.back(); }

  S operator()(const S& x) const;
  // Value on (x - 0, x).
  S left_limit(const S& x) const;

  bool compactly_supported() const { return far_left() == S(0) && far_right() == S(0); }

 private:
  std::vector<S> breakpoints_;
  std::vector<S> values_;
};

// Cumulative variation V(x) = TV over (-inf, x] of a profile, optionally with
// a continuous (atomless) part given as nondecreasing samples (x_i, V_c(x_i)).
template <typename S>
class VariationFunction {
 public:
  explicit VariationFunction(Profile<S> base,
                             std::vector<std::pair<S, S>> continuous_samples = {});

  const Profile<S>& base() const { return base_; }
  S cumulative(const S& x) const;
  S total() const;
  // |jump| of the base profile at each breakpoint.
  const std::vector<S>& jump_sizes() const { return jumps_; }
  const std::vector<std::pair<S, S>>& continuous_samples() const { return continuous_; }

 private:
  Profile<S> base_;
  std::vector<S> jumps_;
  std::vector<S> prefix_;
  std::vector<std::pair<S, S>> continuous_;
};

template <typename S>
struct Window {
  S lo;
  S hi;
};

template <typename S>
S total_variation(const Profile<S>& p, const std::optional<Window<S>>& window = std::nullopt);

template <typename S>
S total_variation(const Profile<S>& p, const Window<S>& window) {
  return total_variation(p, std::optional<Window<S>>(window));
}

template <typename S>
S l1_norm(const Profile<S>& p);

template <typename S>
S l2_norm_squared(const Profile<S>& p);

template <typename S>
S sup_norm(const Profile<S>& p);

// Integral of |p| w. Rejects negative weights; zero is allowed (m = 0 weights).
template <typename S>
S weighted_l1_norm(const Profile<S>& p, const Profile<S>& w);

// Signed integral of p over [lo, hi].
template <typename S>
S integral(const Profile<S>& p, const S& lo, const S& hi);

// Infimum of p over the open interval (lo, hi); nullopt when empty.
template <typename S>
std::optional<S> infimum_on(const Profile<S>& p, const S& lo, const S& hi);

template <typename S>
Profile<S> operator-(const Profile<S>& a, const Profile<S>& b);

template <typename S>
Profile<S> operator+(const Profile<S>& a, const Profile<S>& b);

// Both profiles on the union of their breakpoints: for each of the n + 1
// pieces, the pair of values. Breakpoints are returned in `breaks`.
template <typename S>
std::vector<std::pair<S, S>> merge_pieces(const Profile<S>& a, const Profile<S>& b,
                                          std::vector<S>* breaks);

// A Borel set for nonconservative products: the closed interval [lo, hi]
// (a single point when lo == hi).
template <typename S>
struct ClosedInterval {
  S lo;
  S hi;
};

// Measure of `set` under mu = (a(u, v) - f'(u)) (v - u) dw, where w is the
// variation function `w_bv`. Jumps of w carry the trace-averaged atoms; the
// continuous part of w is integrated by the midpoint Stieltjes rule on its
// samples.
template <typename S>
S nonconservative_product(const FluxModel<S>& flux, const Profile<S>& u, const Profile<S>& v,
                          const VariationFunction<S>& w_bv, const ClosedInterval<S>& set);

// Atom of mu_psi at a jump of u: (a_minus - lambda) psi_minus jump_size.
template <typename S>
S mu_psi_atom(const S& a_minus, const S& lambda, const S& psi_minus, const S& jump_size);

}  // namespace wft

#endif  // WFT_PROFILE_HPP_
