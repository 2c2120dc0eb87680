#ifndef WFT_FLUX_HPP_
#define WFT_FLUX_HPP_

#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wft/scalar.hpp"

namespace wft {

template <typename S>
struct StateInterval {
  S lo;
  S hi;
  bool contains(const S& u) const { return !(u < lo) && !(hi < u); }
};

// A smooth convex flux restricted to a working state interval.
//
// The second-derivative bounds are declared by whoever builds the model and
// are spot-checked by sampling at construction. A flux whose f'' vanishes at
// isolated points (u^4 through 0) is still strictly convex; its convexity
// modulus is then reported as 0.
template <typename S>
class FluxModel {
 public:
  using Fn = std::function<S(const S&)>;
  // Optional closed-form secant (f(v) - f(u)) / (v - u), valid for u != v.
  using SecantFn = std::function<S(const S&, const S&)>;

  FluxModel(std::string name, Fn f, Fn df, Fn d2f, StateInterval<S> working,
            std::pair<double, double> d2f_bounds, SecantFn secant = nullptr);

  // Default working intervals: [-10, 10] for burgers, [-2, 2] otherwise.
  // (Plain overloads: braced default arguments get mixed up between these
  // factories by g++ 11.)
  static FluxModel burgers() { return burgers({S(-10), S(10)}); }
  static FluxModel burgers(StateInterval<S> working);
  static FluxModel quartic() { return quartic({S(-2), S(2)}); }
  static FluxModel quartic(StateInterval<S> working);
  // Double precision only.
  static FluxModel exponential() { return exponential({S(-2), S(2)}); }
  static FluxModel exponential(StateInterval<S> working);

  const std::string& name() const { return name_; }
  S evaluate(const S& u) const { return f_(u); }
  S derivative(const S& u) const { return df_(u); }
  S second_derivative(const S& u) const { return d2f_(u); }
  const StateInterval<S>& working_interval() const { return working_; }
  // [inf f'', sup f''] over the working interval.
  std::pair<double, double> second_derivative_bounds() const { return d2f_bounds_; }
  double sup_second_derivative() const { return d2f_bounds_.second; }
  double convexity_modulus() const { return d2f_bounds_.first; }
  bool has_closed_form_secant() const { return static_cast<bool>(secant_); }
  S closed_form_secant(const S& u, const S& v) const { return secant_(u, v); }

 private:
  void spot_check() const;

  std::string name_;
  Fn f_;
  Fn df_;
  Fn d2f_;
  StateInterval<S> working_;
  std::pair<double, double> d2f_bounds_;
  SecantFn secant_;
};

// (f(v) - f(u)) / (v - u); f'((u + v) / 2) once |v - u| <= eps_state.
template <typename S>
S secant_speed(const FluxModel<S>& flux, const S& u, const S& v);

// Shock speed of a front joining u_left to u_right. Throws on equal states.
template <typename S>
S rankine_hugoniot_speed(const FluxModel<S>& flux, const S& u_left, const S& u_right);

// Builds a flux from its name and parameter list, as used in scenario files.
// Known names: burgers, quartic, exp. `params` may hold the working interval.
template <typename S>
FluxModel<S> make_flux(const std::string& name, const std::vector<double>& params);

}  // namespace wft

#endif  // WFT_FLUX_HPP_
