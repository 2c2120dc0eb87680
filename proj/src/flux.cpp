#include "wft/flux.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace wft {

template <typename S>
FluxModel<S>::FluxModel(std::string name, Fn f, Fn df, Fn d2f, StateInterval<S> working,
                        std::pair<double, double> d2f_bounds, SecantFn secant)
    : name_(std::move(name)),
      f_(std::move(f)),
      df_(std::move(df)),
      d2f_(std::move(d2f)),
      working_(std::move(working)),
      d2f_bounds_(d2f_bounds),
      secant_(std::move(secant)) {
  if (!(working_.lo < working_.hi)) {
    throw std::invalid_argument("flux '" + name_ + "': empty working interval");
  }
  if (d2f_bounds_.first < 0.0 || d2f_bounds_.second < d2f_bounds_.first ||
      d2f_bounds_.second <= 0.0) {
    throw std::invalid_argument("flux '" + name_ + "': second-derivative bounds must satisfy "
                                "0 <= inf f'' <= sup f'', sup f'' > 0");
  }
  spot_check();
}

template <typename S>
void FluxModel<S>::spot_check() const {
  constexpr int kProbes = 65;
  const double lo = to_double(working_.lo);
  const double hi = to_double(working_.hi);
  int positive = 0;
  for (int i = 0; i < kProbes; ++i) {
    const double u = lo + (hi - lo) * i / (kProbes - 1);
    const double d2 = to_double(d2f_(ScalarTraits<S>::from_double(u)));
    const double slack = 1e-9 * (1.0 + std::abs(d2f_bounds_.second));
    if (d2 < d2f_bounds_.first - slack || d2 > d2f_bounds_.second + slack) {
      std::ostringstream msg;
      msg << "flux '" << name_ << "': f''(" << u << ") = " << d2
          << " outside declared bounds [" << d2f_bounds_.first << ", " << d2f_bounds_.second
          << "]";
      throw std::invalid_argument(msg.str());
    }
    if (d2 > 0.0) ++positive;
    if (i % 8 == 0 && std::is_same_v<S, double>) {
      // Central difference of f against f'.
      const double step = 1e-5 * (1.0 + std::abs(u));
      const double fd = (to_double(f_(ScalarTraits<S>::from_double(u + step))) -
                         to_double(f_(ScalarTraits<S>::from_double(u - step)))) /
                        (2.0 * step);
      const double exact = to_double(df_(ScalarTraits<S>::from_double(u)));
      if (std::abs(fd - exact) > 1e-6 * std::max(1.0, std::abs(exact))) {
        throw std::invalid_argument("flux '" + name_ + "': derivative inconsistent with f");
      }
    }
  }
  // Strict convexity: f'' may vanish only at isolated probes.
  if (positive < kProbes - 1) {
    throw std::invalid_argument("flux '" + name_ + "': not strictly convex on working interval");
  }
}

template <typename S>
FluxModel<S> FluxModel<S>::burgers(StateInterval<S> working) {
  return FluxModel(
      "burgers", [](const S& u) { return S(u * u / 2); }, [](const S& u) { return u; },
      [](const S&) { return S(1); }, working, {1.0, 1.0},
      [](const S& u, const S& v) { return S((u + v) / 2); });
}

template <typename S>
FluxModel<S> FluxModel<S>::quartic(StateInterval<S> working) {
  const double lo = to_double(working.lo);
  const double hi = to_double(working.hi);
  const double inf = (lo <= 0.0 && hi >= 0.0) ? 0.0 : 12.0 * std::min(lo * lo, hi * hi);
  const double sup = 12.0 * std::max(lo * lo, hi * hi);
  return FluxModel(
      "quartic", [](const S& u) { return S(u * u * u * u); },
      [](const S& u) { return S(4 * u * u * u); }, [](const S& u) { return S(12 * u * u); },
      working, {inf, sup},
      [](const S& u, const S& v) { return S((u + v) * (u * u + v * v)); });
}

template <>
FluxModel<double> FluxModel<double>::exponential(StateInterval<double> working) {
  return FluxModel(
      "exp", [](const double& u) { return std::exp(u); },
      [](const double& u) { return std::exp(u); }, [](const double& u) { return std::exp(u); },
      working, {std::exp(working.lo), std::exp(working.hi)},
      [](const double& u, const double& v) { return std::exp(u) * std::expm1(v - u) / (v - u); });
}

template <>
FluxModel<Rational> FluxModel<Rational>::exponential(StateInterval<Rational>) {
  throw std::invalid_argument("flux 'exp' has no exact rational evaluation");
}

template <typename S>
S secant_speed(const FluxModel<S>& flux, const S& u, const S& v) {
  const S gap = abs_value(S(v - u));
  if (gap <= ScalarTraits<S>::eps_state()) return flux.derivative(S((u + v) / 2));
  if (flux.has_closed_form_secant()) {
    // Closed forms are symmetric by construction; order the arguments anyway so
    // the floating-point result is too.
    return u < v ? flux.closed_form_secant(u, v) : flux.closed_form_secant(v, u);
  }
  const S& lo = u < v ? u : v;
  const S& hi = u < v ? v : u;
  return S((flux.evaluate(hi) - flux.evaluate(lo)) / (hi - lo));
}

template <typename S>
S rankine_hugoniot_speed(const FluxModel<S>& flux, const S& u_left, const S& u_right) {
  if (u_left == u_right) {
    throw std::invalid_argument("rankine_hugoniot_speed: equal states carry no front");
  }
  return secant_speed(flux, u_left, u_right);
}

template <typename S>
FluxModel<S> make_flux(const std::string& name, const std::vector<double>& params) {
  StateInterval<S> working{S(-10), S(10)};
  if (name != "burgers") working = {S(-2), S(2)};
  if (params.size() == 2) {
    working = {ScalarTraits<S>::from_double(params[0]), ScalarTraits<S>::from_double(params[1])};
  } else if (!params.empty()) {
    throw std::invalid_argument("flux params: expected [lo, hi] working interval");
  }
  if (name == "burgers") return FluxModel<S>::burgers(working);
  if (name == "quartic") return FluxModel<S>::quartic(working);
  if (name == "exp") return FluxModel<S>::exponential(working);
  throw std::invalid_argument("unknown flux '" + name + "'");
}

template class FluxModel<double>;
template class FluxModel<Rational>;
template double secant_speed(const FluxModel<double>&, const double&, const double&);
template Rational secant_speed(const FluxModel<Rational>&, const Rational&, const Rational&);
template double rankine_hugoniot_speed(const FluxModel<double>&, const double&, const double&);
template Rational rankine_hugoniot_speed(const FluxModel<Rational>&, const Rational&,
                                         const Rational&);
template FluxModel<double> make_flux(const std::string&, const std::vector<double>&);
template FluxModel<Rational> make_flux(const std::string&, const std::vector<double>&);

}  // namespace wft
