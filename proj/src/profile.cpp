#include "wft/profile.hpp"

#include <algorithm>
#include <stdexcept>

namespace wft {

template <typename S>
Profile<S>::Profile(std::vector<S> breakpoints, std::vector<S> values) {
  if (values.size() != breakpoints.size() + 1) {
    throw std::invalid_argument("Profile: need exactly one more value than breakpoints");
  }
  for (std::size_t i = 1; i < breakpoints.size(); ++i) {
    if (breakpoints[i] < breakpoints[i - 1]) {
      throw std::invalid_argument("Profile: breakpoints must be increasing");
    }
  }
  values_.reserve(values.size());
  breakpoints_.reserve(breakpoints.size());
  values_.push_back(std::move(values[0]));
  for (std::size_t i = 0; i < breakpoints.size(); ++i) {
    // A repeated breakpoint means the piece in between has zero width.
    if (!breakpoints_.empty() && breakpoints_.back() == breakpoints[i]) {
      values_.back() = std::move(values[i + 1]);
      if (values_.size() >= 2 && values_[values_.size() - 2] == values_.back()) {
        values_.pop_back();
        breakpoints_.pop_back();
      }
      continue;
    }
    if (values[i + 1] == values_.back()) continue;
    breakpoints_.push_back(std::move(breakpoints[i]));
    values_.push_back(std::move(values[i + 1]));
  }
}

template <typename S>
S Profile<S>::operator()(const S& x) const {
  auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
  return values_[static_cast<std::size_t>(it - breakpoints_.begin())];
}

template <typename S>
S Profile<S>::left_limit(const S& x) const {
  auto it = std::lower_bound(breakpoints_.begin(), breakpoints_.end(), x);
  return values_[static_cast<std::size_t>(it - breakpoints_.begin())];
}

template <typename S>
VariationFunction<S>::VariationFunction(Profile<S> base,
                                        std::vector<std::pair<S, S>> continuous_samples)
    : base_(std::move(base)), continuous_(std::move(continuous_samples)) {
  const auto& vals = base_.values();
  prefix_.push_back(S(0));
  for (std::size_t k = 0; k < base_.jump_count(); ++k) {
    jumps_.push_back(abs_value(S(vals[k + 1] - vals[k])));
    prefix_.push_back(prefix_.back() + jumps_.back());
  }
  for (std::size_t i = 1; i < continuous_.size(); ++i) {
    if (continuous_[i].first < continuous_[i - 1].first ||
        continuous_[i].second < continuous_[i - 1].second) {
      throw std::invalid_argument("VariationFunction: continuous samples must be nondecreasing");
    }
  }
}

template <typename S>
S VariationFunction<S>::cumulative(const S& x) const {
  const auto& br = base_.breakpoints();
  auto it = std::upper_bound(br.begin(), br.end(), x);
  S total = prefix_[static_cast<std::size_t>(it - br.begin())];
  if (!continuous_.empty()) {
    // Piecewise-linear interpolation of the continuous part, offset to 0.
    const S& v0 = continuous_.front().second;
    if (!(x < continuous_.back().first)) {
      total += continuous_.back().second - v0;
    } else if (continuous_.front().first < x) {
      auto cit = std::upper_bound(continuous_.begin(), continuous_.end(), x,
                                  [](const S& lhs, const auto& rhs) { return lhs < rhs.first; });
      const auto& hi = *cit;
      const auto& lo = *(cit - 1);
      const S frac = S((x - lo.first) / (hi.first - lo.first));
      total += lo.second - v0 + frac * (hi.second - lo.second);
    }
  }
  return total;
}

template <typename S>
S VariationFunction<S>::total() const {
  S total = prefix_.back();
  if (!continuous_.empty()) total += continuous_.back().second - continuous_.front().second;
  return total;
}

template <typename S>
S total_variation(const Profile<S>& p, const std::optional<Window<S>>& window) {
  const auto& br = p.breakpoints();
  const auto& vals = p.values();
  S tv(0);
  for (std::size_t k = 0; k < br.size(); ++k) {
    if (window && (br[k] < window->lo || window->hi < br[k])) continue;
    tv += abs_value(S(vals[k + 1] - vals[k]));
  }
  return tv;
}

namespace {

template <typename S>
void require_compact(const Profile<S>& p, const char* what) {
  if (!p.compactly_supported()) {
    throw std::invalid_argument(std::string(what) + ": profile is not compactly supported");
  }
}

}  // namespace

template <typename S>
S l1_norm(const Profile<S>& p) {
  require_compact(p, "l1_norm");
  const auto& br = p.breakpoints();
  const auto& vals = p.values();
  S sum(0);
  for (std::size_t k = 1; k < br.size(); ++k) sum += abs_value(vals[k]) * (br[k] - br[k - 1]);
  return sum;
}

template <typename S>
S l2_norm_squared(const Profile<S>& p) {
  require_compact(p, "l2_norm");
  const auto& br = p.breakpoints();
  const auto& vals = p.values();
  S sum(0);
  for (std::size_t k = 1; k < br.size(); ++k) sum += vals[k] * vals[k] * (br[k] - br[k - 1]);
  return sum;
}

template <typename S>
S sup_norm(const Profile<S>& p) {
  S best(0);
  for (const auto& v : p.values()) best = std::max(best, abs_value(v));
  return best;
}

template <typename S>
std::vector<std::pair<S, S>> merge_pieces(const Profile<S>& a, const Profile<S>& b,
                                          std::vector<S>* breaks) {
  const auto& ba = a.breakpoints();
  const auto& bb = b.breakpoints();
  std::vector<std::pair<S, S>> pieces;
  breaks->clear();
  std::size_t i = 0;
  std::size_t j = 0;
  pieces.emplace_back(a.values()[0], b.values()[0]);
  while (i < ba.size() || j < bb.size()) {
    S x;
    if (j == bb.size() || (i < ba.size() && ba[i] < bb[j])) {
      x = ba[i++];
    } else if (i == ba.size() || bb[j] < ba[i]) {
      x = bb[j++];
    } else {
      x = ba[i];
      ++i;
      ++j;
    }
    breaks->push_back(x);
    pieces.emplace_back(a.values()[i], b.values()[j]);
  }
  return pieces;
}

template <typename S>
S weighted_l1_norm(const Profile<S>& p, const Profile<S>& w) {
  require_compact(p, "weighted_l1_norm");
  for (const auto& v : w.values()) {
    if (v < S(0)) throw std::invalid_argument("weighted_l1_norm: negative weight value");
  }
  std::vector<S> br;
  auto pieces = merge_pieces(p, w, &br);
  S sum(0);
  for (std::size_t k = 1; k < br.size(); ++k) {
    sum += abs_value(pieces[k].first) * pieces[k].second * (br[k] - br[k - 1]);
  }
  return sum;
}

template <typename S>
S integral(const Profile<S>& p, const S& lo, const S& hi) {
  if (hi < lo) return S(-integral(p, hi, lo));
  const auto& br = p.breakpoints();
  const auto& vals = p.values();
  S sum(0);
  S cursor = lo;
  std::size_t k = static_cast<std::size_t>(std::upper_bound(br.begin(), br.end(), lo) - br.begin());
  while (cursor < hi) {
    S next = (k < br.size() && br[k] < hi) ? br[k] : hi;
    sum += vals[k] * (next - cursor);
    cursor = next;
    ++k;
  }
  return sum;
}

template <typename S>
std::optional<S> infimum_on(const Profile<S>& p, const S& lo, const S& hi) {
  if (!(lo < hi)) return std::nullopt;
  const auto& br = p.breakpoints();
  const auto& vals = p.values();
  std::size_t k = static_cast<std::size_t>(std::upper_bound(br.begin(), br.end(), lo) - br.begin());
  S best = vals[k];
  for (; k < br.size() && br[k] < hi; ++k) best = std::min(best, vals[k + 1]);
  return best;
}

template <typename S>
Profile<S> operator-(const Profile<S>& a, const Profile<S>& b) {
  std::vector<S> br;
  auto pieces = merge_pieces(a, b, &br);
  std::vector<S> vals;
  vals.reserve(pieces.size());
  for (auto& [x, y] : pieces) vals.push_back(S(x - y));
  return Profile<S>(std::move(br), std::move(vals));
}

template <typename S>
Profile<S> operator+(const Profile<S>& a, const Profile<S>& b) {
  std::vector<S> br;
  auto pieces = merge_pieces(a, b, &br);
  std::vector<S> vals;
  vals.reserve(pieces.size());
  for (auto& [x, y] : pieces) vals.push_back(S(x + y));
  return Profile<S>(std::move(br), std::move(vals));
}

template <typename S>
S nonconservative_product(const FluxModel<S>& flux, const Profile<S>& u, const Profile<S>& v,
                          const VariationFunction<S>& w_bv, const ClosedInterval<S>& set) {
  auto speed = [&](const S& p, const S& q) { return secant_speed(flux, p, q); };
  S measure(0);

  // Atoms at the jumps of w.
  const auto& wb = w_bv.base().breakpoints();
  const auto& jumps = w_bv.jump_sizes();
  for (std::size_t k = 0; k < wb.size(); ++k) {
    const S& x = wb[k];
    if (x < set.lo || set.hi < x) continue;
    const S u_minus = u.left_limit(x);
    const S u_plus = u(x);
    const S v_minus = v.left_limit(x);
    const S v_plus = v(x);
    const S shock = speed(u_minus, u_plus);
    const S right_term = (speed(u_plus, v_plus) - shock) * (v_plus - u_plus);
    const S left_term = (speed(u_minus, v_minus) - shock) * (v_minus - u_minus);
    measure += (right_term + left_term) / 2 * jumps[k];
  }

  // Classical Stieltjes part against the continuous samples.
  const auto& cs = w_bv.continuous_samples();
  for (std::size_t i = 1; i < cs.size(); ++i) {
    S lo = std::max(cs[i - 1].first, set.lo);
    S hi = std::min(cs[i].first, set.hi);
    if (!(lo < hi)) continue;
    const S width = cs[i].first - cs[i - 1].first;
    const S dv = (cs[i].second - cs[i - 1].second) * (hi - lo) / width;
    const S mid = (lo + hi) / 2;
    const S um = u(mid);
    const S vm = v(mid);
    measure += (speed(um, vm) - flux.derivative(um)) * (vm - um) * dv;
  }
  return measure;
}

template <typename S>
S mu_psi_atom(const S& a_minus, const S& lambda, const S& psi_minus, const S& jump_size) {
  if (jump_size < S(0)) throw std::invalid_argument("mu_psi_atom: negative jump size");
  return (a_minus - lambda) * psi_minus * jump_size;
}

#define WFT_INSTANTIATE_PROFILE(S)                                                             \
  template class Profile<S>;                                                                   \
  template class VariationFunction<S>;                                                         \
  template S total_variation(const Profile<S>&, const std::optional<Window<S>>&);              \
  template S l1_norm(const Profile<S>&);                                                       \
  template S l2_norm_squared(const Profile<S>&);                                               \
  template S sup_norm(const Profile<S>&);                                                      \
  template S weighted_l1_norm(const Profile<S>&, const Profile<S>&);                           \
  template S integral(const Profile<S>&, const S&, const S&);                                  \
  template std::optional<S> infimum_on(const Profile<S>&, const S&, const S&);                 \
  template Profile<S> operator-(const Profile<S>&, const Profile<S>&);                         \
  template Profile<S> operator+(const Profile<S>&, const Profile<S>&);                         \
  template std::vector<std::pair<S, S>> merge_pieces(const Profile<S>&, const Profile<S>&,     \
                                                     std::vector<S>*);                         \
  template S nonconservative_product(const FluxModel<S>&, const Profile<S>&, const Profile<S>&, \
                                     const VariationFunction<S>&, const ClosedInterval<S>&);   \
  template S mu_psi_atom(const S&, const S&, const S&, const S&);

WFT_INSTANTIATE_PROFILE(double)
WFT_INSTANTIATE_PROFILE(Rational)

}  // namespace wft
