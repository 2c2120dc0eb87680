#include "wft/front_tracking.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace wft {

const char* to_string(FrontKind kind) {
  return kind == FrontKind::kShock ? "shock" : "fan";
}

namespace {

int fan_size(double ratio) { return std::max(1, static_cast<int>(std::ceil(ratio - 1e-9))); }

int fan_size(const Rational& ratio) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  auto num = numerator(ratio);
  auto den = denominator(ratio);
  auto q = num / den;
  if (q * den != num) q += 1;
  return std::max(1, q.convert_to<int>());
}

}  // namespace

template <typename S>
std::vector<RiemannWave<S>> solve_riemann(const FluxModel<S>& flux, const S& u_left,
                                          const S& u_right, const S& h) {
  if (!(S(0) < h)) throw std::invalid_argument("solve_riemann: h must be positive");
  std::vector<RiemannWave<S>> waves;
  if (abs_value(S(u_right - u_left)) <= ScalarTraits<S>::eps_state()) return waves;
  if (u_right < u_left) {
    waves.push_back({u_left, u_right, rankine_hugoniot_speed(flux, u_left, u_right),
                     FrontKind::kShock});
    return waves;
  }
  const int n = fan_size(S((u_right - u_left) / h));
  const S step = (u_right - u_left) / n;
  S lo = u_left;
  for (int k = 1; k <= n; ++k) {
    S hi = k == n ? u_right : S(u_left + step * k);
    waves.push_back({lo, hi, rankine_hugoniot_speed(flux, lo, hi), FrontKind::kFanMember});
    lo = hi;
  }
  return waves;
}

template <typename S>
FrontTrackingRun<S>::FrontTrackingRun(FluxModel<S> flux, S h, Profile<S> initial)
    : flux_(std::move(flux)), h_(std::move(h)), initial_(std::move(initial)), horizon_(0) {
  if (!(S(0) < h_)) throw std::invalid_argument("FrontTrackingRun: h must be positive");
  const auto& br = initial_.breakpoints();
  const auto& vals = initial_.values();
  for (const auto& v : vals) {
    if (!flux_.working_interval().contains(v)) {
      throw std::invalid_argument("FrontTrackingRun: initial state " +
                                  ScalarTraits<S>::to_string(v) +
                                  " outside the flux working interval");
    }
  }
  Epoch first{S(0), {}};
  for (std::size_t k = 0; k < br.size(); ++k) {
    for (auto& wave : solve_riemann(flux_, vals[k], vals[k + 1], h_)) {
      Front<S> f;
      f.id = static_cast<int>(fronts_.size());
      f.origin_x = br[k];
      f.birth_time = S(0);
      f.speed = wave.speed;
      f.left_state = wave.left_state;
      f.right_state = wave.right_state;
      f.kind = wave.kind;
      first.order.push_back(f.id);
      fronts_.push_back(std::move(f));
    }
  }
  epochs_.push_back(std::move(first));
  const auto& order = epochs_.back().order;
  for (std::size_t i = 1; i < order.size(); ++i) push_candidate(&heap_, order[i - 1], order[i]);
}

namespace {

template <typename C>
struct LaterFirst {
  bool operator()(const C& a, const C& b) const {
    if (a.time != b.time) return b.time < a.time;
    return b.left < a.left;
  }
};

}  // namespace

template <typename S>
void FrontTrackingRun<S>::push_candidate(std::vector<Candidate>* heap, int left,
                                         int right) const {
  const Front<S>& l = fronts_[static_cast<std::size_t>(left)];
  const Front<S>& r = fronts_[static_cast<std::size_t>(right)];
  if (!(r.speed < l.speed)) return;
  // Solve origin_l + s_l (t - t_l) = origin_r + s_r (t - t_r).
  S t = (r.origin_x - l.origin_x + l.speed * l.birth_time - r.speed * r.birth_time) /
        (l.speed - r.speed);
  heap->push_back({std::move(t), left, right});
  std::push_heap(heap->begin(), heap->end(), LaterFirst<Candidate>{});
}

template <typename S>
void FrontTrackingRun<S>::evolve(const S& t_end) {
  if (t_end < horizon_) throw std::invalid_argument("evolve: t_end precedes the current time");
  const LaterFirst<Candidate> later;
  std::vector<int> order = epochs_.back().order;

  auto index_of = [&order](int id) -> long {
    auto it = std::find(order.begin(), order.end(), id);
    return it == order.end() ? -1 : static_cast<long>(it - order.begin());
  };
  auto is_valid = [&](const Candidate& c) {
    if (fronts_[static_cast<std::size_t>(c.left)].death_time ||
        fronts_[static_cast<std::size_t>(c.right)].death_time) {
      return false;
    }
    long i = index_of(c.left);
    return i >= 0 && i + 1 < static_cast<long>(order.size()) &&
           order[static_cast<std::size_t>(i + 1)] == c.right;
  };
  auto pop = [&]() {
    std::pop_heap(heap_.begin(), heap_.end(), later);
    Candidate c = std::move(heap_.back());
    heap_.pop_back();
    return c;
  };

  while (!heap_.empty()) {
    if (!is_valid(heap_.front())) {
      pop();
      continue;
    }
    const S t_min = heap_.front().time;
    if (t_end < t_min) break;

    // Everything within eps_time of t_min is one time stamp; take the leftmost.
    std::vector<Candidate> batch;
    while (!heap_.empty() && !(t_min + ScalarTraits<S>::eps_time() < heap_.front().time)) {
      Candidate c = pop();
      if (is_valid(c)) batch.push_back(std::move(c));
    }
    auto chosen = std::min_element(batch.begin(), batch.end(), [&](const auto& a, const auto& b) {
      return index_of(a.left) < index_of(b.left);
    });
    Candidate event = *chosen;
    batch.erase(chosen);
    for (auto& c : batch) {
      heap_.push_back(std::move(c));
      std::push_heap(heap_.begin(), heap_.end(), later);
    }

    S time = event.time;
    if (time < horizon_) {
      if (horizon_ - time > S(1e-9) * (S(1) + abs_value(horizon_))) {
        std::ostringstream msg;
        msg << "collision time " << to_double(time) << " precedes current time "
            << to_double(horizon_);
        throw FrontTrackingError(msg.str());
      }
      time = horizon_;
    }
    Front<S>& left = fronts_[static_cast<std::size_t>(event.left)];
    Front<S>& right = fronts_[static_cast<std::size_t>(event.right)];
    const S x = ScalarTraits<S>::kExact ? left.position(time)
                                        : S((left.position(time) + right.position(time)) / 2);
    left.death_time = time;
    right.death_time = time;

    Interaction<S> record{time, x, {event.left, event.right}, {}};
    const S u_left = left.left_state;
    const S u_right = right.right_state;
    auto waves = solve_riemann(flux_, u_left, u_right, h_);
    if (waves.size() > 1) {
      throw FrontTrackingError("interaction produced a rarefaction of strength above h");
    }
    const long at = index_of(event.left);
    order.erase(order.begin() + at, order.begin() + at + 2);
    for (auto& wave : waves) {
      if (wave.kind == FrontKind::kFanMember &&
          h_ < wave.right_state - wave.left_state) {
        throw FrontTrackingError("entropy persistency violated at interaction");
      }
      Front<S> f;
      f.id = static_cast<int>(fronts_.size());
      f.origin_x = x;
      f.birth_time = time;
      f.speed = wave.speed;
      f.left_state = wave.left_state;
      f.right_state = wave.right_state;
      f.kind = wave.kind;
      record.outgoing.push_back(f.id);
      order.insert(order.begin() + at, f.id);
      fronts_.push_back(std::move(f));
    }
    interactions_.push_back(record);
    horizon_ = time;
    epochs_.push_back({time, order});

    // New adjacent pairs around the interaction point.
    const long lo = at - 1;
    const long hi = at + static_cast<long>(waves.size());
    for (long i = std::max(0L, lo); i < hi && i + 1 < static_cast<long>(order.size()); ++i) {
      push_candidate(&heap_, order[static_cast<std::size_t>(i)],
                     order[static_cast<std::size_t>(i + 1)]);
    }
  }
  horizon_ = t_end;
}

template <typename S>
std::vector<S> FrontTrackingRun<S>::event_times() const {
  std::vector<S> times;
  for (const auto& ev : interactions_) {
    if (times.empty() || times.back() != ev.time) times.push_back(ev.time);
  }
  return times;
}

template <typename S>
const typename FrontTrackingRun<S>::Epoch& FrontTrackingRun<S>::epoch_at(const S& t) const {
  if (t < S(0) || horizon_ < t) {
    throw std::out_of_range("FrontTrackingRun: time " + ScalarTraits<S>::to_string(t) +
                            " outside [0, horizon]");
  }
  auto it = std::upper_bound(epochs_.begin(), epochs_.end(), t,
                             [](const S& value, const Epoch& e) { return value < e.start; });
  return *(it - 1);
}

template <typename S>
std::vector<const Front<S>*> FrontTrackingRun<S>::fronts_at(const S& t) const {
  const Epoch& epoch = epoch_at(t);
  std::vector<const Front<S>*> out;
  out.reserve(epoch.order.size());
  for (int id : epoch.order) out.push_back(&fronts_[static_cast<std::size_t>(id)]);
  return out;
}

template <typename S>
Profile<S> FrontTrackingRun<S>::sample(const S& t) const {
  auto fronts = fronts_at(t);
  if (fronts.empty()) return Profile<S>(initial_.far_left());
  std::vector<S> br;
  std::vector<S> vals;
  br.reserve(fronts.size());
  vals.reserve(fronts.size() + 1);
  vals.push_back(fronts.front()->left_state);
  for (const auto* f : fronts) {
    S x = f->position(t);
    // Rounding just before a collision can invert two positions.
    if (!br.empty() && x < br.back()) x = br.back();
    br.push_back(std::move(x));
    vals.push_back(f->right_state);
  }
  return Profile<S>(std::move(br), std::move(vals));
}

Profile<double> sample_initial_data(const std::function<double(double)>& generator,
                                    Window<double> support, int n_cells) {
  if (n_cells < 1) throw std::invalid_argument("sample_initial_data: n_cells must be >= 1");
  if (!(support.lo < support.hi)) throw std::invalid_argument("sample_initial_data: empty support");
  const double dx = (support.hi - support.lo) / n_cells;
  std::vector<double> br;
  std::vector<double> vals;
  vals.push_back(generator(support.lo));
  for (int i = 0; i < n_cells; ++i) {
    br.push_back(support.lo + dx * i);
    vals.push_back(generator(support.lo + dx * (i + 0.5)));
  }
  br.push_back(support.hi);
  vals.push_back(generator(support.hi));
  return Profile<double>(std::move(br), std::move(vals));
}

template std::vector<RiemannWave<double>> solve_riemann(const FluxModel<double>&, const double&,
                                                        const double&, const double&);
template std::vector<RiemannWave<Rational>> solve_riemann(const FluxModel<Rational>&,
                                                          const Rational&, const Rational&,
                                                          const Rational&);
template class FrontTrackingRun<double>;
template class FrontTrackingRun<Rational>;

}  // namespace wft
