#include "petcor/history.hpp"

#include <algorithm>
#include <cmath>

#include "petcor/errors.hpp"

namespace petcor {

InputHistory::InputHistory(double window, double end_hold)
    : window_(window), end_hold_(end_hold) {
    if (window <= 0.0) {
        throw ContractViolation("history: window must be positive");
    }
}

void InputHistory::append(double t, double u) {
    if (!std::isfinite(t) || !std::isfinite(u)) {
        throw ContractViolation("history: non-finite sample");
    }
    if (!samples_.empty() && t <= samples_.back().t) {
        throw ContractViolation("history: timestamps must be strictly increasing");
    }
    samples_.push_back({t, u});
    // Keep one sample at or before t - window so interpolation at the window
    // edge stays defined.
    const double cutoff = t - window_;
    while (samples_.size() >= 2 && samples_[1].t <= cutoff) {
        samples_.pop_front();
    }
}

double InputHistory::newest_time() const {
    if (samples_.empty()) {
        throw ContractViolation("history: empty");
    }
    return samples_.back().t;
}

double InputHistory::value_at(double t) const {
    if (t < 0.0) return 0.0;
    if (samples_.empty()) {
        if (t == 0.0) return 0.0;  // nothing applied yet at the very first instant
        throw SimulationFault("history: query on empty buffer", t);
    }
    const Sample& first = samples_.front();
    const Sample& last = samples_.back();
    if (t > last.t) {
        // Tolerance absorbs the ulp drift between k*h and accumulated sums.
        if (t <= last.t + end_hold_ + 1e-9 * std::max(1.0, std::abs(t))) return last.u;
        throw SimulationFault("history: query past newest sample", t);
    }
    if (t < first.t) {
        throw SimulationFault("history: query older than retained window", t);
    }

    auto it = std::lower_bound(samples_.begin(), samples_.end(), t,
                               [](const Sample& s, double value) { return s.t < value; });
    if (it->t == t) return it->u;
    const Sample& hi = *it;
    const Sample& lo = *(it - 1);
    const double w = (t - lo.t) / (hi.t - lo.t);
    return lo.u + w * (hi.u - lo.u);
}

}  // namespace petcor
