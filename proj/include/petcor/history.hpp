#pragma once

#include <deque>

namespace petcor {

/// Time-stamped ring buffer of applied controls. This is the substrate of both
/// the physical input delay and the prediction integral: the distributed input
/// at position x is the stored control at time t + (x-1) * delay.
///
/// Query semantics:
///  - t < 0 returns 0 (controls before the run start are zero by convention),
///  - between samples: linear interpolation, exact at sample points,
///  - up to `end_hold` past the newest sample: the newest value is held
///    (the predictor's x = 1 stage queries the current instant, whose sample
///    is the control being computed),
///  - anything else (gap older than the window, or further in the future)
///    is a SimulationFault.
class InputHistory {
public:
    explicit InputHistory(double window, double end_hold = 0.0);

    /// Appends (t, u); timestamps must be strictly increasing. Samples older
    /// than the retention window are dropped.
    void append(double t, double u);

    double value_at(double t) const;

    double window() const { return window_; }
    bool empty() const { return samples_.empty(); }
    double newest_time() const;

private:
    struct Sample {
        double t;
        double u;
    };

    std::deque<Sample> samples_;
    double window_;
    double end_hold_;
};

}  // namespace petcor
