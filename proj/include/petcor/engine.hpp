#pragma once

#include <array>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "petcor/exosystem.hpp"
#include "petcor/history.hpp"
#include "petcor/observer.hpp"
#include "petcor/petfilter.hpp"
#include "petcor/plant.hpp"
#include "petcor/predictor.hpp"
#include "petcor/topology.hpp"

namespace petcor {

struct DiagnosticsOptions {
    bool enabled = false;
    std::array<double, 4> lambda = {1.0, 0.1, 0.1, 0.1};          // weights of the four energy terms
    std::array<double, 5> lambda_cal = {1.0, 0.1, 0.1, 0.1, 0.1}; // weights of the five sampled-data terms
};

/// Fully deterministic closed-loop description: leader, graph, plants,
/// controllers, observer triggering, and (optionally, enabling the
/// sensor-side PETM) per-follower filter parameters.
struct Scenario {
    Exosystem exo;
    CommGraph graph;
    std::vector<FollowerPlant> plants;
    std::vector<ControllerConfig> controllers;
    ObserverParams observer;
    std::optional<std::vector<FilterParams>> filters;
    double t_end = 0.0;
    double h = 1e-3;  // master step, must divide every sampling period
    DiagnosticsOptions diagnostics;
    // Start every observer at the true leader data instead of zero; the
    // estimates then form a fixed point of the consensus dynamics.
    bool exact_observer_init = false;
    std::vector<std::string> warnings;

    /// Checks every structural invariant (dimensions, spanning tree, grid
    /// divisibility, gain admissibility, causal delays) and collects
    /// non-fatal warnings (marginal stability, kappa*T vs the sampling
    /// bound, unclaimed Lipschitz constants).
    void validate();

    int followers() const { return graph.followers; }
};

struct NetEvent {
    double t = 0.0;
    int sender = 0;
    int receiver = 0;
    char kind = 'S';  // which condition fired; both snapshots travel either way
    double deviation = 0.0;
    double threshold = 0.0;
};

struct SensorEvent {
    double t = 0.0;
    int agent = 0;
    double phi = 0.0;
    double deviation = 0.0;
    double threshold = 0.0;
};

struct PairStats {
    long samples = 0;       // trigger evaluations (grid instants after t=0)
    long transmissions = 0; // events that actually fired
};

struct AgentDiagSeries {
    std::vector<double> v_parts;    // 5 per row: V1..V4, weighted total
    std::vector<double> calv_parts; // 6 per row: cV1..cV5, weighted total (zeros while the window fills)
    std::vector<double> w_boundary; // transport-boundary value w(1, t)
};

/// Time-indexed record of one run. All series share the master grid; events
/// carry their own timestamps, which lie on the declared sampling grids.
struct SimTrace {
    int n_agents = 0;
    int exo_dim = 0;
    std::vector<int> orders;

    std::vector<double> t;
    std::vector<double> v_leader;  // exo_dim entries per row
    std::vector<double> y0;

    // Per agent, row-major per master step.
    std::vector<std::vector<double>> x;      // order entries per row
    std::vector<std::vector<double>> x_hat;  // order entries per row (estimate fed to the controller)
    std::vector<std::vector<double>> u;
    std::vector<std::vector<double>> e;
    std::vector<std::vector<double>> phi;
    std::vector<std::vector<double>> v_hat;  // exo_dim entries per row
    std::vector<std::vector<double>> s_hat;  // exo_dim^2 entries per row

    std::vector<NetEvent> net_events;
    std::vector<SensorEvent> sensor_events;
    std::map<std::pair<int, int>, PairStats> pair_stats;
    std::vector<long> sensor_samples;
    std::vector<long> sensor_transmissions;

    bool has_diagnostics = false;
    std::vector<AgentDiagSeries> diag;

    std::size_t rows() const { return t.size(); }
};

/// Deterministic fixed-step closed-loop integrator and event scheduler.
/// Each master step runs, in order: pair triggers at their sampling instants,
/// sensor sampling and triggers, controller evaluation (prediction + output,
/// appended to the input history), trace recording, then one 4-stage
/// integration of all continuous states over [t, t+h] with held quantities
/// frozen and delayed inputs interpolated from history.
class Engine {
public:
    explicit Engine(Scenario scenario);

    void step();
    void run_to_end();
    SimTrace take_trace() { return std::move(trace_); }

    double time() const { return static_cast<double>(tick_) * scenario_.h; }
    long tick() const { return tick_; }
    long total_steps() const { return n_steps_; }

    const Scenario& scenario() const { return scenario_; }
    const Vector& plant_state(int agent) const { return agents_.at(agent).x; }
    const ObserverState& observer_state(int agent) const { return agents_.at(agent).obs; }
    const InputHistory& history(int agent) const { return agents_.at(agent).hist; }
    const FilterState& filter_state(int agent) const { return agents_.at(agent).filter; }
    const BroadcastRecord& record(int receiver, int sender) const {
        return records_.at({receiver, sender});
    }
    const Matrix& last_prediction(int agent) const { return agents_.at(agent).last_chi; }

private:
    struct AgentRuntime {
        Vector x;
        ObserverState obs;
        InputHistory hist;
        FilterState filter;
        Matrix last_chi;
        Vector last_x_hat;
        double last_u = 0.0;
        std::vector<std::pair<int, double>> neighbors;  // (sender, weight)
        // Stored right-hand sides feeding the sampled-data energy monitors.
        std::deque<std::pair<double, double>> dxt_hist;
        std::deque<std::pair<double, double>> dxh_hist;
    };

    void process_pair_triggers(double t);
    void process_sensor_sampling(double t);
    void evaluate_controllers(double t);
    void record_row(double t);
    void record_diagnostics(double t, const Vector& v_true);
    void integrate(double t);
    Vector direct_state_estimate(int agent, double t) const;

    Scenario scenario_;
    std::vector<AgentRuntime> agents_;
    std::map<std::pair<int, int>, BroadcastRecord> records_;
    std::map<std::pair<int, int>, long> pair_ticks_;
    std::vector<long> filter_ticks_;
    long tick_ = 0;
    long n_steps_ = 0;
    SimTrace trace_;
};

/// Runs the scenario to t_end and returns the trace. The scenario must have
/// been validated. Identical scenarios produce bit-identical traces.
SimTrace run(Scenario scenario);

}  // namespace petcor
