#pragma once

#include <stdexcept>
#include <string>

namespace petcor {

/// Precondition breach by the caller (bad dimensions, out-of-order times, ...).
class ContractViolation : public std::logic_error {
public:
    explicit ContractViolation(const std::string& what) : std::logic_error(what) {}
};

/// Runtime failure inside a simulation (history gap, blow-up, structural problem).
/// Carries the simulation time and agent id when they are known; agent -1 means
/// the fault is not attributable to a single agent.
class SimulationFault : public std::runtime_error {
public:
    SimulationFault(const std::string& what, double t = -1.0, int agent = -1)
        : std::runtime_error(format(what, t, agent)), time(t), agent(agent) {}

    double time;
    int agent;

private:
    static std::string format(const std::string& what, double t, int agent) {
        std::string msg = what;
        if (t >= 0.0) msg += " (t=" + std::to_string(t) + ")";
        if (agent >= 0) msg += " (agent " + std::to_string(agent) + ")";
        return msg;
    }
};

/// A trigger or sampling query landed off its declared periodic grid.
class SchedulingFault : public SimulationFault {
public:
    using SimulationFault::SimulationFault;
};

/// Configuration file problem; `path` is the offending field, e.g. "plants[2].delay".
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& field_path, const std::string& what)
        : std::runtime_error(field_path + ": " + what), path(field_path) {}

    std::string path;
};

}  // namespace petcor
