#pragma once
// Implicit-midpoint integration of Hamilton's equations and drift reports.

#include "extham/phase.h"

#include <functional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace extham::dyn {

class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, int step) : std::runtime_error(what), step_(step) {}
    int step() const { return step_; }

private:
    int step_;
};

enum class Status { completed, domain_exit };
std::string status_name(Status s);

struct Trajectory {
    std::vector<double> times;
    std::vector<PhasePoint> states;
    double h = 0;
    std::string method = "implicit-midpoint";
    Status status = Status::completed;
    /// index of the step that left the domain (-1 when completed)
    int exit_step = -1;
    std::string exit_reason;
};

struct IntegratorOptions {
    double tol = 1e-13;
    int max_iterations = 50;
    /// states with radius(x) < min_radius end the run with a domain exit
    double min_radius = 0.05;
    /// no guard when empty
    std::function<double(const PhasePoint&)> radius;
};

/// z' = J grad H by the implicit midpoint rule, fixed-point iterated per step
Trajectory integrate(const PhaseFunction& H, const PhasePoint& x0, double h, int steps,
                     const IntegratorOptions& options = {});

/// max_t |f(x_t) - f(x_0)| / (1 + |f(x_0)|) for each f
std::vector<double> drift_report(const Trajectory& traj, const std::vector<PhaseFunction>& fs);

/// header t,q1,..,p1,.. then one row per state at full double precision
void write_csv(std::ostream& out, const Trajectory& traj);

}  // namespace extham::dyn
