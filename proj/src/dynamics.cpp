#include "extham/dynamics.h"

#include "extham/errors.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>

namespace extham::dyn {

std::string status_name(Status s) { return s == Status::completed ? "completed" : "domain-exit"; }

namespace {

// J grad H at z
std::vector<double> vector_field(const PhaseFunction& H, const std::vector<double>& z) {
    const auto g = H.gradient(PhasePoint::from_coordinates(z));
    const std::size_t d = z.size() / 2;
    std::vector<double> v(z.size());
    for (std::size_t i = 0; i < d; ++i) {
        v[i] = g[d + i];
        v[d + i] = -g[i];
    }
    return v;
}

double max_abs(const std::vector<double>& z) {
    double m = 0;
    for (double v : z) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace

Trajectory integrate(const PhaseFunction& H, const PhasePoint& x0, double h, int steps,
                     const IntegratorOptions& options) {
    if (!(h != 0.0) || !std::isfinite(h)) throw std::invalid_argument("integrate: step size must be finite and nonzero");
    if (steps < 0) throw std::invalid_argument("integrate: negative step count");
    auto radius = options.radius ? options.radius : [](const PhasePoint&) { return std::numeric_limits<double>::infinity(); };

    Trajectory tr;
    tr.h = h;
    tr.times.push_back(0.0);
    tr.states.push_back(x0);
    if (radius(x0) < options.min_radius) {
        tr.status = Status::domain_exit;
        tr.exit_step = 0;
        tr.exit_reason = "initial state below the radius guard";
        return tr;
    }
    std::vector<double> z = x0.coordinates();
    const std::size_t n = z.size();
    for (int step = 1; step <= steps; ++step) {
        try {
            auto f0 = vector_field(H, z);
            std::vector<double> next(n), mid(n);
            for (std::size_t i = 0; i < n; ++i) next[i] = z[i] + h * f0[i];
            bool converged = false;
            for (int it = 0; it < options.max_iterations; ++it) {
                for (std::size_t i = 0; i < n; ++i) mid[i] = 0.5 * (z[i] + next[i]);
                const auto f = vector_field(H, mid);
                double delta = 0;
                for (std::size_t i = 0; i < n; ++i) {
                    const double v = z[i] + h * f[i];
                    delta = std::max(delta, std::abs(v - next[i]));
                    next[i] = v;
                }
                if (radius(PhasePoint::from_coordinates(next)) < options.min_radius) break;
                if (delta <= options.tol * (1.0 + max_abs(next))) {
                    converged = true;
                    break;
                }
            }
            if (!converged && radius(PhasePoint::from_coordinates(next)) >= options.min_radius)
                throw ConvergenceError("implicit midpoint: fixed point did not converge at step " + std::to_string(step),
                                       step);
            const PhasePoint x = PhasePoint::from_coordinates(next);
            if (radius(x) < options.min_radius) {
                tr.status = Status::domain_exit;
                tr.exit_step = step;
                tr.exit_reason = "radius below " + std::to_string(options.min_radius);
                return tr;
            }
            z = std::move(next);
            tr.times.push_back(step * h);
            tr.states.push_back(x);
        } catch (const DomainError& e) {
            tr.status = Status::domain_exit;
            tr.exit_step = step;
            tr.exit_reason = e.what();
            return tr;
        } catch (const std::invalid_argument& e) {
            // non-finite iterate
            tr.status = Status::domain_exit;
            tr.exit_step = step;
            tr.exit_reason = e.what();
            return tr;
        }
    }
    return tr;
}

std::vector<double> drift_report(const Trajectory& traj, const std::vector<PhaseFunction>& fs) {
    std::vector<double> out;
    out.reserve(fs.size());
    for (const auto& f : fs) {
        const double f0 = f(traj.states.front());
        double worst = 0;
        for (const auto& x : traj.states) worst = std::max(worst, std::abs(f(x) - f0) / (1.0 + std::abs(f0)));
        out.push_back(worst);
    }
    return out;
}

void write_csv(std::ostream& out, const Trajectory& traj) {
    const int d = traj.states.empty() ? 0 : traj.states.front().dof();
    out << "t";
    for (int i = 1; i <= d; ++i) out << ",q" << i;
    for (int i = 1; i <= d; ++i) out << ",p" << i;
    out << '\n';
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
        out << traj.times[k];
        for (double v : traj.states[k].q) out << ',' << v;
        for (double v : traj.states[k].p) out << ',' << v;
        out << '\n';
    }
}

}  // namespace extham::dyn
