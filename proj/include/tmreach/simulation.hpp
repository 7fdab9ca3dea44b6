#ifndef TMREACH_SIMULATION_HPP
#define TMREACH_SIMULATION_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include <tmreach/model.hpp>
#include <tmreach/ode.hpp>

namespace tmreach
{

std::vector<double> ode_rhs(const OdeSystem &sys, std::span<const double> x, std::span<const double> u);

// One classic fourth-order Runge-Kutta step with the control held fixed.
std::vector<double> rk4_step(const OdeSystem &sys, std::span<const double> x, std::span<const double> u,
                             double h);

struct TracePoint {
    double t;
    std::vector<double> x;
};

struct Trace {
    std::vector<TracePoint> points;
    std::uint64_t seed = 0;
    double step = 0;
};

// Appends RK4 samples over [t0, t0 + duration] (the first point excluded)
// with steps of h.
void rk4_segment(const OdeSystem &sys, std::vector<double> &x, std::span<const double> u, double t0,
                 double duration, double h, Trace &trace);

// Closed loop from x0 over model.steps control steps: the control is
// recomputed at every multiple of the control step, RK4 with step h in
// between (h must divide the control step). The first point is (0, x0).
Trace simulate(const NNCSModel &model, std::span<const double> x0, double h);

struct ContainmentViolation {
    std::size_t point;
    std::size_t pipe;
    std::size_t dim;
    double value;
    Interval enclosure;
};

struct ContainmentReport {
    std::size_t checked = 0;
    std::vector<ContainmentViolation> violations;
    bool ok() const noexcept { return violations.empty(); }
};

// Checks every stride-th trace point against each flowpipe active at its
// time, evaluated at (preimage, t - t_begin). Pipes must be sorted by time.
ContainmentReport containment_check(const Trace &trace, const std::vector<Flowpipe> &pipes,
                                    std::span<const double> preimage, double tolerance = 1e-6,
                                    std::size_t stride = 1);

// "t, x1, ..., xn" lines.
void write_trace_csv(std::ostream &out, const Trace &trace);

} // namespace tmreach

#endif
