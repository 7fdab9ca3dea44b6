#include <tmreach/simulation.hpp>

#include <algorithm>
#include <cmath>
#include <ostream>

#include <tmreach/format.hpp>

namespace tmreach
{

std::vector<double> ode_rhs(const OdeSystem &sys, std::span<const double> x, std::span<const double> u)
{
    std::vector<double> vars(x.begin(), x.end());
    vars.insert(vars.end(), u.begin(), u.end());
    std::vector<double> out(sys.dim());
    for (std::size_t i = 0; i < sys.dim(); ++i) {
        out[i] = evaluate<double>(sys.rhs[i], std::span<const double>(vars), 0.0);
    }
    return out;
}

std::vector<double> rk4_step(const OdeSystem &sys, std::span<const double> x, std::span<const double> u,
                             double h)
{
    const std::size_t n = x.size();
    auto shifted = [&](const std::vector<double> &k, double s) {
        std::vector<double> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            y[i] = x[i] + s * k[i];
        }
        return y;
    };
    const auto k1 = ode_rhs(sys, x, u);
    const auto k2 = ode_rhs(sys, shifted(k1, h / 2), u);
    const auto k3 = ode_rhs(sys, shifted(k2, h / 2), u);
    const auto k4 = ode_rhs(sys, shifted(k3, h), u);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = x[i] + h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    }
    return y;
}

void rk4_segment(const OdeSystem &sys, std::vector<double> &x, std::span<const double> u, double t0,
                 double duration, double h, Trace &trace)
{
    const auto steps = static_cast<std::size_t>(std::llround(duration / h));
    const double hh = duration / double(steps);
    for (std::size_t s = 1; s <= steps; ++s) {
        x = rk4_step(sys, x, u, hh);
        trace.points.push_back({t0 + double(s) * hh, x});
    }
}

Trace simulate(const NNCSModel &model, std::span<const double> x0, double h)
{
    const std::size_t per_step = slices_per_step(model.control_step, h);
    Trace trace;
    trace.step = h;
    std::vector<double> x(x0.begin(), x0.end());
    trace.points.push_back({0.0, x});
    for (std::size_t i = 0; i < model.steps; ++i) {
        const std::vector<double> u = control_input(model, x);
        const double t0 = double(i) * model.control_step;
        for (std::size_t s = 1; s <= per_step; ++s) {
            x = rk4_step(model.plant, x, u, h);
            trace.points.push_back({t0 + double(s) * h, x});
        }
    }
    return trace;
}

ContainmentReport containment_check(const Trace &trace, const std::vector<Flowpipe> &pipes,
                                    std::span<const double> preimage, double tolerance, std::size_t stride)
{
    ContainmentReport report;
    if (pipes.empty()) {
        return report;
    }
    std::vector<double> pt(preimage.begin(), preimage.end());
    pt.push_back(0);
    const double slack = 1e-9 * (1 + std::fabs(pipes.back().t_end));
    for (std::size_t k = 0; k < trace.points.size(); k += std::max<std::size_t>(stride, 1)) {
        const auto &tp = trace.points[k];
        auto it = std::lower_bound(pipes.begin(), pipes.end(), tp.t - slack,
                                   [](const Flowpipe &f, double t) { return f.t_end < t; });
        for (; it != pipes.end() && it->t_begin <= tp.t + slack; ++it) {
            const Box &dom = *it->tms.domain();
            pt.back() = std::clamp(tp.t - it->t_begin, 0.0, dom[time_var(dom)].hi());
            ++report.checked;
            for (std::size_t d = 0; d < it->tms.size() && d < tp.x.size(); ++d) {
                const Interval e = it->tms[d].evaluate(pt);
                if (tp.x[d] < e.lo() - tolerance || tp.x[d] > e.hi() + tolerance) {
                    report.violations.push_back({k, std::size_t(it - pipes.begin()), d, tp.x[d], e});
                }
            }
        }
    }
    return report;
}

void write_trace_csv(std::ostream &out, const Trace &trace)
{
    for (const auto &p : trace.points) {
        out << format_double(p.t);
        for (double v : p.x) {
            out << ", " << format_double(v);
        }
        out << '\n';
    }
}

} // namespace tmreach
