#include <tmreach/ode.hpp>

#include <algorithm>
#include <cmath>

#include <tmreach/error.hpp>

namespace tmreach
{

std::vector<std::string> OdeSystem::all_vars() const
{
    std::vector<std::string> v = state_vars;
    v.insert(v.end(), control_vars.begin(), control_vars.end());
    return v;
}

void OdeSystem::validate() const
{
    if (rhs.size() != state_vars.size()) {
        throw ShapeError("ode: one right-hand side per state variable is required");
    }
    for (const auto &e : rhs) {
        if (!e.valid()) {
            throw ShapeError("ode: empty right-hand side");
        }
    }
}

OdeSystem make_ode(std::vector<std::string> state_vars, std::vector<std::string> control_vars,
                   const std::vector<std::string> &rhs)
{
    OdeSystem sys{std::move(state_vars), std::move(control_vars), {}};
    const auto names = sys.all_vars();
    for (const auto &text : rhs) {
        sys.rhs.push_back(parse_expression(text, names));
    }
    sys.validate();
    return sys;
}

Box flow_domain(std::size_t symbols, double delta)
{
    if (!(delta > 0)) {
        throw ConfigError("integration step must be positive");
    }
    std::vector<Interval> dims(symbols, Interval(-1, 1));
    dims.emplace_back(0.0, delta);
    return Box(std::move(dims));
}

std::size_t slices_per_step(double delta_c, double delta)
{
    if (!(delta > 0) || !(delta_c > 0)) {
        throw ConfigError("control and integration steps must be positive");
    }
    const double ratio = delta_c / delta;
    const double n = std::round(ratio);
    if (n < 1 || std::fabs(n * delta - delta_c) > 1e-9 * delta_c) {
        throw ConfigError("integration step must divide the control step");
    }
    return static_cast<std::size_t>(n);
}

namespace
{

// Candidates beyond this size are treated as divergence rather than pushed
// into overflow.
constexpr double kRemainderCap = 1e50;

TaylorModel at_order(const TaylorModel &t, unsigned order)
{
    if (t.order() > order) {
        return tm_truncate(t, order);
    }
    return TaylorModel(t.poly(), t.remainder(), t.domain(), order);
}

std::vector<TaylorModel> with_boxes(const std::vector<SparsePolynomial> &p, const std::vector<Interval> &rem,
                                    const DomainPtr &dom, unsigned order)
{
    std::vector<TaylorModel> out;
    for (std::size_t i = 0; i < p.size(); ++i) {
        out.emplace_back(p[i], rem[i], dom, order);
    }
    return out;
}

// Per-component enclosure of P(p + I) - p.
std::vector<Interval> picard_excess(const OdeSystem &sys, const TMVector &x_init, const TMVector &u,
                                    const std::vector<SparsePolynomial> &p, const std::vector<Interval> &rem)
{
    const TMVector next =
        picard(sys, x_init, u, TMVector(with_boxes(p, rem, x_init.domain(), x_init.order())));
    std::vector<Interval> out;
    for (std::size_t i = 0; i < p.size(); ++i) {
        SparsePolynomial diff = next[i].poly() - p[i];
        Interval d = next[i].remainder();
        if (!diff.is_zero()) {
            d = d + poly_range(diff, *x_init.domain());
        }
        out.push_back(d);
    }
    return out;
}

bool all_inside(const std::vector<Interval> &inner, const std::vector<Interval> &outer)
{
    for (std::size_t i = 0; i < inner.size(); ++i) {
        if (!outer[i].contains(inner[i])) {
            return false;
        }
    }
    return true;
}

Interval widen(const Interval &a, const Interval &b, double factor)
{
    const Interval h = hull(a, b);
    const double c = h.mid();
    double r = h.radius() * factor;
    r = std::max(r, 1e-15 * (1 + std::fabs(c)));
    return Interval(c - r, c + r);
}

void check_inputs(const OdeSystem &sys, const TMVector &x_init, const TMVector &u)
{
    sys.validate();
    if (x_init.size() != sys.dim()) {
        throw ShapeError("ode: initial TM dimension does not match the state");
    }
    if (u.size() != sys.control_vars.size()) {
        throw ShapeError("ode: control TM dimension does not match the controls");
    }
    if (!u.empty() && u.domain() != x_init.domain()) {
        throw ShapeError("ode: controls and state must share one domain");
    }
}

} // namespace

TMVector picard(const OdeSystem &sys, const TMVector &x_init, const TMVector &u, const TMVector &candidate)
{
    const std::size_t tau = time_var(*candidate.domain());
    std::vector<TaylorModel> vars(candidate.begin(), candidate.end());
    vars.insert(vars.end(), u.begin(), u.end());
    TMVector out;
    for (std::size_t i = 0; i < sys.dim(); ++i) {
        const TaylorModel f =
            evaluate<TaylorModel>(sys.rhs[i], std::span<const TaylorModel>(vars), candidate[0]);
        out.push_back(tm_add(x_init[i], tm_integrate(f, tau)));
    }
    return out;
}

bool picard_self_maps(const OdeSystem &sys, const TMVector &x_init, const TMVector &u,
                      const std::vector<SparsePolynomial> &p, const std::vector<Interval> &remainder)
{
    return all_inside(picard_excess(sys, x_init, u, p, remainder), remainder);
}

Flowpipe flowpipe_step(const OdeSystem &sys, const TMVector &x_init_in, const TMVector &u_in, double delta,
                       const OdeSettings &settings)
{
    check_inputs(sys, x_init_in, u_in);
    const DomainPtr &dom = x_init_in.domain();
    const Interval tdom = (*dom)[time_var(*dom)];
    if (tdom.lo() != 0 || tdom.hi() != delta) {
        throw ShapeError("flowpipe_step: the domain's time component must be [0, delta]");
    }
    const unsigned k = settings.order;
    TMVector x_init, u;
    for (const auto &t : x_init_in) {
        x_init.push_back(at_order(t, k));
    }
    for (const auto &t : u_in) {
        u.push_back(at_order(t, k));
    }
    const std::size_t n = sys.dim();

    // Polynomial part: k Picard iterations on the remainder-free initial polynomial.
    TMVector init_poly;
    for (const auto &t : x_init) {
        init_poly.push_back(TaylorModel(t.poly(), Interval(0), dom, k));
    }
    const std::vector<Interval> zeros(n, Interval(0));
    std::vector<SparsePolynomial> p;
    for (const auto &t : x_init) {
        p.push_back(t.poly());
    }
    for (unsigned it = 0; it < k; ++it) {
        const TMVector g = picard(sys, init_poly, u, TMVector(with_boxes(p, zeros, dom, k)));
        for (std::size_t i = 0; i < n; ++i) {
            p[i] = g[i].poly();
        }
    }

    std::vector<Interval> rem = picard_excess(sys, x_init, u, p, zeros);
    bool accepted = false;
    for (unsigned attempt = 0; attempt <= settings.max_retries; ++attempt) {
        const auto image = picard_excess(sys, x_init, u, p, rem);
        if (all_inside(image, rem)) {
            accepted = true;
            break;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (!rem[i].contains(image[i])) {
                rem[i] = widen(rem[i], image[i], settings.widening);
            }
            if (!(rem[i].radius() < kRemainderCap)) {
                break;
            }
        }
        if (std::any_of(rem.begin(), rem.end(), [](const Interval &r) { return !(r.radius() < kRemainderCap); })) {
            break;
        }
    }
    if (!accepted) {
        throw RemainderDivergence("no self-mapping remainder found; the step may be too large");
    }
    for (unsigned r = 0; r < settings.refinements; ++r) {
        const auto image = picard_excess(sys, x_init, u, p, rem);
        for (std::size_t i = 0; i < n; ++i) {
            rem[i] = intersect(rem[i], image[i]).value_or(image[i]);
        }
    }

    Flowpipe fp;
    fp.tms = TMVector(with_boxes(p, rem, dom, k));
    fp.t_begin = 0;
    fp.t_end = delta;
    return fp;
}

SegmentChain flowpipe_segment_chain(const OdeSystem &sys, const TMVector &x_init, const TMVector &u,
                                    double delta_c, double delta, const OdeSettings &settings, double t0,
                                    std::size_t step_index)
{
    const std::size_t slices = slices_per_step(delta_c, delta);
    SegmentChain chain;
    TMVector x = x_init;
    for (std::size_t j = 0; j < slices; ++j) {
        Flowpipe fp = flowpipe_step(sys, x, u, delta, settings);
        fp.t_begin = t0 + double(j) * delta;
        fp.t_end = t0 + double(j + 1) * delta;
        fp.step_index = step_index;
        fp.slice_index = j;
        const std::size_t tau = time_var(*fp.tms.domain());
        TMVector next;
        for (const auto &t : fp.tms) {
            next.push_back(tm_substitute(t, tau, delta));
        }
        x = std::move(next);
        chain.pipes.push_back(std::move(fp));
    }
    chain.end = std::move(x);
    return chain;
}

} // namespace tmreach
