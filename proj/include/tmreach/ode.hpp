#ifndef TMREACH_ODE_HPP
#define TMREACH_ODE_HPP

#include <cstddef>
#include <string>
#include <vector>

#include <tmreach/expression.hpp>
#include <tmreach/taylor_model.hpp>

namespace tmreach
{

// x' = f(x, u). Right-hand sides read the state variables first, then the
// control variables, in declaration order.
struct OdeSystem {
    std::vector<std::string> state_vars;
    std::vector<std::string> control_vars;
    std::vector<Expr> rhs;

    std::size_t dim() const noexcept { return state_vars.size(); }
    std::vector<std::string> all_vars() const;
    void validate() const;
};

// Builds the right-hand sides from expression strings.
OdeSystem make_ode(std::vector<std::string> state_vars, std::vector<std::string> control_vars,
                   const std::vector<std::string> &rhs);

// Domain used by flowpipes: `symbols` normalized initial-state variables on
// [-1, 1] followed by the local time tau on [0, delta].
Box flow_domain(std::size_t symbols, double delta);
// Index of tau in a flow domain.
inline std::size_t time_var(const Box &domain) { return domain.size() - 1; }

struct Flowpipe {
    TMVector tms;
    double t_begin = 0;
    double t_end = 0;
    // Control step the slice belongs to, and its position inside that step.
    std::size_t step_index = 0;
    std::size_t slice_index = 0;
};

struct OdeSettings {
    unsigned order = 4;
    unsigned max_retries = 30;
    double widening = 2.0;
    // Extra Picard applications once a remainder has been accepted.
    unsigned refinements = 4;
};

// One application of the Picard operator to p + I:
// x_init + integral_0^tau f(p + I, u).
TMVector picard(const OdeSystem &sys, const TMVector &x_init, const TMVector &u, const TMVector &candidate);

// True when the Picard operator maps p + I into itself.
bool picard_self_maps(const OdeSystem &sys, const TMVector &x_init, const TMVector &u,
                      const std::vector<SparsePolynomial> &p, const std::vector<Interval> &remainder);

// Flowpipe over tau in [0, delta]; the domain's last component must be
// [0, delta]. t_begin and indices are left for the caller.
Flowpipe flowpipe_step(const OdeSystem &sys, const TMVector &x_init, const TMVector &u, double delta,
                       const OdeSettings &settings = {});

struct SegmentChain {
    std::vector<Flowpipe> pipes;
    TMVector end;
};

// Covers [0, delta_c] with delta_c / delta consecutive flowpipes starting at
// absolute time t0.
SegmentChain flowpipe_segment_chain(const OdeSystem &sys, const TMVector &x_init, const TMVector &u,
                                    double delta_c, double delta, const OdeSettings &settings = {},
                                    double t0 = 0, std::size_t step_index = 0);

// Number of integration slices per control step; ConfigError unless delta
// divides delta_c.
std::size_t slices_per_step(double delta_c, double delta);

} // namespace tmreach

#endif
