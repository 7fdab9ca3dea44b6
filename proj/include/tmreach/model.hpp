#ifndef TMREACH_MODEL_HPP
#define TMREACH_MODEL_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <tmreach/activation.hpp>
#include <tmreach/expression.hpp>
#include <tmreach/network.hpp>
#include <tmreach/ode.hpp>

namespace tmreach
{

struct GuardedTransition {
    // Empty means true.
    std::vector<Constraint> guard;
    std::vector<Expr> transform;
};

// A pre- or postprocessing module. With no rules it is the identity.
struct GuardedModule {
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    std::vector<GuardedTransition> rules;

    std::size_t input_dim() const noexcept { return inputs.size(); }
    std::size_t output_dim() const noexcept { return outputs.size(); }
    bool identity() const noexcept { return rules.empty(); }
};

struct VerifierSettings {
    unsigned order = 4;
    // Integration step; 0 selects control_step / 4.
    double ode_step = 0;
    ActivationSettings activation;
    bool symbolic_remainder = true;
    unsigned threads = 1;
    unsigned falsify_trials = 100;
    std::uint64_t seed = 0;
    // RK4 steps per integration step in simulations.
    unsigned sim_substeps = 100;
};

struct NNCSModel {
    OdeSystem plant;
    GuardedModule pre;
    NeuralNetwork net;
    GuardedModule post;
    double control_step = 0;
    std::size_t steps = 0;
    Box initial;
    std::optional<std::vector<Constraint>> target;
    std::optional<std::vector<Constraint>> avoid;
    VerifierSettings settings;

    double ode_step() const { return settings.ode_step > 0 ? settings.ode_step : control_step / 4; }
    // ConfigError or ShapeError on inconsistent dimensions, steps or guards.
    void validate() const;
};

// Initial states are x_i = c_i + r_i * s_i with one symbol s_i in [-1, 1]
// per non-degenerate dimension of the initial box.
struct InitialSymbols {
    std::vector<double> center;
    std::vector<double> radius;
    // Symbol index per state dimension, or npos for point dimensions.
    std::vector<std::size_t> symbol;
    std::size_t count = 0;

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    explicit InitialSymbols(const Box &initial);
    TMVector tms(const DomainPtr &domain, unsigned order) const;
    // Symbol values of an initial point (its domain preimage).
    std::vector<double> preimage(std::span<const double> x0) const;
};

// Concrete evaluation of a module: the single rule whose guard holds.
// DomainError when no guard holds.
std::vector<double> apply_module(const GuardedModule &module, std::span<const double> x);

// Searches the box for a point satisfying two guards at once; validate()
// reports such a witness as a ConfigError.
std::optional<std::vector<double>> guard_overlap(const std::vector<Constraint> &a, const std::vector<Constraint> &b,
                                                 const Box &box);

// Concrete closed-loop control at a sampling instant.
std::vector<double> control_input(const NNCSModel &model, std::span<const double> x);

} // namespace tmreach

#endif
