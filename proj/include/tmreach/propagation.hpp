#ifndef TMREACH_PROPAGATION_HPP
#define TMREACH_PROPAGATION_HPP

#include <vector>

#include <Eigen/Dense>

#include <tmreach/activation.hpp>
#include <tmreach/network.hpp>
#include <tmreach/taylor_model.hpp>
#include <tmreach/thread_pool.hpp>

namespace tmreach
{

struct PropagationSettings {
    unsigned order = 4;
    ActivationSettings activation;
};

// Output of one neuron's activation over a pre-activation Taylor model z:
// sigma(z) in q z + residual, with `full` = q z + residual.
struct NeuronImage {
    double q = 0;
    TaylorModel residual;
    TaylorModel full;
};

// Picks the activation candidate whose split composition q z + p^R(z) has
// the narrower remainder; ties go to Bernstein.
NeuronImage neuron_image(ActivationKind kind, const TaylorModel &z, const PropagationSettings &settings);

// Layer by layer: affine map, then per-neuron activation Taylor models.
TMVector propagate_plain(const NeuralNetwork &net, const TMVector &input, const PropagationSettings &settings,
                         ThreadPool &pool);

// Remainder sources kept symbolically: each layer's fresh remainders with the
// product of the later linear maps that transports them to the current layer.
struct SymbolicRemainderState {
    struct Source {
        std::vector<Interval> box;
        Eigen::MatrixXd transport;
        // Entrywise bound on the rounding error of `transport`.
        Eigen::MatrixXd error;
    };
    std::vector<Source> sources;

    // Encloses sum_s transport_s * box_s for one output row.
    Interval image(Eigen::Index row) const;
};

TMVector propagate_symbolic(const NeuralNetwork &net, const TMVector &input, const PropagationSettings &settings,
                            ThreadPool &pool);

inline TMVector propagate(const NeuralNetwork &net, const TMVector &input, const PropagationSettings &settings,
                          ThreadPool &pool, bool symbolic)
{
    return symbolic ? propagate_symbolic(net, input, settings, pool) : propagate_plain(net, input, settings, pool);
}

} // namespace tmreach

#endif
