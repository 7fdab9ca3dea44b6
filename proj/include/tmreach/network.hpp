#ifndef TMREACH_NETWORK_HPP
#define TMREACH_NETWORK_HPP

#include <vector>

#include <Eigen/Dense>

#include <tmreach/activation.hpp>

namespace tmreach
{

struct Layer {
    Eigen::MatrixXd weights;
    Eigen::VectorXd bias;
    ActivationKind activation = ActivationKind::affine;
};

// Feed-forward network: hidden layers followed by the output layer.
class NeuralNetwork
{
public:
    NeuralNetwork() = default;
    // ShapeError unless consecutive layers chain and biases match.
    explicit NeuralNetwork(std::vector<Layer> layers);

    std::size_t input_dim() const;
    std::size_t output_dim() const;
    std::size_t hidden_count() const { return layers_.empty() ? 0 : layers_.size() - 1; }
    const std::vector<Layer> &layers() const noexcept { return layers_; }

    Eigen::VectorXd forward(const Eigen::VectorXd &x) const;

private:
    std::vector<Layer> layers_;
};

} // namespace tmreach

#endif
