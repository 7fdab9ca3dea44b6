#include <tmreach/network.hpp>

#include <string>

#include <tmreach/error.hpp>

namespace tmreach
{

NeuralNetwork::NeuralNetwork(std::vector<Layer> layers) : layers_(std::move(layers))
{
    if (layers_.empty()) {
        throw ShapeError("network needs at least an output layer");
    }
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        const Layer &layer = layers_[l];
        if (layer.weights.rows() != layer.bias.size()) {
            throw ShapeError("layer " + std::to_string(l) + ": bias length differs from neuron count");
        }
        if (layer.weights.rows() == 0 || layer.weights.cols() == 0) {
            throw ShapeError("layer " + std::to_string(l) + ": empty weight matrix");
        }
        if (l > 0 && layer.weights.cols() != layers_[l - 1].weights.rows()) {
            throw ShapeError("layer " + std::to_string(l) + ": input width differs from previous layer output");
        }
    }
}

std::size_t NeuralNetwork::input_dim() const
{
    return layers_.empty() ? 0 : std::size_t(layers_.front().weights.cols());
}

std::size_t NeuralNetwork::output_dim() const
{
    return layers_.empty() ? 0 : std::size_t(layers_.back().weights.rows());
}

Eigen::VectorXd NeuralNetwork::forward(const Eigen::VectorXd &x) const
{
    if (std::size_t(x.size()) != input_dim()) {
        throw ShapeError("forward: input dimension mismatch");
    }
    Eigen::VectorXd v = x;
    for (const Layer &layer : layers_) {
        Eigen::VectorXd z = layer.weights * v + layer.bias;
        for (Eigen::Index i = 0; i < z.size(); ++i) {
            z(i) = activate(layer.activation, z(i));
        }
        v = std::move(z);
    }
    return v;
}

} // namespace tmreach
