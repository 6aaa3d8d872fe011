#include "ginn/activations.hpp"

#include <cmath>

namespace ginn {

namespace {

double sigmoid(double z) {
    if (z >= 0.0)
        return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

} // namespace

double apply_activation(Activation kind, double z) {
    switch (kind) {
    case Activation::identity: return z;
    case Activation::relu: return z > 0.0 ? z : 0.0;
    case Activation::tanh: return std::tanh(z);
    case Activation::sigmoid: return sigmoid(z);
    }
    throw InvalidValue("unknown activation kind");
}

double activation_derivative(Activation kind, double z) {
    switch (kind) {
    case Activation::identity: return 1.0;
    case Activation::relu: return z > 0.0 ? 1.0 : 0.0;
    case Activation::tanh: {
        const double t = std::tanh(z);
        return 1.0 - t * t;
    }
    case Activation::sigmoid: {
        const double s = sigmoid(z);
        return s * (1.0 - s);
    }
    }
    throw InvalidValue("unknown activation kind");
}

void apply_activation(Activation kind, std::span<double> z) {
    for (double& v : z) v = apply_activation(kind, v);
}

void activation_derivative(Activation kind, std::span<double> z) {
    for (double& v : z) v = activation_derivative(kind, v);
}

std::string to_string(Activation kind) {
    switch (kind) {
    case Activation::identity: return "identity";
    case Activation::relu: return "relu";
    case Activation::tanh: return "tanh";
    case Activation::sigmoid: return "sigmoid";
    }
    return "unknown";
}

Activation activation_from_string(const std::string& name) {
    if (name == "identity") return Activation::identity;
    if (name == "relu") return Activation::relu;
    if (name == "tanh") return Activation::tanh;
    if (name == "sigmoid") return Activation::sigmoid;
    throw InvalidValue("unknown activation \"" + name + "\"");
}

} // namespace ginn
