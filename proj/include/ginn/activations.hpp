#pragma once

#include <span>
#include <string>

#include "ginn/errors.hpp"

namespace ginn {

enum class Activation { identity, relu, tanh, sigmoid };

/// σ(z) for a single value. The sigmoid uses the branch form that never
/// exponentiates a positive argument.
double apply_activation(Activation kind, double z);

/// σ'(z); relu'(0) is defined as 0.
double activation_derivative(Activation kind, double z);

/// Elementwise in-place versions.
void apply_activation(Activation kind, std::span<double> z);
void activation_derivative(Activation kind, std::span<double> z);

std::string to_string(Activation kind);
Activation activation_from_string(const std::string& name);

} // namespace ginn
