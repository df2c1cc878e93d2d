#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace cholera::numerics {

enum class QuadratureRule { Trapezoid, Simpson };

struct QuadratureSpec {
    QuadratureRule rule = QuadratureRule::Simpson;
    std::size_t panels = 64;  // Simpson needs an even count

    void validate() const;
};

/// Composite rule approximation of the integral of f over [a, b], a <= b.
/// a == b gives exactly 0. Throws NumericalError if f returns a non-finite
/// value and ValidationError for a > b or an invalid spec.
double quadrature(const std::function<double(double)>& f, double a, double b,
                  const QuadratureSpec& spec);

/// Trapezoid sum of uniformly spaced samples.
double trapezoid(std::span<const double> samples, double h);

/// Running trapezoid integral: out[k] = integral of the samples over [0, k*h].
std::vector<double> cumulative_trapezoid(std::span<const double> samples, double h);

/// Node positions and weights of the composite rule on [a, b].
struct QuadratureNodes {
    std::vector<double> x;
    std::vector<double> w;
};
QuadratureNodes quadrature_nodes(double a, double b, const QuadratureSpec& spec);

}  // namespace cholera::numerics
