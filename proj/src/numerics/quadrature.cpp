#include "cholera/numerics/quadrature.hpp"

#include "cholera/numerics/errors.hpp"

#include <cmath>

namespace cholera::numerics {

void QuadratureSpec::validate() const {
    if (panels < 1) throw ValidationError("quadrature.panels", "must be at least 1");
    if (rule == QuadratureRule::Simpson && panels % 2 != 0)
        throw ValidationError("quadrature.panels", "Simpson rule needs an even panel count");
}

QuadratureNodes quadrature_nodes(double a, double b, const QuadratureSpec& spec) {
    spec.validate();
    if (a > b) throw ValidationError("quadrature.interval", "lower limit exceeds upper limit");
    const std::size_t n = spec.panels;
    const double h = (b - a) / static_cast<double>(n);
    QuadratureNodes nodes;
    nodes.x.resize(n + 1);
    nodes.w.resize(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        nodes.x[i] = i == n ? b : a + h * static_cast<double>(i);
        if (spec.rule == QuadratureRule::Trapezoid) {
            nodes.w[i] = (i == 0 || i == n) ? 0.5 * h : h;
        } else {
            nodes.w[i] = (i == 0 || i == n) ? h / 3.0 : (i % 2 == 1 ? 4.0 * h / 3.0 : 2.0 * h / 3.0);
        }
    }
    return nodes;
}

double quadrature(const std::function<double(double)>& f, double a, double b,
                  const QuadratureSpec& spec) {
    spec.validate();
    if (a > b) throw ValidationError("quadrature.interval", "lower limit exceeds upper limit");
    if (a == b) return 0.0;

    const std::size_t n = spec.panels;
    const double h = (b - a) / static_cast<double>(n);
    auto eval = [&](double x) {
        const double v = f(x);
        if (!std::isfinite(v))
            throw NumericalError("quadrature: non-finite integrand at x=" + std::to_string(x));
        return v;
    };

    const double ends = eval(a) + eval(b);
    if (spec.rule == QuadratureRule::Trapezoid) {
        double inner = 0.0;
        for (std::size_t i = 1; i < n; ++i) inner += eval(a + h * static_cast<double>(i));
        return h * (0.5 * ends + inner);
    }
    double odd = 0.0, even = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        const double v = eval(a + h * static_cast<double>(i));
        (i % 2 == 1 ? odd : even) += v;
    }
    return (h / 3.0) * (ends + 4.0 * odd + 2.0 * even);
}

double trapezoid(std::span<const double> samples, double h) {
    if (samples.size() < 2) return 0.0;
    double sum = 0.5 * (samples.front() + samples.back());
    for (std::size_t i = 1; i + 1 < samples.size(); ++i) sum += samples[i];
    return h * sum;
}

std::vector<double> cumulative_trapezoid(std::span<const double> samples, double h) {
    std::vector<double> out(samples.size(), 0.0);
    for (std::size_t i = 1; i < samples.size(); ++i)
        out[i] = out[i - 1] + 0.5 * h * (samples[i - 1] + samples[i]);
    return out;
}

}  // namespace cholera::numerics
