#pragma once

#include "cholera/between_host/model.hpp"

#include <functional>

namespace cholera::between_host {

/// Closed-form solution of the transport equation along characteristics.
///
/// With G(omega) = int_0^omega 1/g:
///   G(omega) > t:  I = phi(w_s) g(w_s)/g(omega) exp(-int_{w_s}^omega mu2/g),
///                  w_s = G^{-1}(G(omega) - t)
///   otherwise:     I = H(t - G(omega)) pi(omega)
/// where H(s) = g(0) I(s, 0) is the boundary flux history.
double characteristics_eval(double t, double omega, const Params& p,
                            const std::function<double(double)>& initial_density,
                            const std::function<double(double)>& boundary_history,
                            std::size_t panels = 64);

}  // namespace cholera::between_host
