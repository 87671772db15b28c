// Evolves a Gaussian under the free Schroedinger flow on a 2-D torus and
// prints the sup norm and a mixed norm along the way; then fits the decay of
// the band-0 half-wave kernel on a short t-range.

#include <iostream>

#include "displab/kernel.hpp"
#include "displab/norms.hpp"
#include "displab/synth.hpp"

using namespace displab;

int main() {
  const TorusGrid g = TorusGrid::isotropic(2, 1, 24.0, 128);
  const Field f = gaussian_field(g, 1.0);
  std::cout << "free dispersion of a gaussian (sup and L^4_x L^2_y):\n";
  for (double t : {0.0, 0.25, 0.5, 1.0, 2.0}) {
    const Field u = propagate(f, t, 2);
    std::cout << "  t=" << t << "  sup=" <<
        mixed_space_norm(u, Rational::infinity(), Rational::infinity())
              << "  mixed=" << mixed_space_norm(u, Rational(4), Rational(2))
              << "  l2=" << l2_norm(u) << "\n";
  }

  std::cout << "half-wave kernel decay in the plane:\n";
  const SpectralCutoff cut = build_cutoff();
  const auto rep = decay_fit(1, 2, 1, KernelNormMode::sup_xy,
                             log_spaced(10.0, 60.0, 8), cut, 128,
                             RefinementCheck::none);
  std::cout << "  fitted slope " << rep.fitted_slope << " (predicted "
            << -rep.predicted_beta << "), residual " << rep.residual << "\n";
  return 0;
}
