#pragma once

#include <span>
#include <string>
#include <vector>

#include "mfmig/rng.hpp"

namespace mfmig {

// Prior family for the unnormalized weights S_m.  The scale of the inverse
// Gaussian and the rate of the gamma are fixed at 1; normalization makes a
// free scale unidentifiable.  Dynamic families divide the shape by the
// current number of components M.
enum class WeightFamily { IGauStatic, GammaStatic, IGauDynamic, GammaDynamic };

WeightFamily weight_family_from_string(const std::string& name);
std::string to_string(WeightFamily family);

class WeightModel {
 public:
  WeightModel(WeightFamily family, double shape);

  WeightFamily family() const { return family_; }
  bool is_dynamic() const {
    return family_ == WeightFamily::IGauDynamic ||
           family_ == WeightFamily::GammaDynamic;
  }
  bool is_igau() const {
    return family_ == WeightFamily::IGauStatic ||
           family_ == WeightFamily::IGauDynamic;
  }
  double shape() const { return shape_; }
  // a copy with a different shape; used by the shape-learning MH step
  WeightModel with_shape(double shape) const {
    return WeightModel(family_, shape);
  }

  // log h(s); m is the current number of components (dynamic families only
  // read it).
  double log_density(double s, int m = 1) const;
  // log psi(u), psi the Laplace transform of h
  double log_psi(double u, int m = 1) const;
  // log kappa(u; n) with kappa(u;n) = (-1)^n d^n/du^n psi(u)
  double log_kappa(double u, int n, int m = 1) const;

  // draw from the allocated-weight full conditional
  // e^{-s u} s^{n_m} h(s) (normalized)
  double sample_allocated(RngStream& rng, double u, int n_m, int m = 1) const;
  // draw from the unallocated-weight full conditional e^{-s u} h(s)
  double sample_unallocated(RngStream& rng, double u, int m = 1) const;

 private:
  double effective_shape(int m) const;

  WeightFamily family_;
  double shape_;
};

// log density of the normalized inverse Gaussian distribution on the
// d-simplex (d = alpha.size() >= 2) at an interior point pi.  Validation
// utility; the samplers never evaluate it.
double log_nigau_density(std::span<const double> alpha,
                         std::span<const double> pi);

// Unnormalized weights of one chain state.
struct UnnormalizedWeights {
  std::vector<double> S;
  double total() const;
};

}  // namespace mfmig
