#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <memory>
#include <vector>

#include "lswspec/autocorr.hpp"
#include "lswspec/spectrum.hpp"

namespace lswspec {

//! Largest T for which dense T x T matrices may be materialized.
inline constexpr long kDenseTLimit = 4096;

//! c_X(z, tau) = sum_j S_j(z) Psi_j(tau) over the spec's scales.
double local_autocovariance(const SpectrumSpec& spec,
                            const AutocorrSystem& system, double z, long tau);

//! Exact covariance matrix of the length-T process generated by `spec`:
//! sigma_{s,t} = sum_{j,k} S_j(k/T) psi_{jk}(s) psi_{jk}(t), k = 0..T-1.
//! Scales deeper than floor(log2 T) are dropped, mirroring simulate().
Eigen::MatrixXd covariance_matrix(const SpectrumSpec& spec, long T);

//! A simulated path together with everything needed to regenerate it.
struct SeriesSample {
  std::vector<double> values;
  long T = 0;
  std::uint64_t seed = 0;
  std::shared_ptr<const SpectrumSpec> spec;
};

//! Draws X_t = sum_{j,k} sqrt(S_j(k/T)) psi_{jk}(t) xi_{jk} with xi from a
//! counter-based stream keyed by (seed, j, k); bit-reproducible for fixed
//! inputs and independent of scale iteration order.
SeriesSample simulate(std::shared_ptr<const SpectrumSpec> spec, long T,
                      std::uint64_t seed);

//! Deepest scale used when simulating length-T data from this spec.
int simulation_scale_count(const SpectrumSpec& spec, long T);

//! floor(log2 T).
int max_scale_count(long T);

} // namespace lswspec
