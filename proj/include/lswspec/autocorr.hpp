#pragma once

#include <Eigen/Dense>

#include <vector>

#include "lswspec/scales.hpp"

namespace lswspec {

//! Autocorrelation wavelets Psi_j(tau) = sum_k psi_{jk}(0) psi_{jk}(tau) for
//! all scales down to a configured depth. Tables are computed once by
//! discrete autocorrelation of the Haar taps and then shared read-only.
class AutocorrSystem {
public:
  explicit AutocorrSystem(int max_depth);

  int max_depth() const { return max_depth_; }

  //! Psi_j(tau); zero outside the support |tau| <= L_j - 1.
  double psi(ScaleIndex scale, long tau) const;

  //! Nonzero support half-width: Psi_j vanishes for |tau| >= L_j.
  long support_halfwidth(ScaleIndex scale) const
  {
    return scale.support_length() - 1;
  }

private:
  int max_depth_;
  // tables_[i-1][tau + L-1] = Psi_{-i}(tau), tau = -(L-1)..L-1
  std::vector<std::vector<double>> tables_;
};

//! One-off evaluation without a cached system (test oracle path).
double autocorrelation_wavelet(ScaleIndex scale, long tau);

//! Gram matrix A_{jl} = <Psi_j, Psi_l> for scales -1..-J together with its
//! numerically verified inverse.
struct GramMatrix {
  int scale_count = 0;
  Eigen::MatrixXd a;      // row/col = depth-1
  Eigen::MatrixXd a_inv;
  double condition_number = 0.0;
};

//! Builds A and solves for its inverse with partial pivoting. Fails with
//! NumericalError if the identity residual exceeds `residual_tol`.
GramMatrix gram_matrix(const AutocorrSystem& system, int scale_count,
                       double residual_tol = 1e-8);
GramMatrix gram_matrix(int scale_count, double residual_tol = 1e-8);

//! max_{|tau| <= tau_max} | sum_{j=-J}^{-1} 2^j Psi_j(tau) - delta_0(tau) |.
double check_delta_identity(const AutocorrSystem& system, int scale_count,
                            long tau_max);

//! Per-row deviation | sum_l A^{-1}_{jl} - 2^j |, rows ordered -1, -2, ...
std::vector<double> check_inverse_rowsum(const GramMatrix& gram);

} // namespace lswspec
