#pragma once

#include <Eigen/Dense>

#include <span>

#include "lswspec/autocorr.hpp"
#include "lswspec/model.hpp"

namespace lswspec {

//! Raw and corrected wavelet periodograms of one series, rows ordered by
//! depth (row 0 = scale -1). Immutable after construction.
class PeriodogramGrid {
public:
  //! Raw part only: I_j(k/T) = (sum_t X_t psi_{jk}(t))^2; the inner sum runs
  //! over the part of the wavelet support inside [0, T).
  static PeriodogramGrid raw_only(std::span<const double> series,
                                  int scale_count);

  //! Raw + corrected L = A^{-1} I using the supplied Gram matrix.
  static PeriodogramGrid compute(std::span<const double> series,
                                 const GramMatrix& gram);

  //! Convenience: builds the Gram matrix for `scale_count` scales itself.
  static PeriodogramGrid compute(std::span<const double> series,
                                 int scale_count);

  long T() const { return T_; }
  int scale_count() const { return scale_count_; }
  bool has_corrected() const { return corrected_.size() > 0; }

  const Eigen::MatrixXd& raw() const { return raw_; }
  const Eigen::MatrixXd& corrected() const { return corrected_; }
  const GramMatrix& gram() const { return gram_; }

  double raw_at(ScaleIndex scale, long k) const
  {
    return raw_(scale.row(), k);
  }
  double corrected_at(ScaleIndex scale, long k) const
  {
    return corrected_(scale.row(), k);
  }

private:
  PeriodogramGrid() = default;
  friend PeriodogramGrid corrected_periodogram(const PeriodogramGrid&,
                                               const GramMatrix&);

  long T_ = 0;
  int scale_count_ = 0;
  Eigen::MatrixXd raw_;        // J x T
  Eigen::MatrixXd corrected_;  // J x T (empty until corrected)
  GramMatrix gram_;
};

//! Applies the bias correction L = A^{-1} I to a raw-only grid.
PeriodogramGrid corrected_periodogram(const PeriodogramGrid& raw_grid,
                                      const GramMatrix& gram);

//! Single wavelet coefficient sum_t X_t psi_{jk}(t) (brute force, used as
//! the oracle for the prefix-sum fast path).
double wavelet_coefficient_bruteforce(std::span<const double> series,
                                      ScaleIndex scale, long k);

} // namespace lswspec
