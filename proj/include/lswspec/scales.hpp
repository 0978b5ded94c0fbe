#pragma once

#include <stdexcept>
#include <vector>

namespace lswspec {

//! Scale of a nondecimated Haar wavelet. The public numbering follows the
//! convention where scale -1 holds the finest detail and deeper scales are
//! more negative; internally we work with the positive depth i = -j, so the
//! support length is 2^i. All conversions live here.
class ScaleIndex {
public:
  static ScaleIndex from_paper(int j)
  {
    if (j >= 0)
      throw std::domain_error("wavelet scale must be negative, got " +
                              std::to_string(j));
    return ScaleIndex(-j);
  }

  static ScaleIndex from_depth(int i)
  {
    if (i <= 0)
      throw std::domain_error("wavelet depth must be positive, got " +
                              std::to_string(i));
    return ScaleIndex(i);
  }

  int paper() const { return -depth_; }
  int depth() const { return depth_; }
  //! L_j = 2^{-j}: number of nonzero taps of the Haar wavelet at this scale.
  long support_length() const { return 1L << depth_; }
  //! Zero-based row used for matrix storage (scale -1 -> 0).
  int row() const { return depth_ - 1; }

  bool operator==(const ScaleIndex&) const = default;

private:
  explicit ScaleIndex(int depth) : depth_(depth) {}
  int depth_;
};

//! Discrete Haar wavelet psi_{j0}: values[m] for offsets m = 0..L_j-1.
//! The shifted wavelet is psi_{jk}(t) = values[k - t] whenever k - t lands
//! in [0, L_j), zero otherwise.
struct WaveletVector {
  ScaleIndex scale;
  std::vector<double> values;
};

WaveletVector haar_wavelet(ScaleIndex scale);

//! psi_{jk}(t) for the Haar family; zero outside the support.
double haar_shifted(const WaveletVector& w, long k, long t);

} // namespace lswspec
