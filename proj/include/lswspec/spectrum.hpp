#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lswspec/scales.hpp"

namespace lswspec {

//! One piece of a per-scale spectrum definition on the half-open interval
//! [lo, hi) in rescaled time. Either a nonnegative constant or
//! amp * sin^2(omega*pi*z + phase) + offset with amp, offset >= 0.
struct SpectrumPiece {
  enum class Kind { constant, sin_squared };

  double lo = 0.0;
  double hi = 1.0;
  Kind kind = Kind::constant;
  double value = 0.0;   // constant
  double amp = 0.0;     // sin_squared
  double omega = 0.0;
  double phase = 0.0;
  double offset = 0.0;

  static SpectrumPiece make_const(double lo, double hi, double value);
  static SpectrumPiece make_sin2(double lo, double hi, double amp,
                                 double omega, double phase, double offset);

  bool contains(double z) const { return z >= lo && z < hi; }
  double eval(double z) const;
};

//! Evolutionary wavelet spectrum S_j(z) declared per scale, either as a
//! piecewise-analytic definition or as a tabulated grid. Immutable once
//! built (the builder methods are meant for construction time only).
class SpectrumSpec {
public:
  SpectrumSpec() = default;
  explicit SpectrumSpec(int scale_count);

  //! Parses the plain-text spectrum format, e.g.
  //!   scale = -1; piece = [0.25, 0.575), const 1.0
  //!   scale = -3; piece = [0, 0.25), sin2 amp=1 omega=1 phase=-0.25pi offset=0.5
  static SpectrumSpec parse(std::string_view text);
  static SpectrumSpec parse_file(const std::string& path);

  //! S_j(z) = 2^j for j = -1..-J: truncated white-noise spectrum.
  static SpectrumSpec white_noise(int scale_count);

  //! Spectrum from the simulation study: scales -1, -3, -4 active.
  static SpectrumSpec example_s5();

  void add_piece(int paper_scale, const SpectrumPiece& piece);
  void set_table(int paper_scale, std::vector<double> values);

  int scale_count() const { return static_cast<int>(scales_.size()); }

  //! S_j(z) for z in the open interval (0,1); domain_error otherwise.
  double evaluate(ScaleIndex scale, double z) const;

  //! S_j at the grid point z = k/T, k = 0..T-1. Same piece semantics but
  //! tolerates z = 0 (half-open pieces decide membership).
  double value_at_grid(ScaleIndex scale, long k, long T) const;

  struct TotalVariation {
    double value = 0.0;
    bool exact = true;  // false for tabulated scales (grid lower bound)
  };
  TotalVariation total_variation(ScaleIndex scale) const;

  //! |R|^{-1} int_R S_j(z) dz over R = [lo, hi), evaluated in closed form.
  double integral_average(ScaleIndex scale, double lo, double hi) const;

  //! sup_z S_j(z) over (0,1), exact for piecewise scales.
  double sup_value(ScaleIndex scale) const;

  bool is_tabulated(ScaleIndex scale) const;

private:
  struct ScaleDef {
    std::vector<SpectrumPiece> pieces;  // sorted, non-overlapping
    std::optional<std::vector<double>> table;
  };

  const ScaleDef* def(ScaleIndex scale) const;
  double eval_unchecked(const ScaleDef& d, double z) const;

  std::vector<ScaleDef> scales_;
};

} // namespace lswspec
