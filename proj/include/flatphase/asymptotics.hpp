#pragma once

#include <string>
#include <utility>
#include <vector>

#include "flatphase/pieces.hpp"

namespace flatphase {

/// Normalization t^{t_exponent} X^{logt_exponent}, t = e^X.
struct ScalingLaw {
  double t_exponent = 0.0;
  double logt_exponent = 0.0;
};

/// Strictly increasing X values, all > 1.
struct GridSpec {
  std::vector<double> X;

  void validate() const;
  /// {25, 50, 100, 200, 400}
  static GridSpec standard();
  /// {10, 15, 20, 25, 30}, the range where every 2D piece is evaluable.
  static GridSpec moderate();
};

struct LimitEstimate {
  Complex c_hat{};
  int fit_degree = 2;
  double residual_rms = 0.0;
  GridSpec grid;
};

/// One evaluated grid point.
struct GridSample {
  PieceId piece = PieceId::L;
  double X = 0.0;
  PieceValue value;
  Complex scaled{};
};

struct VerificationReport {
  std::string claim;
  Complex target{};
  LimitEstimate estimate;
  double rel_error = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::vector<GridSample> samples;
};

/// value * t^{t_exp} X^{log_exp}, assembled in log form so that X = 400 with
/// t_exp = 1/2 stays finite. Throws std::overflow_error if the product itself
/// is not representable.
Complex scaled_value(Complex value, double X, const ScalingLaw& law);

/// Componentwise least squares of value(s) = c0 + c1 s + ... + c_d s^d,
/// s = 1/X. Needs degree + 2 distinct points.
LimitEstimate extrapolate(const std::vector<std::pair<double, Complex>>& values, int degree);

enum class LemmaPart { i, ii };

/// Part i: X^{1/p} L1 -> psi(0). Part ii: X^{1/p+1} L2 -> psi(0) E1(-i).
VerificationReport verify_lemma21(LemmaPart part, double p, const SmoothFunction1D& psi, const GridSpec& grid,
                                  double tol, int degree = 2);

/// t^{1/q} X^{1/p} I -> C_q phi(0,0) (conjugated for sign -1 and even q).
VerificationReport verify_theorem11(const FlatPhaseParams& params, const Amplitude2D& phi, const GridSpec& grid,
                                    I2dMethod method, double tol, int degree = 2);

struct BoundReport {
  std::string claim;
  ScalingLaw law;
  double sup = 0.0;
  /// d log|scaled| / d log X fitted over the last octave of the grid.
  double trend_slope = 0.0;
  double trend_tolerance = 0.0;
  bool pass = false;
  std::vector<GridSample> samples;
};

/// Slope above which a last-octave trend counts as increasing.
inline constexpr double kTrendTolerance = 0.25;

/// Evaluates `request` (X overwritten) on the grid and checks that the scaled
/// modulus stays finite with a non-increasing last-octave trend.
BoundReport check_bound(const EvalRequest& request, const ScalingLaw& law, const GridSpec& grid,
                        double trend_tolerance = kTrendTolerance);

/// Scaling laws used by the decay bounds, indexed by piece.
ScalingLaw decay_law(PieceId piece, const FlatPhaseParams& params);

struct FalsificationReport {
  ScalingLaw predicted;
  ScalingLaw corrected;
  /// |v(X_k)| / |v(X_{k+1})| under the predicted law, one per consecutive pair.
  std::vector<double> growth_ratios;
  /// (X_{k+1}/X_k)^{1/p}, the factor the predicted law leaves out.
  std::vector<double> expected_ratios;
  double ratio_tolerance = 0.2;
  bool growth_consistent = false;
  VerificationReport corrected_limit;
  bool pass = false;
};

/// Shows that the polynomial-phase law (1/d, -(m-1)) with (d, m) = (q, 1)
/// misses a factor X^{1/p} (the scaled values drift to zero at that rate),
/// while (1/q, 1/p) has the expected limit.
FalsificationReport falsify_predicted_law(const FlatPhaseParams& params, const Amplitude2D& phi,
                                          const GridSpec& grid, double limit_tol);

}  // namespace flatphase
