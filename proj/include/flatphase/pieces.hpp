#pragma once

#include <string>
#include <string_view>
#include <variant>

#include "flatphase/phase_model.hpp"
#include "flatphase/quad.hpp"

namespace flatphase {

enum class PieceId {
  L,
  L1,
  L2,
  M1,
  M2,
  I2D,
  ITILDE_PLUS,
  ITILDE_MINUS,
  J1,
  J2,
  K1,
  K2,
  K3,
  H1,
  H2,
  N1,
  N2,
  S_POWER,
};

std::string_view piece_name(PieceId id);
/// Case-insensitive; throws std::invalid_argument for unknown names.
PieceId parse_piece(std::string_view name);
bool is_one_dimensional(PieceId id);

enum class Representation { direct, transformed, automatic };

std::string_view representation_name(Representation r);
Representation parse_representation(std::string_view name);

enum class I2dMethod { direct2d, iterated, factored };

std::string_view i2d_method_name(I2dMethod m);
I2dMethod parse_i2d_method(std::string_view name);

/// Largest X at which each evaluation path is accepted.
inline constexpr double kDirectMaxX = 30.0;
inline constexpr double kIteratedMaxX = 60.0;
inline constexpr double kDirect2dMaxX = 15.0;

struct EvalRequest {
  PieceId piece = PieceId::L;
  FlatPhaseParams params;
  /// One-dimensional pieces read psi, two-dimensional pieces read phi.
  std::variant<SmoothFunction1D, Amplitude2D> amplitude;
  double X = 10.0;
  Representation representation = Representation::automatic;
  /// Only for I2D.
  I2dMethod method = I2dMethod::factored;
  ToleranceConfig tol;
  /// -1 evaluates the direct representation at -t (complex conjugate for
  /// real amplitudes). Transformed paths accept only +1.
  int t_sign = +1;
};

struct PieceValue {
  Complex value{};
  double abs_error_estimate = 0.0;
  Representation representation_used = Representation::transformed;
  bool converged = true;
};

// One-dimensional integrals over x >= 0 with phase t e^{-1/x^p}, t = e^X.
// L1 covers x < X^{-1/p}, L2 the rest, L everything. M1 + M2 = L2 come
// from one integration by parts in u = e^{-1/x^p}.
PieceValue eval_L(double X, const SmoothFunction1D& psi, double p, Representation rep,
                  const ToleranceConfig& tol = {}, int t_sign = +1);
PieceValue eval_L1(double X, const SmoothFunction1D& psi, double p, Representation rep,
                   const ToleranceConfig& tol = {}, int t_sign = +1);
PieceValue eval_L2(double X, const SmoothFunction1D& psi, double p, Representation rep,
                   const ToleranceConfig& tol = {}, int t_sign = +1);
PieceValue eval_M1(double X, const SmoothFunction1D& psi, double p);
PieceValue eval_M2(double X, const SmoothFunction1D& psi, double p, Representation rep,
                   const ToleranceConfig& tol = {}, int t_sign = +1);

/// int_0^inf e^{-(1 - it) x^q} dx = Gamma(1/q+1) (1 - it)^{-1/q}, in log-polar
/// form so that any X is representable.
Complex eval_K1_factor(int q, double X);
/// int_0^inf e^{-(1 - it) x^q} beta(x) dx.
PieceValue eval_K2_factor(int q, double X, const ToleranceConfig& tol = {});

/// int_0^inf e^{i sign t x^q} psi2(x) dx.
PieceValue eval_S_power(int q, double X, const SmoothFunction1D& psi2, int sign,
                        const ToleranceConfig& tol = {});

/// Full integral of e^{itf} phi over the plane.
PieceValue eval_I2d(double X, const Amplitude2D& phi, const FlatPhaseParams& params, I2dMethod method,
                    const ToleranceConfig& tol = {});

/// Dispatcher over every PieceId.
PieceValue eval_piece(const EvalRequest& req);

}  // namespace flatphase
