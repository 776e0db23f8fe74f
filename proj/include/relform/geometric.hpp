#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "relform/group.hpp"

namespace relform {

enum class TorusKind { split_M, anisotropic };

/// A point of S_σ with its quadrature weight.
struct TorusPoint {
  Mat2 gamma;
  Rational weight;
  std::string label;
};

struct SigmaTorusInstance {
  TorusKind kind = TorusKind::split_M;
  std::vector<TorusPoint> sampler;
  std::vector<Mat2> x_m;
  std::vector<Rational> c0;  // one per x_m
};

/// Fixed element of G diagonalizing the norm-one torus E^x/F^x of H over E.
Mat2 anisotropic_conjugator(const LocalField& F);

/// det(1 - Ad(g^{-1} σ(g))) on g/s, where s is conj·(diagonal Cartan)·conj^{-1}. Computed from the
/// 6x6 F-matrix of Ad on pgl2(E); throws PreconditionError if Ad(g^{-1}σ(g)) does not preserve s.
Rational delta_sigma(const LocalField& F, const Mat2& g, const std::optional<Mat2>& conj = std::nullopt);
/// N(1 - u^2) N(1 - u^{-2})
Rational delta_sigma_closed_form(const ExtScalar& u);

/// M_σ ≅ E^1 modulo 1 + ω^k O_E, classes containing ±1 dropped; weights sum over all
/// classes to vol(E^1) = 1.
std::vector<TorusPoint> sample_M_sigma(const LocalField& F, long k);
/// S_σ of the anisotropic torus: conj·diag(s, 1)·conj^{-1}, s = ω^m u over units u mod 1 + ω^k,
/// |m| <= m_max, classes containing ±1 dropped; weight vol(O^x) / #classes per shell.
std::vector<TorusPoint> sample_anisotropic_sigma(const LocalField& F, long k, long m_max);

/// E^1 classes of the level-k congruence quotient, as exact representatives.
std::vector<ExtScalar> norm_one_classes(const LocalField& F, long k);

struct OrbitalResult {
  Rational value;          // normalized
  Rational raw;            // un-normalized tree sum
  long delta_valuation = 0;  // v_F(Δ_σ); the factor is q^{-v/4} (q^{-v/2} for weighted sums)
  long radius = 0;
  bool stable = false;  // raw sum unchanged from radius - 1
};

/// M(f)(x_m γ): pairs of F-tree vertices within radius R; for split_M the first vertex is
/// restricted to the fundamental domain of diag(A) (projection onto the standard apartment at o).
OrbitalResult orbital_integral(const LocalField& F, const HeckeFunction& f, TorusKind kind, const Mat2& x_m,
                               const Mat2& gamma, long radius);
/// Raw sum by matrix products and explicit diag(A)-orbit deduplication; independent of the folded path.
Rational orbital_integral_bruteforce(const LocalField& F, const HeckeFunction& f, TorusKind kind, const Mat2& x_m,
                                     const Mat2& gamma, long radius);

/// z_P - z_Pbar from Iwasawa heights.
long weight_vM0(const LocalField& F, const Mat2& x1, const Mat2& y1, const Mat2& x2, const Mat2& y2);

struct VMLimitResult {
  long double extrapolated = 0;
  long double error = 0;
  long expected = 0;
  bool ok = false;
};
/// λ → 0 limit of the two-exponential weight at λ = 1e-3, 1e-4, 1e-5 with two Richardson steps.
VMLimitResult vM_limit_check(long q, long z_P, long z_Pbar, long n);

/// (x1, y1, x2, y2) -> weight; defaults to weight_vM0.
using WeightFn = std::function<Rational(const Mat2&, const Mat2&, const Mat2&, const Mat2&)>;

/// Quadruple tree sum of f1(x1^{-1} x_m γ x2) f2(y1^{-1} x_m γ y2) w(x1, y1, x2, y2), both pairs folded
/// by diag(A) with x1 and y1 in the fundamental domain; normalized by |Δ_σ|^{1/2}.
OrbitalResult weighted_orbital_integral(const LocalField& F, const HeckeFunction& f1, const HeckeFunction& f2,
                                        const Mat2& x_m, const Mat2& gamma, long radius,
                                        const WeightFn& weight = nullptr);
Rational weighted_orbital_bruteforce(const LocalField& F, const HeckeFunction& f1, const HeckeFunction& f2,
                                     const Mat2& x_m, const Mat2& gamma, long radius);

/// Radius used for f: support height, depth v(Δ_σ)/4 of the point near the singular set and its
/// displacement from o, plus one for the stability comparison.
long orbital_radius(const LocalField& F, const HeckeFunction& f, TorusKind kind, const Mat2& x_m, const Mat2& gamma);

struct GeometricAsymptote {
  Rational slope;
  Rational intercept;
  Rational bilinear_M;     // Σ c0_M ∫_{M_σ} M(f1) M(f2)
  Rational unweighted;     // Σ over tori of c0 ∫ M(f1) M(f2)
  Rational weighted;       // Σ c0_M ∫ WM(f)
  bool stable = true;
};

/// ∫_{S_σ} M(f1) M(f2) for one instance and one representative.
Rational torus_product_integral(const LocalField& F, const HeckeFunction& f1, const HeckeFunction& f2,
                                const SigmaTorusInstance& inst, std::size_t m, bool* stable = nullptr);
Rational torus_weighted_integral(const LocalField& F, const HeckeFunction& f1, const HeckeFunction& f2,
                                 const SigmaTorusInstance& inst, std::size_t m, bool* stable = nullptr);

GeometricAsymptote geometric_asymptote(const LocalField& F, const HeckeFunction& f1, const HeckeFunction& f2,
                                       const std::vector<SigmaTorusInstance>& instances);

/// Default desk-scale instances: split M and the norm-one anisotropic torus, κ_S = {1}, with the
/// given constants.
std::vector<SigmaTorusInstance> default_instances(const LocalField& F, long k, const Rational& c0_M,
                                                  const Rational& c0_aniso, long m_max = 1);

struct GeometricCalibration {
  Rational c0_M;
  Rational c0_aniso;
};
/// Fits c0_M on the indicator slope and c0_aniso on the indicator intercept.
GeometricCalibration calibrate_geometric(const LocalField& F, long k, const Rational& indicator_slope,
                                         const Rational& indicator_intercept, long m_max = 1);

}  // namespace relform
