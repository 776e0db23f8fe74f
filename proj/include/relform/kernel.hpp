#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "relform/group.hpp"

namespace relform {

/// Largest H-height handled by the cell path.
inline constexpr long kKernelCellCap = 8;
/// Largest truncation handled by the unfolded vertex-pair oracle.
inline constexpr long kKernelUnfoldedCap = 2;

/// Element Σ c_t T_t of the spherical Hecke algebra of the E-tree, where T_t is the
/// distance-t adjacency operator.
using HeckeElement = std::map<long, Rational>;

/// T_a T_b on the (κ+1)-regular tree.
HeckeElement hecke_product(const HeckeElement& x, const HeckeElement& y, long kappa);
HeckeElement hecke_basis(long t);

/// K_f(m_r, m_s) = ∫_G f1(m_r^{-1} g m_s) f2(g) dg, from sphere-averaged inner K-integrals.
Rational kernel_value(const LocalField& F, const HeckeFunction& f1, const HeckeFunction& f2, long r, long s);

/// K_f(x, y) for explicit x, y in H, by summing over vertex pairs (g·o, g·y·o) of the E-tree.
Rational kernel_value_unfolded(const LocalField& F, const HeckeFunction& f1, const HeckeFunction& f2,
                               const Mat2& x, const Mat2& y);

/// Σ_{r,s ≤ n} vol(r) vol(s) K_f(m_r, m_s).
Rational truncated_kernel(const LocalField& F, const HeckeFunction& f1, const HeckeFunction& f2, long n);

/// Same quantity by enumerating every pair of F-tree vertices in the height-n ball.
Rational truncated_kernel_unfolded(const LocalField& F, const HeckeFunction& f1, const HeckeFunction& f2, long n);

struct LinearPrediction {
  Rational slope;
  Rational intercept;
  Rational at(long n) const { return slope * Rational(n) + intercept; }
};

struct KernelRow {
  long n = 0;
  Rational K;
  Rational spectral_pred;
  std::optional<Rational> geometric_pred;
  Rational residual_spectral;
  std::optional<Rational> residual_geometric;
  std::optional<Rational> first_difference;  // K_n - K_{n-1}, from n = 1
};

struct KernelReport {
  std::vector<KernelRow> rows;
  LinearPrediction spectral;
  std::optional<LinearPrediction> geometric;
  /// First n from which every later first difference equals the spectral slope; -1 if none.
  long onset = -1;
  bool slope_matches_spectral = false;
  std::optional<bool> slope_matches_geometric;

  std::string csv() const;
};

KernelReport compare_report(const LocalField& F, const HeckeFunction& f1, const HeckeFunction& f2, long n_max,
                            const LinearPrediction& spectral,
                            const std::optional<LinearPrediction>& geometric = std::nullopt);

}  // namespace relform
