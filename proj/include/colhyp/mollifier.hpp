#pragma once

#include <string>
#include <vector>

namespace colhyp {

/// Kernel chi * rho_eps used to embed rough paths as smooth eps-families.
///
/// rho(u) = phi(u) * P(u), phi the standard Gaussian density and P an even polynomial
/// (Gauss-Laguerre construction) such that int rho = 1 and int u^k rho = 0 for
/// 1 <= k <= M + 1. rho_eps(z) = rho(z / eps) / eps. The cut-off chi is identically 1 on
/// |z| <= a, 0 on |z| >= b, with the exp(-1/s) smooth step in between.
class Mollifier {
 public:
  static constexpr int max_derivative = 8;

  Mollifier(int vanishing_moments, double cutoff_inner, double cutoff_outer,
            double truncation = 1e-12);

  int vanishing_moments() const noexcept { return moments_; }
  double cutoff_inner() const noexcept { return cutoff_inner_; }
  double cutoff_outer() const noexcept { return cutoff_outer_; }
  double truncation() const noexcept { return truncation_; }
  /// Radius in units of u = z/eps beyond which |rho| < truncation.
  double truncation_radius() const noexcept { return radius_; }
  /// Radius of the support of chi * rho_eps: min(b, radius * eps).
  double support_radius(double eps) const noexcept;
  std::string formula() const;

  /// Unscaled rho^(k)(u).
  double rho(double u, int k = 0) const;
  /// chi(z) and its derivatives.
  double cutoff(double z, int k = 0) const;
  /// d^k/dz^k [chi(z) rho_eps(z)], zero past the support radius.
  double kernel(double z, double eps, int k = 0) const;
  /// Cumulative mass int_{-inf}^z chi rho_eps.
  double kernel_cdf(double z, double eps) const;

  /// Coefficients of P in powers of u (odd entries zero).
  const std::vector<double>& polynomial() const noexcept { return derivative_polys_[0]; }

 private:
  int moments_;
  double cutoff_inner_;
  double cutoff_outer_;
  double truncation_;
  double radius_ = 0.0;
  // derivative_polys_[k] = Q_k with rho^(k) = phi * Q_k.
  std::vector<std::vector<double>> derivative_polys_;
};

/// Mollifier with M in {0, 2, 4, 6} vanishing moments and default cut-off radii (a=1, b=2).
Mollifier build_mollifier(int vanishing_moments, double cutoff_inner = 1.0,
                          double cutoff_outer = 2.0, double truncation = 1e-12);

/// How the kernel scale eta(eps) derives from the ladder parameter eps.
enum class ScaleMap { identity, inverse_log, inverse_log_log };

/// eta(eps): eps, 1/|log eps| or 1/log|log eps|. Throws ScaleError unless eta in (0, 1).
double scale_of(ScaleMap map, double eps);
std::string to_string(ScaleMap map);
ScaleMap scale_map_from_string(const std::string& name);

/// Geometric ladder eps_k = eps0 * ratio^k, k < count.
struct EpsLadder {
  double eps0 = 0.5;
  double ratio = 0.5;
  int count = 8;
  ScaleMap scale = ScaleMap::identity;

  void validate() const;
  std::vector<double> values() const;
};

}  // namespace colhyp
