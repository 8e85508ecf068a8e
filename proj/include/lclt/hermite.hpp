// Normalized Hermite polynomials, orthonormal in L^2(R, p) with p the
// standard Gaussian density: h_0 = 1, h_1 = x, h_2 = (x^2-1)/sqrt(2), and
// x h_k = sqrt(k+1) h_{k+1} + sqrt(k) h_{k-1}.
//
// Hermite-Fourier coefficients of indicator functions have the closed form
// <1_{.<=z}, h_i> = -p(z) h_{i-1}(z)/sqrt(i) for i >= 1 (Rodrigues formula
// integrated once); the first terms reproduce the expansion
// 1_{x<=z} - Phi(z) = -p(z) x - (1/2) z p(z) (x^2 - 1) - ...

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "lclt/gaussian.hpp"
#include "lclt/rng.hpp"

namespace lclt {

// Nodes and weights for int f(x) p(x) dx, by eigendecomposition of the
// Jacobi matrix (Golub-Welsch); mu_0 = 1 so weights are squared first
// eigenvector components.
struct GaussHermite {
  std::vector<double> nodes, weights;

  explicit GaussHermite(int n) {
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd sub(n - 1);
    for (int k = 1; k < n; ++k) sub[k - 1] = std::sqrt(static_cast<double>(k));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub,
                                  Eigen::ComputeEigenvectors);
    nodes.resize(n);
    weights.resize(n);
    for (int i = 0; i < n; ++i) {
      nodes[i] = solver.eigenvalues()[i];
      const double v0 = solver.eigenvectors()(0, i);
      weights[i] = v0 * v0;
    }
  }

  template <typename Fn>
  double integrate(Fn&& f) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i)
      acc += weights[i] * f(nodes[i]);
    return acc;
  }
};

class HermiteBasis {
 public:
  explicit HermiteBasis(int max_degree, int quad_nodes = 60)
      : max_degree_(max_degree), quad_(quad_nodes) {
    if (max_degree < 1)
      throw std::invalid_argument("HermiteBasis: max_degree >= 1");
  }

  int max_degree() const { return max_degree_; }
  const GaussHermite& quadrature() const { return quad_; }

  double eval(int i, double x) const {
    if (i < 0 || i > max_degree_)
      throw std::invalid_argument("hermite_eval: degree out of range");
    double hm = 1.0;  // h_0
    if (i == 0) return hm;
    double h = x;  // h_1
    for (int k = 1; k < i; ++k) {
      const double next = (x * h - std::sqrt(static_cast<double>(k)) * hm) /
                          std::sqrt(k + 1.0);
      hm = h;
      h = next;
    }
    return h;
  }

  // <1_{. <= z}, h_i> in L^2(R, p)
  double indicator_coeff(double z, int i) const {
    if (i < 0) throw std::invalid_argument("indicator_coeff: i >= 0");
    if (i == 0) return gauss_cdf(z);
    return -gauss_pdf(z) * eval(i - 1, z) / std::sqrt(static_cast<double>(i));
  }

  // (P_k 1_{. <= z})(x): the indicator minus its first k Hermite terms
  double project_residual(int k, double z, double x) const {
    if (k < 1) throw std::invalid_argument("project_residual: k >= 1");
    double r = (x <= z) ? 1.0 : 0.0;
    for (int i = 0; i < k; ++i) r -= indicator_coeff(z, i) * eval(i, x);
    return r;
  }

 private:
  int max_degree_;
  GaussHermite quad_;
};

// ||1_{. <= z}||_{L^2(R,p)} by composite Simpson quadrature of p, kept
// independent of the closed-form Phi on purpose.
inline double indicator_norm_quadrature(double z) {
  const double lo = -10.0;
  if (z <= lo) return 0.0;
  const int segments = 4000;  // even count
  const double hstep = (z - lo) / segments;
  double acc = gauss_pdf(lo) + gauss_pdf(z);
  for (int i = 1; i < segments; ++i)
    acc += gauss_pdf(lo + i * hstep) * ((i & 1) ? 4.0 : 2.0);
  return std::sqrt(acc * hstep / 3.0);
}

// MC estimate of E[h_i(X) h_j(Y)] over unit Gaussians with correlation rho;
// rho^i delta_{ij} in the limit.
inline Estimate cross_moment(const HermiteBasis& basis, double rho, int i,
                             int j, std::size_t samples, RngStream& rng) {
  if (std::abs(rho) > 1.0)
    throw std::invalid_argument("cross_moment: |rho| <= 1");
  const double c = std::sqrt(1.0 - rho * rho);
  double s1 = 0.0, s2 = 0.0;
  for (std::size_t t = 0; t < samples; ++t) {
    const double x = rng.next_normal();
    const double y = rho * x + c * rng.next_normal();
    const double v = basis.eval(i, x) * basis.eval(j, y);
    s1 += v;
    s2 += v * v;
  }
  const double mean = s1 / samples;
  const double var = s2 / samples - mean * mean;
  return {mean, std::sqrt(std::max(var, 0.0) / samples)};
}

struct ProjectionBound {
  Estimate lhs;   // |E[P_k f(X) P_k g(Y)]| estimate
  double rhs = 0; // |rho|^k ||f|| ||g||
};

inline ProjectionBound projection_bound_check(const HermiteBasis& basis,
                                              double rho, int k, double z1,
                                              double z2, std::size_t samples,
                                              RngStream& rng) {
  const double c = std::sqrt(1.0 - rho * rho);
  double s1 = 0.0, s2 = 0.0;
  for (std::size_t t = 0; t < samples; ++t) {
    const double x = rng.next_normal();
    const double y = rho * x + c * rng.next_normal();
    const double v =
        basis.project_residual(k, z1, x) * basis.project_residual(k, z2, y);
    s1 += v;
    s2 += v * v;
  }
  const double mean = s1 / samples;
  const double var = s2 / samples - mean * mean;
  ProjectionBound out;
  out.lhs = {std::abs(mean), std::sqrt(std::max(var, 0.0) / samples)};
  out.rhs = std::pow(std::abs(rho), k) * indicator_norm_quadrature(z1) *
            indicator_norm_quadrature(z2);
  return out;
}

}  // namespace lclt
