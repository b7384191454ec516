#pragma once

// Numerical reference solutions for cases without a closed form.

#include <array>
#include <functional>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "dnnsolve/catalog.hpp"

namespace dnnsolve {

/// Dense solution of a 1D initial-value problem on a uniform grid, read back
/// by cubic Hermite interpolation of the stored value and slope.
class OdeSolution {
 public:
  OdeSolution(double t0, double h, std::vector<double> u, std::vector<double> du);
  double operator()(double t) const;
  double slope(double t) const;
  double t0() const { return t0_; }
  double t1() const { return t0_ + h_ * static_cast<double>(u_.size() - 1); }
  int steps() const { return static_cast<int>(u_.size()) - 1; }

 private:
  double t0_, h_;
  std::vector<double> u_, du_;
};

/// Classical RK4 with n_steps uniform steps over the case domain. The
/// residual term is solved for its highest derivative, so it must be affine
/// in it. Delay terms are handled by the method of steps. Rejects cases with
/// boundary conditions.
OdeSolution ode_oracle(const BenchmarkCase& c, int n_steps = 20000);

struct BurgersConfig {
  double nu = 0.25;
  int nx = 1024;  // intervals in x
  int nt = 4096;  // steps in t
  double t_end = 1.0;
  bool advection = true;  // false solves the heat equation with the same scheme
  std::function<double(double)> initial = [](double x) { return x * (1.0 - x); };
};

/// Space-time grid solution of u_t + u u_x = nu u_xx on [0,1] with zero
/// Dirichlet ends. Crank-Nicolson diffusion, conservative central advection
/// with second-order Adams-Bashforth in time, started with backward Euler
/// substeps.
class BurgersSolution {
 public:
  BurgersSolution(const BurgersConfig& cfg, std::vector<double> field);
  /// Cubic interpolation in x, linear in t.
  double operator()(double t, double x) const;
  double node(int it, int ix) const { return u_[static_cast<std::size_t>(it) * (nx_ + 1) + ix]; }
  int nx() const { return nx_; }
  int nt() const { return nt_; }
  double max_cfl() const { return max_cfl_; }
  void set_max_cfl(double c) { max_cfl_ = c; }

 private:
  int nx_, nt_;
  double t_end_;
  double max_cfl_ = 0.0;
  std::vector<double> u_;
};

/// Throws ConfigError if the advective CFL number exceeds 0.5.
BurgersSolution burgers_oracle(const BurgersConfig& cfg);

/// Max-norm difference at the coarse nodes between cfg and its doubled
/// refinement.
double burgers_self_convergence(const BurgersConfig& cfg);

/// Solution of u_tt + u_xx = f on a disk with a constant boundary value.
/// Angular Fourier modes of f are taken by the trapezoid rule; each radial
/// mode is integrated against its exact Green's function.
struct DiskPoissonConfig {
  std::array<double, 2> center{0.0, 0.0};
  double radius = 1.0;
  double boundary_value = 0.0;
  int modes = 32;
  int angles = 128;
  int radial_nodes = 48;
};

class DiskPoisson {
 public:
  DiskPoisson(std::function<double(double, double)> source, DiskPoissonConfig cfg = {});
  double operator()(double t, double x) const;

 private:
  std::function<double(double, double)> f_;
  DiskPoissonConfig cfg_;
  std::vector<double> gl_x_, gl_w_;  // Gauss-Legendre on [0, 1]
  std::vector<double> cos_, sin_;    // angle tables, modes x angles
  // Radial mode amplitudes per radius, cos block then sin block.
  mutable std::unordered_map<double, std::vector<double>> cache_;
  mutable std::mutex cache_mutex_;
  void coefficients(double s, std::vector<double>& a, std::vector<double>& b) const;
  double finish(const std::vector<double>& ab, double theta) const;
};

/// Gauss-Legendre nodes and weights on [0, 1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);

}  // namespace dnnsolve
