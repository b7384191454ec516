#include "dnnsolve/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <unordered_map>

namespace dnnsolve {

// ---------------------------------------------------------------- ODE

OdeSolution::OdeSolution(double t0, double h, std::vector<double> u, std::vector<double> du)
    : t0_(t0), h_(h), u_(std::move(u)), du_(std::move(du)) {}

namespace {

// Cubic Hermite interpolation over nodes [0, n).
double hermite(const double* u, const double* du, std::size_t n, double t0, double h, double t, bool slope) {
  double pos = std::clamp((t - t0) / h, 0.0, static_cast<double>(n - 1));
  auto i = static_cast<std::size_t>(pos);
  if (i >= n - 1) i = n - 2;
  const double s = pos - static_cast<double>(i);
  if (slope) {
    const double d00 = 6 * s * s - 6 * s;
    const double d10 = 3 * s * s - 4 * s + 1;
    const double d11 = 3 * s * s - 2 * s;
    return d00 * (u[i] - u[i + 1]) / h + d10 * du[i] + d11 * du[i + 1];
  }
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
  const double h10 = s * (1 - s) * (1 - s);
  const double h01 = s * s * (3 - 2 * s);
  const double h11 = s * s * (s - 1);
  return h00 * u[i] + h10 * h * du[i] + h01 * u[i + 1] + h11 * h * du[i + 1];
}

}  // namespace

double OdeSolution::operator()(double t) const {
  return hermite(u_.data(), du_.data(), u_.size(), t0_, h_, t, false);
}

double OdeSolution::slope(double t) const {
  return hermite(u_.data(), du_.data(), u_.size(), t0_, h_, t, true);
}

OdeSolution ode_oracle(const BenchmarkCase& c, int n_steps) {
  const ProblemSpec& spec = c.spec;
  if (spec.dims != 1 || spec.outputs != 1) throw ConfigError(c.id + ": ODE oracle needs a scalar 1D problem");
  if (!spec.boundary.empty() || !spec.initial)
    throw ConfigError(c.id + ": ODE oracle handles initial-value problems only");
  if (n_steps < 1) throw ConfigError("ODE oracle needs at least one step");

  int order = 0;
  for (const auto& mi : spec.bulk.needs) order = std::max(order, mi.order(0));
  if (order < 1 || order > 2) throw ConfigError(c.id + ": ODE oracle supports first and second order");

  const double t0 = spec.domain.extents[0].first;
  const double t1 = spec.domain.extents[0].second;
  const double h = (t1 - t0) / n_steps;

  std::vector<double> u(static_cast<std::size_t>(n_steps) + 1), du(u.size());
  std::size_t done = 0;  // nodes [0, done] are final

  // History lookup for partner sites inside the solved range.
  auto lagged = [&](double t, int o) {
    const double pos = (t - t0) / h;
    if (pos > static_cast<double>(done) + 1e-9) throw ConfigError(c.id + ": delay shorter than the step");
    if (done == 0) return o == 0 ? u[0] : du[0];
    return hermite(u.data(), du.data(), done + 1, t0, h, t, o != 0);
  };

  // Highest derivative from the residual, which is affine in it.
  auto top = [&](double t, const double* y) {
    double tt = t;
    auto residual = [&](double z) {
      PartialsFn pf = [&](const double* at, const MultiIndex& mi, double* out) {
        const int o = mi.order(0);
        if (at != &tt) {
          out[0] = lagged(at[0], o);
          return;
        }
        out[0] = o < order ? y[o] : (o == order ? z : 0.0);
      };
      return eval_term(spec.bulk, 1, 1, &tt, nullptr, pf)[0];
    };
    const double r0 = residual(0.0);
    const double r1 = residual(1.0);
    if (r1 == r0) throw NumericError(c.id + ": residual does not depend on the highest derivative");
    return -r0 / (r1 - r0);
  };

  // Initial state from the initial-condition term, also affine.
  std::array<double, 2> y{};
  {
    const Term& ic = *spec.initial;
    double tt = t0;
    auto res = [&](const std::array<double, 2>& s) {
      PartialsFn pf = [&](const double*, const MultiIndex& mi, double* out) {
        const int o = mi.order(0);
        out[0] = o < 2 ? s[static_cast<std::size_t>(o)] : 0.0;
      };
      return eval_term(ic, 1, 1, &tt, nullptr, pf);
    };
    const auto r0 = res({0.0, 0.0});
    if (static_cast<int>(r0.size()) != order) throw ConfigError(c.id + ": initial conditions do not fix the state");
    if (order == 1) {
      const double a = res({1.0, 0.0})[0] - r0[0];
      y[0] = -r0[0] / a;
    } else {
      const auto ra = res({1.0, 0.0}), rb = res({0.0, 1.0});
      const double a = ra[0] - r0[0], b = rb[0] - r0[0], cc = ra[1] - r0[1], d = rb[1] - r0[1];
      const double det = a * d - b * cc;
      if (det == 0.0) throw ConfigError(c.id + ": singular initial conditions");
      y[0] = (-r0[0] * d + r0[1] * b) / det;
      y[1] = (-a * r0[1] + cc * r0[0]) / det;
    }
  }

  auto rhs = [&](double t, const std::array<double, 2>& s) {
    std::array<double, 2> d{};
    if (order == 1) {
      d[0] = top(t, s.data());
    } else {
      d[0] = s[1];
      d[1] = top(t, s.data());
    }
    return d;
  };
  auto axpy = [](const std::array<double, 2>& a, double k, const std::array<double, 2>& b) {
    return std::array<double, 2>{a[0] + k * b[0], a[1] + k * b[1]};
  };

  u[0] = y[0];
  du[0] = order == 1 ? rhs(t0, y)[0] : y[1];
  for (int n = 0; n < n_steps; ++n) {
    const double t = t0 + h * n;
    // The end stage sits one ulp inside the step so a delayed site that
    // lands exactly on a history jump is read from the left.
    const double tend = std::nextafter(t0 + h * (n + 1), t);
    const auto k1 = rhs(t, y);
    const auto k2 = rhs(t + 0.5 * h, axpy(y, 0.5 * h, k1));
    const auto k3 = rhs(t + 0.5 * h, axpy(y, 0.5 * h, k2));
    const auto k4 = rhs(tend, axpy(y, h, k3));
    for (int i = 0; i < 2; ++i) y[i] += h / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    const auto next = static_cast<std::size_t>(n) + 1;
    u[next] = y[0];
    done = next;
    du[next] = order == 1 ? rhs(t0 + h * (n + 1), y)[0] : y[1];
  }
  return OdeSolution(t0, h, std::move(u), std::move(du));
}

// ---------------------------------------------------------------- Burgers

BurgersSolution::BurgersSolution(const BurgersConfig& cfg, std::vector<double> field)
    : nx_(cfg.nx), nt_(cfg.nt), t_end_(cfg.t_end), u_(std::move(field)) {}

double BurgersSolution::operator()(double t, double x) const {
  const double tp = std::clamp(t / t_end_, 0.0, 1.0) * nt_;
  int it = std::min(static_cast<int>(tp), nt_ - 1);
  const double wt = tp - it;
  const double xp = std::clamp(x, 0.0, 1.0) * nx_;
  int ix = std::clamp(static_cast<int>(xp) - 1, 0, nx_ - 3);
  const double s = xp - ix;  // position relative to node ix, in [0, 3]
  auto cubic = [&](int row) {
    double acc = 0.0;
    for (int a = 0; a < 4; ++a) {
      double l = 1.0;
      for (int b = 0; b < 4; ++b) {
        if (b != a) l *= (s - b) / (a - b);
      }
      acc += l * node(row, ix + a);
    }
    return acc;
  };
  return (1.0 - wt) * cubic(it) + wt * cubic(it + 1);
}

BurgersSolution burgers_oracle(const BurgersConfig& cfg) {
  if (cfg.nx < 4 || cfg.nt < 1) throw ConfigError("Burgers oracle grid too small");
  const int nx = cfg.nx, nt = cfg.nt;
  const double dx = 1.0 / nx, dt = cfg.t_end / nt;
  const double lam = cfg.nu * dt / (dx * dx);
  const auto stride = static_cast<std::size_t>(nx) + 1;
  std::vector<double> field(stride * (static_cast<std::size_t>(nt) + 1));
  for (int i = 0; i <= nx; ++i) field[static_cast<std::size_t>(i)] = cfg.initial(i * dx);
  field[0] = field[static_cast<std::size_t>(nx)] = 0.0;

  std::vector<double> adv(stride), adv_prev(stride), rhs(stride), cp(stride), dp(stride);
  auto advection = [&](const double* u, std::vector<double>& out) {
    std::fill(out.begin(), out.end(), 0.0);
    if (!cfg.advection) return;
    for (int i = 1; i < nx; ++i) out[i] = -(u[i + 1] * u[i + 1] - u[i - 1] * u[i - 1]) / (4.0 * dx);
  };

  // Thomas solve of b v_i + a (v_{i-1} + v_{i+1}) = rhs_i with zero ends.
  auto solve = [&](double a, double b, double* v) {
    cp[1] = a / b;
    dp[1] = rhs[1] / b;
    for (int i = 2; i < nx; ++i) {
      const double m = b - a * cp[i - 1];
      cp[i] = a / m;
      dp[i] = (rhs[i] - a * dp[i - 1]) / m;
    }
    v[0] = v[nx] = 0.0;
    v[nx - 1] = dp[nx - 1];
    for (int i = nx - 2; i >= 1; --i) v[i] = dp[i] - cp[i] * v[i + 1];
  };

  // The initial profile does not satisfy the heat balance at the ends, and
  // Crank-Nicolson barely damps the resulting high modes. The first two
  // steps are split into backward Euler substeps.
  constexpr int kStartSteps = 2, kStartSub = 16;
  std::vector<double> half(stride);
  double max_cfl = 0.0;
  for (int n = 0; n < nt; ++n) {
    const double* u = field.data() + stride * n;
    double* un = field.data() + stride * (n + 1);
    if (cfg.advection) {
      double umax = 0.0;
      for (int i = 0; i <= nx; ++i) umax = std::max(umax, std::abs(u[i]));
      const double cfl = umax * dt / dx;
      max_cfl = std::max(max_cfl, cfl);
      if (!(cfl <= 0.5))
        throw ConfigError("Burgers oracle unstable (CFL " + std::to_string(cfl) + " > 0.5); increase nt");
    }
    advection(u, adv);
    if (n < kStartSteps) {
      const double h = dt / kStartSub;
      std::copy(u, u + stride, half.begin());
      for (int k = 0; k < kStartSub; ++k) {
        advection(half.data(), adv_prev);
        for (int i = 1; i < nx; ++i) rhs[i] = half[i] + h * adv_prev[i];
        solve(-lam / kStartSub, 1.0 + 2.0 * lam / kStartSub, k + 1 == kStartSub ? un : half.data());
      }
    } else {
      for (int i = 1; i < nx; ++i) {
        rhs[i] = u[i] + 0.5 * lam * (u[i - 1] - 2 * u[i] + u[i + 1]) + dt * (1.5 * adv[i] - 0.5 * adv_prev[i]);
      }
      solve(-0.5 * lam, 1.0 + lam, un);
    }
    adv_prev.swap(adv);
  }
  BurgersSolution sol(cfg, std::move(field));
  sol.set_max_cfl(max_cfl);
  return sol;
}

double burgers_self_convergence(const BurgersConfig& cfg) {
  BurgersConfig fine = cfg;
  fine.nx *= 2;
  fine.nt *= 2;
  const auto a = burgers_oracle(cfg);
  const auto b = burgers_oracle(fine);
  double worst = 0.0;
  for (int it = 0; it <= cfg.nt; ++it) {
    for (int ix = 0; ix <= cfg.nx; ++ix) worst = std::max(worst, std::abs(a.node(it, ix) - b.node(2 * it, 2 * ix)));
  }
  return worst;
}

// ---------------------------------------------------------------- disk

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(static_cast<std::size_t>(n), 0.0);
  w.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 1; k <= n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[static_cast<std::size_t>(i)] = 0.5 * (1.0 - z);
    w[static_cast<std::size_t>(i)] = 1.0 / ((1.0 - z * z) * dp * dp);
  }
}

DiskPoisson::DiskPoisson(std::function<double(double, double)> source, DiskPoissonConfig cfg)
    : f_(std::move(source)), cfg_(cfg) {
  gauss_legendre(cfg_.radial_nodes, gl_x_, gl_w_);
  const auto m = static_cast<std::size_t>(cfg_.angles);
  cos_.resize(static_cast<std::size_t>(cfg_.modes + 1) * m);
  sin_.resize(cos_.size());
  for (int n = 0; n <= cfg_.modes; ++n) {
    for (int j = 0; j < cfg_.angles; ++j) {
      const double th = 2.0 * std::numbers::pi * j / cfg_.angles;
      cos_[static_cast<std::size_t>(n) * m + static_cast<std::size_t>(j)] = std::cos(n * th);
      sin_[static_cast<std::size_t>(n) * m + static_cast<std::size_t>(j)] = std::sin(n * th);
    }
  }
}

void DiskPoisson::coefficients(double s, std::vector<double>& a, std::vector<double>& b) const {
  const int M = cfg_.angles;
  std::vector<double> vals(static_cast<std::size_t>(M));
  for (int j = 0; j < M; ++j) {
    const double th = 2.0 * std::numbers::pi * j / M;
    vals[static_cast<std::size_t>(j)] =
        f_(cfg_.center[0] + s * cfg_.radius * std::cos(th), cfg_.center[1] + s * cfg_.radius * std::sin(th));
  }
  a.assign(static_cast<std::size_t>(cfg_.modes) + 1, 0.0);
  b.assign(a.size(), 0.0);
  for (int n = 0; n <= cfg_.modes; ++n) {
    const double* cn = cos_.data() + static_cast<std::size_t>(n) * static_cast<std::size_t>(M);
    const double* sn = sin_.data() + static_cast<std::size_t>(n) * static_cast<std::size_t>(M);
    double ac = 0.0, as = 0.0;
    for (int j = 0; j < M; ++j) {
      ac += vals[static_cast<std::size_t>(j)] * cn[j];
      as += vals[static_cast<std::size_t>(j)] * sn[j];
    }
    const double norm = n == 0 ? 1.0 / M : 2.0 / M;
    a[static_cast<std::size_t>(n)] = ac * norm;
    b[static_cast<std::size_t>(n)] = as * norm;
  }
}

double DiskPoisson::operator()(double t, double x) const {
  const double dt = t - cfg_.center[0], dx = x - cfg_.center[1];
  const double rho = std::min(std::hypot(dt, dx) / cfg_.radius, 1.0);
  const double theta = std::atan2(dx, dt);
  const int N = cfg_.modes;

  {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    auto it = cache_.find(rho);
    if (it != cache_.end()) return finish(it->second, theta);
  }
  std::vector<double> A(static_cast<std::size_t>(N) + 1, 0.0), B(A.size(), 0.0), a, b;
  // graded: s = lo + (hi - lo) xi^3, which tames the s log s kernel when
  // the lower end approaches the centre.
  auto accumulate = [&](double lo, double hi, bool graded) {
    if (hi <= lo) return;
    for (std::size_t q = 0; q < gl_x_.size(); ++q) {
      const double xi = gl_x_[q];
      const double s = graded ? lo + (hi - lo) * xi * xi * xi : lo + (hi - lo) * xi;
      const double wq = (hi - lo) * gl_w_[q] * (graded ? 3.0 * xi * xi : 1.0) * s;
      coefficients(s, a, b);
      const double rl = std::min(rho, s), rg = std::max(rho, s);
      for (int n = 0; n <= N; ++n) {
        double g;
        if (n == 0) {
          g = std::log(rg);
        } else {
          g = -(std::pow(rl / rg, n) - std::pow(rl * rg, n)) / (2.0 * n);
        }
        A[static_cast<std::size_t>(n)] += wq * g * a[static_cast<std::size_t>(n)];
        B[static_cast<std::size_t>(n)] += wq * g * b[static_cast<std::size_t>(n)];
      }
    }
  };
  accumulate(0.0, rho, false);
  accumulate(rho, 1.0, true);
  A.insert(A.end(), B.begin(), B.end());
  std::lock_guard<std::mutex> lock(cache_mutex_);
  return finish(cache_.emplace(rho, std::move(A)).first->second, theta);
}

double DiskPoisson::finish(const std::vector<double>& ab, double theta) const {
  const std::size_t m = ab.size() / 2;
  double u = 0.0;
  for (std::size_t n = 0; n < m; ++n) {
    u += ab[n] * std::cos(static_cast<double>(n) * theta) + ab[m + n] * std::sin(static_cast<double>(n) * theta);
  }
  return cfg_.boundary_value + cfg_.radius * cfg_.radius * u;
}

}  // namespace dnnsolve
