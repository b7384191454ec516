#include "dnnsolve/landscape.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "dnnsolve/errors.hpp"
#include "dnnsolve/rng.hpp"

namespace dnnsolve::landscape {

namespace {

constexpr double kPi = std::numbers::pi;

// Mean of cos(e x + p) over [0, 1], with a series where (sin(e+p)-sin p)/e
// cancels.
double cos_mean(double e, double p) {
  if (std::abs(e) < 1e-6) return std::cos(p) - 0.5 * e * std::sin(p) - e * e * std::cos(p) / 6.0;
  return (std::sin(e + p) - std::sin(p)) / e;
}

LossBreakdown finish(double bulk2, double init2, double bound2, LossWeights a, bool boundary) {
  LossBreakdown out;
  out.bulk = std::sqrt(std::max(bulk2, 0.0));
  out.initial = std::sqrt(std::max(init2, 0.0));
  out.boundary = std::sqrt(std::max(bound2, 0.0));
  out.has_initial = true;
  out.has_boundary = boundary;
  out.total = out.bulk + a.alpha0 * out.initial + (boundary ? a.alpha_boundary * out.boundary : 0.0);
  return out;
}

double ho_initial2(double omega, double phi, double d) {
  const double v = d * std::sin(phi);
  const double s = d * omega * std::cos(phi) - 10.0 * kPi;
  return 0.5 * (v * v + s * s);
}

}  // namespace

double sin2_mean(double w, double p) { return 0.5 * (1.0 - cos_mean(2.0 * w, 2.0 * p)); }

double sin_overlap(double w, double p, int k) {
  return 0.5 * (cos_mean(w - k * kPi, p) - cos_mean(w + k * kPi, p));
}

LossBreakdown ho_loss(double omega, double phi, double d, double alpha0) {
  const double m = 25.0 * kPi * kPi - omega * omega;
  return finish(d * d * m * m * sin2_mean(omega, phi), ho_initial2(omega, phi, d), 0.0, {alpha0, 0.0}, false);
}

LossBreakdown ho_loss_sampled(double omega, double phi, double d, double alpha0, double dt) {
  if (!(dt > 0.0 && dt <= 1.0)) throw ConfigError("grid step must lie in (0, 1]");
  const int n = std::max(1, static_cast<int>(std::lround(1.0 / dt)));
  const double m = 25.0 * kPi * kPi - omega * omega;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = (i + 0.5) / n;
    // u'' + (5 pi)^2 u for u = d sin(w t + p)
    const double r = d * m * std::sin(omega * t + phi);
    acc += r * r;
  }
  return finish(acc / n, ho_initial2(omega, phi, d), 0.0, {alpha0, 0.0}, false);
}

LossBreakdown wave_toy_losses(const WaveToy& p, LossWeights alphas) {
  const double Bt = sin2_mean(p.wt, p.pt), Bx = sin2_mean(p.wx, p.px), By = sin2_mean(p.wy, p.py);
  const double c = p.wx * p.wx + p.wy * p.wy - p.wt * p.wt;
  const double bulk2 = c * c * Bt * Bx * By;

  const double st = std::sin(p.pt), ct = std::cos(p.pt);
  const double init2 = 0.5 * (0.25 - 2.0 * st * sin_overlap(p.wx, p.px, 3) * sin_overlap(p.wy, p.py, 4) +
                              (st * st + p.wt * p.wt * ct * ct) * Bx * By);

  auto edge = [](double w, double ph) {
    const double a = std::sin(ph), b = std::sin(w + ph);
    return a * a + b * b;
  };
  const double bound2 = 0.25 * Bt * (edge(p.wx, p.px) * By + edge(p.wy, p.py) * Bx);
  return finish(bulk2, init2, bound2, alphas, true);
}

LossBreakdown wave_toy_on_cone(double wx, double wy, double pt, double px, double py, LossWeights alphas) {
  return wave_toy_losses({std::hypot(wx, wy), wx, wy, pt, px, py}, alphas);
}

LossBreakdown wave_toy_sampled(const WaveToy& p, int n, std::uint64_t seed, LossWeights alphas) {
  if (n < 1) throw ConfigError("need at least one sample");
  Rng rng(seed);
  auto u = [&](double t, double x, double y) {
    return std::sin(p.wt * t + p.pt) * std::sin(p.wx * x + p.px) * std::sin(p.wy * y + p.py);
  };
  const double c = p.wx * p.wx + p.wy * p.wy - p.wt * p.wt;
  double bulk = 0.0, init = 0.0, bound = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = rng.open01(), x = rng.open01(), y = rng.open01();
    const double r = c * u(t, x, y);
    bulk += r * r;
  }
  for (int i = 0; i < n; ++i) {
    const double x = rng.open01(), y = rng.open01();
    const double r0 = u(0.0, x, y) - std::sin(3 * kPi * x) * std::sin(4 * kPi * y);
    const double r1 = p.wt * std::cos(p.pt) * std::sin(p.wx * x + p.px) * std::sin(p.wy * y + p.py);
    init += r0 * r0 + r1 * r1;
  }
  for (int i = 0; i < n; ++i) {
    const auto face = rng.below(4);
    const double t = rng.open01(), s = rng.open01();
    const double side = static_cast<double>(face % 2);
    const double v = face < 2 ? u(t, side, s) : u(t, s, side);
    bound += v * v;
  }
  return finish(bulk / n, init / (2.0 * n), bound / n, alphas, true);
}

std::vector<LossBreakdown> wave_toy_sampled_grid(std::span<const double> wt, std::span<const double> wx,
                                                 std::span<const double> wy, double pt, double px, double py,
                                                 int n, std::uint64_t seed, LossWeights alphas, Points points) {
  if (n < 1) throw ConfigError("need at least one sample");
  const bool halton = points == Points::Halton;
  const std::size_t nt = wt.size(), nx = wx.size(), ny = wy.size(), total = nt * nx * ny;
  std::vector<double> bulk(total), init(total), bound(total);
  Rng rng(seed);
  auto coord = [&](int s, int base) {
    return halton ? radical_inverse(seed + static_cast<std::uint64_t>(s) + 1, base) : rng.open01();
  };
  std::vector<double> st(nt), sx(nx), sy(ny);
  auto fill = [](std::vector<double>& out, std::span<const double> w, double ph, double z) {
    for (std::size_t i = 0; i < w.size(); ++i) out[i] = std::sin(w[i] * z + ph);
  };
  auto index = [&](std::size_t i, std::size_t j, std::size_t k) { return (i * nx + j) * ny + k; };

  for (int s = 0; s < n; ++s) {
    const double t = coord(s, 2), x = coord(s, 3), y = coord(s, 5);
    fill(st, wt, pt, t);
    fill(sx, wx, px, x);
    fill(sy, wy, py, y);
    for (std::size_t i = 0; i < nt; ++i)
      for (std::size_t j = 0; j < nx; ++j)
        for (std::size_t k = 0; k < ny; ++k) {
          const double c = wx[j] * wx[j] + wy[k] * wy[k] - wt[i] * wt[i];
          const double r = c * st[i] * sx[j] * sy[k];
          bulk[index(i, j, k)] += r * r;
        }
  }
  for (int s = 0; s < n; ++s) {
    const double x = coord(s, 2), y = coord(s, 3);
    fill(sx, wx, px, x);
    fill(sy, wy, py, y);
    const double target = std::sin(3 * kPi * x) * std::sin(4 * kPi * y);
    for (std::size_t i = 0; i < nt; ++i)
      for (std::size_t j = 0; j < nx; ++j)
        for (std::size_t k = 0; k < ny; ++k) {
          const double xy = sx[j] * sy[k];
          const double r0 = std::sin(pt) * xy - target;
          const double r1 = wt[i] * std::cos(pt) * xy;
          init[index(i, j, k)] += r0 * r0 + r1 * r1;
        }
  }
  std::vector<double> a(nx), b(ny);
  for (int s = 0; s < n; ++s) {
    const auto face = halton ? static_cast<std::uint64_t>(s % 4) : rng.below(4);
    const int j = halton ? s / 4 : s;
    const double t = coord(j, 2), q = coord(j, 3);
    const double side = static_cast<double>(face % 2);
    fill(st, wt, pt, t);
    // Faces x = side carry sin(wy q + py); faces y = side carry sin(wx q + px).
    fill(a, wx, px, face < 2 ? side : q);
    fill(b, wy, py, face < 2 ? q : side);
    for (std::size_t i = 0; i < nt; ++i)
      for (std::size_t j = 0; j < nx; ++j)
        for (std::size_t k = 0; k < ny; ++k) {
          const double v = st[i] * a[j] * b[k];
          bound[index(i, j, k)] += v * v;
        }
  }
  std::vector<LossBreakdown> out(total);
  for (std::size_t g = 0; g < total; ++g) out[g] = finish(bulk[g] / n, init[g] / (2.0 * n), bound[g] / n, alphas, true);
  return out;
}

double radical_inverse(std::uint64_t i, int base) {
  const auto b = static_cast<std::uint64_t>(base);
  double f = 1.0, r = 0.0;
  while (i > 0) {
    f /= static_cast<double>(b);
    r += f * static_cast<double>(i % b);
    i /= b;
  }
  return r;
}

int count_local_minima(std::span<const double> v) {
  int count = 0;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    if (v[i] < v[i - 1] && v[i] < v[i + 1]) ++count;
  }
  return count;
}

Axis parse_axis(const std::string& name, const std::string& spec) {
  Axis a;
  a.name = name;
  std::istringstream in(spec);
  char c1 = 0, c2 = 0;
  if (!(in >> a.lo >> c1 >> a.hi >> c2 >> a.n) || c1 != ':' || c2 != ':' || a.n < 1 || !in.eof())
    throw ConfigError("bad grid spec '" + spec + "' for " + name + "; expected lo:hi:n");
  return a;
}

void surface_export(const std::string& path, const std::vector<Axis>& axes,
                    const std::vector<std::string>& value_names,
                    const std::function<std::vector<double>(std::span<const double>)>& fn) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  for (const auto& a : axes) out << a.name << ',';
  for (std::size_t i = 0; i < value_names.size(); ++i) out << value_names[i] << (i + 1 < value_names.size() ? "," : "\n");
  out.precision(17);
  std::size_t total = 1;
  for (const auto& a : axes) total *= static_cast<std::size_t>(a.n);
  std::vector<double> pt(axes.size());
  for (std::size_t k = 0; k < total; ++k) {
    std::size_t rem = k;
    for (std::size_t j = axes.size(); j-- > 0;) {
      const auto n = static_cast<std::size_t>(axes[j].n);
      pt[j] = axes[j].at(static_cast<int>(rem % n));
      rem /= n;
    }
    const auto vals = fn(pt);
    for (double x : pt) out << x << ',';
    for (std::size_t i = 0; i < vals.size(); ++i) out << vals[i] << (i + 1 < vals.size() ? "," : "\n");
  }
  if (!out) throw ConfigError("write failed for " + path);
}

}  // namespace dnnsolve::landscape
