#include "checks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dnnsolve/loss.hpp"
#include "dnnsolve/rng.hpp"
#include "dnnsolve/taylor.hpp"

namespace checks {

using namespace dnnsolve;

GateResult catalog_gate(const BenchmarkCase& c, int points, std::uint64_t seed) {
  GateResult g;
  if (!c.analytic_taylor) return g;
  const ProblemSpec& s = c.spec;
  const int dims = s.dims, no = s.outputs;

  PartialsFn exact = [&](const double* x, const MultiIndex& mi, double* out) {
    std::array<Taylor, 3> xs;
    for (int a = 0; a < dims; ++a) xs[static_cast<std::size_t>(a)] = Taylor::variable(a, x[a]);
    std::array<Taylor, 2> u;
    c.analytic_taylor(xs.data(), u.data());
    for (int l = 0; l < no; ++l) out[l] = u[static_cast<std::size_t>(l)].partial(mi.with_dims(3));
  };

  const Counts counts{points, s.boundary.empty() ? 0 : points, s.initial ? points : 0};
  const CollocationSet pts = sample(s, counts, seed);
  auto worst = [&](const Term& t, const CollocationPoint& p) {
    double m = 0.0;
    for (double r : eval_term(t, dims, no, p.x.data(), p.normal.data(), exact)) m = std::max(m, std::abs(r));
    return m;
  };
  for (const auto& p : pts.bulk) g.max_bulk = std::max(g.max_bulk, worst(s.bulk, p));
  for (const auto& p : pts.initial) g.max_condition = std::max(g.max_condition, worst(*s.initial, p));
  for (const auto& p : pts.boundary) {
    g.max_condition = std::max(g.max_condition, worst(s.boundary[static_cast<std::size_t>(p.term)].term, p));
  }
  return g;
}

NetParams random_params(int neurons, int dims, int outputs, const std::vector<Extent>& domain,
                        std::uint64_t seed) {
  NetParams p = init_params(neurons, dims, outputs, domain, seed);
  Rng rng(seed * 7919 + 17);
  for (double& v : p.phi) v = rng.uniform(-std::numbers::pi, std::numbers::pi);
  for (double& v : p.w) v = rng.uniform(-2.0, 2.0);
  for (double& v : p.b) v = rng.uniform(-1.0, 1.0);
  for (double& v : p.d) v = rng.uniform(-0.5, 0.5);
  for (double& v : p.a) v = rng.uniform(-0.5, 0.5);
  return p;
}

GradCheck gradient_check(const BenchmarkCase& c, std::uint64_t seed, int bulk, int boundary, int initial) {
  const ProblemSpec& s = c.spec;
  const Counts counts{bulk, s.boundary.empty() ? 0 : boundary, s.initial ? initial : 0};
  Objective obj(s, sample(s, counts, seed), c.defaults.alphas);
  NetParams theta = random_params(c.defaults.neurons, s.dims, s.outputs, s.domain.extents, seed);
  std::vector<double> flat = theta.flatten();
  std::vector<double> grad(flat.size());
  obj.loss_grad(theta, grad);

  auto f = [&](std::size_t i, double h) {
    std::vector<double> x = flat;
    x[i] += h;
    NetParams t = theta;
    t.unflatten(x);
    return obj.loss(t).total;
  };
  auto central = [&](std::size_t i, double h) { return (f(i, h) - f(i, -h)) / (2.0 * h); };

  double gmax = 0.0;
  for (double v : grad) gmax = std::max(gmax, std::abs(v));
  GradCheck out;
  out.n = flat.size();
  for (std::size_t i = 0; i < flat.size(); ++i) {
    const double h = 1e-4 * std::max(1.0, std::abs(flat[i]));
    const double fd = (4.0 * central(i, 0.5 * h) - central(i, h)) / 3.0;
    const double denom = std::max({std::abs(grad[i]), std::abs(fd), 1e-3 * gmax});
    const double rel = std::abs(grad[i] - fd) / denom;
    if (rel > out.worst_rel) {
      out.worst_rel = rel;
      out.worst_index = i;
    }
  }
  return out;
}

double jet_check(int dims, int outputs, int samples, std::uint64_t seed) {
  const int neurons = 8;
  std::vector<Extent> domain(static_cast<std::size_t>(dims), Extent{0.0, 1.0});
  const auto all = all_indices(dims, 3);
  double worst = 0.0;
  Rng rng(seed);
  for (int k = 0; k < samples; ++k) {
    const NetParams theta = random_params(neurons, dims, outputs, domain, seed + static_cast<std::uint64_t>(k));
    double wmax = 0.0;
    for (double w : theta.omega) wmax = std::max(wmax, std::abs(w));
    for (double w : theta.w) wmax = std::max(wmax, std::abs(w));
    std::array<double, 3> x{};
    for (int a = 0; a < dims; ++a) x[static_cast<std::size_t>(a)] = rng.uniform(0.0, 1.0);
    const FieldJet jet = eval_jet(theta, std::span<const double>(x.data(), static_cast<std::size_t>(dims)), all);

    // Per-order scale so near-zero partials are judged against their peers.
    std::array<double, 4> scale{};
    for (const auto& [mi, v] : jet.partials) {
      for (double e : v) scale[static_cast<std::size_t>(mi.total())] = std::max(scale[static_cast<std::size_t>(mi.total())], std::abs(e));
    }

    const double h = 0.02 / wmax;
    for (const auto& mi : all) {
      if (mi.total() == 0) continue;
      int axis = 0;
      while (mi.order(axis) == 0) ++axis;
      std::array<int, 3> lower{};
      for (int a = 0; a < dims; ++a) lower[static_cast<std::size_t>(a)] = mi.order(a);
      lower[static_cast<std::size_t>(axis)] -= 1;
      const MultiIndex lo = MultiIndex::from_span(std::span<const int>(lower.data(), static_cast<std::size_t>(dims)));
      const std::vector<MultiIndex> need{lo};
      auto lower_at = [&](double dx) {
        std::array<double, 3> y = x;
        y[static_cast<std::size_t>(axis)] += dx;
        const FieldJet j = eval_jet(theta, std::span<const double>(y.data(), static_cast<std::size_t>(dims)), need);
        return lo.total() == 0 ? j.values : j.at(lo);
      };
      auto central = [&](double hh, int l) {
        return (lower_at(hh)[static_cast<std::size_t>(l)] - lower_at(-hh)[static_cast<std::size_t>(l)]) / (2.0 * hh);
      };
      const auto& got = jet.at(mi);
      for (int l = 0; l < outputs; ++l) {
        const double fd = (4.0 * central(0.5 * h, l) - central(h, l)) / 3.0;
        const double g = got[static_cast<std::size_t>(l)];
        const double denom = std::max({std::abs(g), std::abs(fd), 1e-3 * scale[static_cast<std::size_t>(mi.total())]});
        worst = std::max(worst, std::abs(g - fd) / denom);
      }
    }
  }
  return worst;
}

}  // namespace checks
