#include "dnnsolve/validate.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <memory>

#include "dnnsolve/oracles.hpp"

namespace dnnsolve {

int grid_points_per_axis(int dims) {
  switch (dims) {
    case 1:
      return 200;
    case 2:
      return 50;
    case 3:
      return 30;
    default:
      throw ConfigError("grids exist for 1 to 3 dimensions");
  }
}

std::vector<std::array<double, 3>> eval_grid(const Domain& domain) {
  const int dims = domain.dims();
  const int n = grid_points_per_axis(dims);
  auto coord = [&](int axis, int i) {
    const auto [lo, hi] = domain.extents[static_cast<std::size_t>(axis)];
    return lo + (hi - lo) * i / (n - 1);
  };
  std::vector<std::array<double, 3>> pts;
  std::array<int, 3> idx{};
  const int total = static_cast<int>(std::pow(n, dims));
  for (int k = 0; k < total; ++k) {
    int rem = k;
    for (int a = dims - 1; a >= 0; --a) {
      idx[static_cast<std::size_t>(a)] = rem % n;
      rem /= n;
    }
    std::array<double, 3> x{};
    for (int a = 0; a < dims; ++a) x[static_cast<std::size_t>(a)] = coord(a, idx[static_cast<std::size_t>(a)]);
    if (domain.kind == DomainKind::Disk && !domain.contains(std::span<const double>(x.data(), 2))) continue;
    pts.push_back(x);
  }
  return pts;
}

namespace {

// Value of a residual term with every partial of u set to zero, plus a
// probe of its dependence on one partial.
double term_at_zero(const Term& t, int dims, const double* x, const MultiIndex* probe = nullptr) {
  PartialsFn pf = [&](const double*, const MultiIndex& mi, double* out) {
    out[0] = (probe && mi == probe->with_dims(dims)) ? 1.0 : 0.0;
  };
  return eval_term(t, dims, 1, x, nullptr, pf)[0];
}

Reference disk_reference(const BenchmarkCase& c) {
  const ProblemSpec& s = c.spec;
  if (s.boundary.size() != 1 || !s.boundary[0].face.is_circle())
    throw ConfigError(c.id + ": disk oracle needs one condition on the circle");
  const Term bulk = s.bulk;
  // The residual must read u_tt + u_xx - f.
  const double x0[2] = {0.1, 0.2};
  const double base = term_at_zero(bulk, 2, x0);
  for (const MultiIndex& mi : {MultiIndex{2, 0}, MultiIndex{0, 2}}) {
    if (std::abs(term_at_zero(bulk, 2, x0, &mi) - base - 1.0) > 1e-12)
      throw ConfigError(c.id + ": disk oracle needs a Poisson residual");
  }
  const double on_circle[2] = {s.domain.center[0] + s.domain.radius, s.domain.center[1]};
  const double g = -term_at_zero(s.boundary[0].term, 2, on_circle);
  DiskPoissonConfig cfg;
  cfg.center = s.domain.center;
  cfg.radius = s.domain.radius;
  cfg.boundary_value = g;
  auto source = [bulk](double t, double x) {
    const double p[2] = {t, x};
    return -term_at_zero(bulk, 2, p);
  };
  auto solver = std::make_shared<DiskPoisson>(source, cfg);
  return {[solver](const double* x, double* o) { o[0] = (*solver)(x[0], x[1]); }, "disk_oracle"};
}

Reference burgers_reference(const BenchmarkCase& c) {
  const ProblemSpec& s = c.spec;
  if (!s.initial) throw ConfigError(c.id + ": Burgers oracle needs an initial condition");
  const Term ic = *s.initial;
  BurgersConfig cfg;
  cfg.nu = c.params.at("nu");
  cfg.nx = 512;
  cfg.nt = 2048;
  cfg.t_end = s.domain.extents[0].second - s.domain.extents[0].first;
  cfg.initial = [ic](double x) {
    const double p[2] = {0.0, x};
    return -term_at_zero(ic, 2, p);
  };
  BurgersConfig fine = cfg;
  fine.nx *= 2;
  fine.nt *= 2;
  const auto coarse = burgers_oracle(cfg);
  auto sol = std::make_shared<BurgersSolution>(burgers_oracle(fine));
  double worst = 0.0;
  for (int it = 0; it <= cfg.nt; ++it) {
    for (int ix = 0; ix <= cfg.nx; ++ix)
      worst = std::max(worst, std::abs(coarse.node(it, ix) - sol->node(2 * it, 2 * ix)));
  }
  if (worst > 1e-5) throw NumericError(c.id + ": Burgers oracle not converged (" + std::to_string(worst) + ")");
  const double t0 = s.domain.extents[0].first;
  return {[sol, t0](const double* x, double* o) { o[0] = (*sol)(x[0] - t0, x[1]); }, "burgers_oracle"};
}

}  // namespace

bool has_reference(const BenchmarkCase& c) {
  return c.analytic || c.reference_kind == ReferenceKind::OdeOracle ||
         c.reference_kind == ReferenceKind::BurgersOracle || c.reference_kind == ReferenceKind::DiskOracle;
}

Reference reference_for(const BenchmarkCase& c) {
  if (c.analytic) return {c.analytic, "analytic"};
  switch (c.reference_kind) {
    case ReferenceKind::OdeOracle: {
      auto sol = std::make_shared<OdeSolution>(ode_oracle(c, 20000));
      return {[sol](const double* x, double* o) { o[0] = (*sol)(x[0]); }, "ode_oracle"};
    }
    case ReferenceKind::BurgersOracle:
      return burgers_reference(c);
    case ReferenceKind::DiskOracle:
      return disk_reference(c);
    default:
      throw ConfigError(c.id + " has no reference solution");
  }
}

double rms_error(const NetParams& theta, const PointFn& ref, int outputs,
                 const std::vector<std::array<double, 3>>& grid) {
  if (grid.empty()) throw ConfigError("empty validation grid");
  std::vector<double> want(static_cast<std::size_t>(outputs));
  double acc = 0.0;
  for (const auto& x : grid) {
    const auto got = eval(theta, std::span<const double>(x.data(), static_cast<std::size_t>(theta.dims)));
    ref(x.data(), want.data());
    for (int l = 0; l < outputs; ++l) {
      const double e = got[static_cast<std::size_t>(l)] - want[static_cast<std::size_t>(l)];
      acc += e * e;
    }
  }
  return std::sqrt(acc / (static_cast<double>(grid.size()) * outputs));
}

double rms_error(const NetParams& theta, const BenchmarkCase& c, const Reference& ref) {
  return rms_error(theta, ref.fn, c.spec.outputs, eval_grid(c.spec.domain));
}

double rms_error(const NetParams& theta, const BenchmarkCase& c) {
  return rms_error(theta, c, reference_for(c));
}

void write_grid_csv(const std::string& path, const NetParams& theta, const BenchmarkCase& c,
                    const Reference& ref) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  static const char* names[3] = {"t", "x", "y"};
  const int dims = c.spec.dims, no = c.spec.outputs;
  for (int a = 0; a < dims; ++a) out << names[a] << ',';
  for (int l = 0; l < no; ++l) out << "u_hat_" << l << ',';
  for (int l = 0; l < no; ++l) out << "u_ref_" << l << ',';
  out << "abs_err\n";
  out.precision(17);
  std::vector<double> want(static_cast<std::size_t>(no));
  for (const auto& x : eval_grid(c.spec.domain)) {
    const auto got = eval(theta, std::span<const double>(x.data(), static_cast<std::size_t>(dims)));
    ref.fn(x.data(), want.data());
    double err = 0.0;
    for (int a = 0; a < dims; ++a) out << x[static_cast<std::size_t>(a)] << ',';
    for (int l = 0; l < no; ++l) out << got[static_cast<std::size_t>(l)] << ',';
    for (int l = 0; l < no; ++l) {
      out << want[static_cast<std::size_t>(l)] << ',';
      const double e = got[static_cast<std::size_t>(l)] - want[static_cast<std::size_t>(l)];
      err += e * e;
    }
    out << std::sqrt(err) << '\n';
  }
}

std::vector<ComparisonRow> compare_report(const RunSummary& run, const BenchmarkCase& c) {
  const ReferenceRow& ref = c.reference;
  std::vector<ComparisonRow> rows;
  auto lg = [](std::optional<double> v) -> std::optional<double> {
    if (!v) return std::nullopt;
    return *v > 0.0 ? std::log10(*v) : -std::numeric_limits<double>::infinity();
  };
  auto add = [&](std::string col, std::optional<double> mine, std::optional<double> paper, std::string note = {}) {
    ComparisonRow r{std::move(col), mine, paper, std::nullopt, std::move(note)};
    if (mine && paper) r.delta = *mine - *paper;
    rows.push_back(std::move(r));
  };
  add("time", run.seconds, ref.time);
  add("epochs", static_cast<double>(run.epochs), static_cast<double>(ref.epochs));
  add("L", lg(run.L), ref.L);
  add("L_bulk", lg(run.L_bulk), ref.L_bulk);
  if (ref.initial_below) {
    add("L_initial", lg(run.L_initial), -25.0, "published as < -25");
  } else {
    add("L_initial", lg(run.L_initial), ref.L_initial, ref.L_initial ? "" : "n/a");
  }
  if (c.spec.dims > 1) add("L_boundary", lg(run.L_boundary), ref.L_boundary);
  if (!ref.r) {
    add("r", std::nullopt, std::nullopt, "n/a (*)");
  } else {
    add("r", lg(run.r), ref.r, ref.r_from_oracle ? "against numerical reference (*)" : "");
  }
  return rows;
}

}  // namespace dnnsolve
