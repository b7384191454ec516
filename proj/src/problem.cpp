#include "dnnsolve/problem.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dnnsolve/kernels.hpp"
#include "dnnsolve/rng.hpp"
#include "point_eval.hpp"

namespace dnnsolve {

Domain Domain::box(std::vector<Extent> extents) {
  if (extents.empty() || extents.size() > static_cast<std::size_t>(kMaxDims)) {
    throw ConfigError("box domain needs 1 to 3 extents");
  }
  for (const auto& [lo, hi] : extents) {
    if (!(hi > lo)) throw ConfigError("box domain has a degenerate extent");
  }
  Domain d;
  d.kind = DomainKind::Box;
  d.extents = std::move(extents);
  return d;
}

Domain Domain::disk(std::array<double, 2> center, double radius) {
  if (!(radius > 0.0)) throw ConfigError("disk radius must be positive");
  Domain d;
  d.kind = DomainKind::Disk;
  d.center = center;
  d.radius = radius;
  d.extents = {{center[0] - radius, center[0] + radius}, {center[1] - radius, center[1] + radius}};
  return d;
}

bool Domain::contains(std::span<const double> x, double tol) const {
  if (static_cast<int>(x.size()) != dims()) return false;
  if (kind == DomainKind::Disk) {
    return std::hypot(x[0] - center[0], x[1] - center[1]) <= radius + tol;
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < extents[i].first - tol || x[i] > extents[i].second + tol) return false;
  }
  return true;
}

std::string Face::to_string() const {
  if (is_circle()) return "circle";
  return "axis" + std::to_string(axis) + (side ? "+" : "-");
}

std::vector<MultiIndex> all_indices(int dims, int max_order) {
  std::vector<MultiIndex> out;
  for (int a = 0; a <= max_order; ++a) {
    for (int b = 0; b <= (dims > 1 ? max_order - a : 0); ++b) {
      for (int c = 0; c <= (dims > 2 ? max_order - a - b : 0); ++c) {
        const int o[3] = {a, b, c};
        out.push_back(MultiIndex::from_span(std::span<const int>(o, static_cast<std::size_t>(dims))));
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

MultiIndex axis_index(int dims, int axis, int order) {
  int o[3] = {0, 0, 0};
  o[axis] = order;
  return MultiIndex::from_span(std::span<const int>(o, static_cast<std::size_t>(dims)));
}

namespace {

int axis_code(int axis) { return axis == 0 ? 1 : (axis == 1 ? 4 : 16); }

}  // namespace

Term dirichlet(int dims, int outputs, PointFn target) {
  return make_term("dirichlet", outputs, {MultiIndex::zero(dims)},
                   [outputs, target](const auto& c, auto* out) {
                     double g[8];
                     target(c.x_, g);
                     for (int l = 0; l < outputs; ++l) out[l] = c.u(l) - g[l];
                   });
}

Term neumann(int dims, int outputs, PointFn target) {
  std::vector<MultiIndex> needs;
  for (int a = 0; a < dims; ++a) needs.push_back(axis_index(dims, a));
  return make_term("neumann", outputs, needs, [dims, outputs, target](const auto& c, auto* out) {
    double g[8];
    target(c.x_, g);
    for (int l = 0; l < outputs; ++l) {
      using T = typename std::decay_t<decltype(c)>::value_type;
      T dn = 0.0;
      for (int a = 0; a < dims; ++a) {
        if (c.normal(a) == 0.0) continue;
        const int code = axis_code(a);
        dn = dn + c.normal(a) * c.u(l, code & 3, (code >> 2) & 3, code >> 4);
      }
      out[l] = dn - g[l];
    }
  });
}

Term initial_condition(int dims, int outputs, PointFn value, PointFn velocity) {
  std::vector<MultiIndex> needs = {MultiIndex::zero(dims)};
  const bool second = static_cast<bool>(velocity);
  if (second) needs.push_back(axis_index(dims, 0));
  Term t = make_term("initial", outputs * (second ? 2 : 1), needs,
                     [outputs, second, value, velocity](const auto& c, auto* out) {
                       double g[8];
                       value(c.x_, g);
                       for (int l = 0; l < outputs; ++l) out[l] = c.u(l) - g[l];
                       if (second) {
                         velocity(c.x_, g);
                         for (int l = 0; l < outputs; ++l) out[outputs + l] = c.u(l, 1) - g[l];
                       }
                     });
  return t;
}

Term periodic(int dims, int outputs, int axis, Extent extent, bool with_derivative) {
  std::vector<MultiIndex> needs = {MultiIndex::zero(dims)};
  if (with_derivative) needs.push_back(axis_index(dims, axis));
  const int code = axis_code(axis);
  Term t = make_term("periodic", outputs * (with_derivative ? 2 : 1), needs,
                     [outputs, with_derivative, code](const auto& c, auto* out) {
                       for (int l = 0; l < outputs; ++l) out[l] = c.u(l) - c.partner(l);
                       if (with_derivative) {
                         const int o0 = code & 3, o1 = (code >> 2) & 3, o2 = code >> 4;
                         for (int l = 0; l < outputs; ++l) {
                           out[outputs + l] = c.u(l, o0, o1, o2) - c.partner(l, o0, o1, o2);
                         }
                       }
                     });
  t.partner_needs = t.needs;
  const double span = extent.second - extent.first;
  t.partner = [axis, dims, span](const double* x, double* px) {
    for (int i = 0; i < dims; ++i) px[i] = x[i];
    px[axis] = x[axis] + span;
    return true;
  };
  return t;
}

void ProblemSpec::validate() const {
  if (dims < 1 || dims > kMaxDims) throw ConfigError(id + ": dims must be 1..3");
  if (outputs < 1 || outputs > 8) throw ConfigError(id + ": outputs must be 1..8");
  if (domain.dims() != dims) throw ConfigError(id + ": domain dimension mismatch");
  if (!bulk.eval || bulk.arity < 1) throw ConfigError(id + ": missing bulk residual");
  if (domain.kind == DomainKind::Disk && initial) {
    throw ConfigError(id + ": disk domains carry no initial slice");
  }
  for (std::size_t i = 0; i < boundary.size(); ++i) {
    const Face& f = boundary[i].face;
    if (domain.kind == DomainKind::Disk) {
      if (!f.is_circle()) throw ConfigError(id + ": disk boundary must use the circle face");
    } else if (f.is_circle() || f.axis >= dims || f.side < 0 || f.side > 1) {
      throw ConfigError(id + ": bad boundary face " + f.to_string());
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (boundary[j].face == f) throw ConfigError(id + ": face " + f.to_string() + " covered twice");
    }
  }
}

std::vector<Face> ProblemSpec::boundary_faces() const {
  std::vector<Face> out;
  for (const auto& b : boundary) out.push_back(b.face);
  return out;
}

CollocationSet sample(const Domain& domain, std::span<const Face> faces_in, Counts counts,
                      std::uint64_t seed) {
  if (counts.bulk < 0 || counts.boundary < 0 || counts.initial < 0) {
    throw ConfigError("collocation counts must be non-negative");
  }
  const int dims = domain.dims();
  Rng rng = Rng::stream(seed, kSampleStream);
  CollocationSet set;

  std::vector<Face> faces(faces_in.begin(), faces_in.end());
  if (faces.empty() && counts.boundary > 0) {
    if (domain.kind == DomainKind::Disk) {
      faces.push_back(Face::circle());
    } else {
      for (int a = 0; a < dims; ++a) {
        faces.push_back({a, 0});
        faces.push_back({a, 1});
      }
    }
  }

  set.bulk.reserve(static_cast<std::size_t>(counts.bulk));
  for (int i = 0; i < counts.bulk; ++i) {
    CollocationPoint p;
    if (domain.kind == DomainKind::Disk) {
      // Rejection from the bounding square keeps the density uniform.
      double dx, dy;
      do {
        dx = rng.uniform(-1.0, 1.0);
        dy = rng.uniform(-1.0, 1.0);
      } while (dx * dx + dy * dy >= 1.0);
      p.x[0] = domain.center[0] + domain.radius * dx;
      p.x[1] = domain.center[1] + domain.radius * dy;
    } else {
      for (int a = 0; a < dims; ++a) {
        p.x[static_cast<std::size_t>(a)] = rng.uniform(domain.extents[static_cast<std::size_t>(a)].first,
                                                       domain.extents[static_cast<std::size_t>(a)].second);
      }
    }
    set.bulk.push_back(p);
  }

  if (counts.boundary > 0) {
    if (faces.empty()) throw ConfigError("boundary points requested on a problem without boundary conditions");
    // Largest-remainder allocation proportional to face measure.
    std::vector<double> measure(faces.size(), 1.0);
    double total = 0.0;
    for (std::size_t f = 0; f < faces.size(); ++f) {
      if (faces[f].is_circle()) {
        measure[f] = 2.0 * std::numbers::pi * domain.radius;
      } else {
        for (int a = 0; a < dims; ++a) {
          if (a == faces[f].axis) continue;
          const auto& e = domain.extents[static_cast<std::size_t>(a)];
          measure[f] *= e.second - e.first;
        }
      }
      total += measure[f];
    }
    std::vector<int> alloc(faces.size());
    std::vector<std::pair<double, std::size_t>> rem;
    int given = 0;
    for (std::size_t f = 0; f < faces.size(); ++f) {
      const double share = counts.boundary * measure[f] / total;
      alloc[f] = static_cast<int>(std::floor(share));
      given += alloc[f];
      rem.emplace_back(share - alloc[f], f);
    }
    std::stable_sort(rem.begin(), rem.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t i = 0; given < counts.boundary; ++i, ++given) ++alloc[rem[i % rem.size()].second];

    for (std::size_t f = 0; f < faces.size(); ++f) {
      for (int i = 0; i < alloc[f]; ++i) {
        CollocationPoint p;
        p.term = static_cast<int>(f);
        if (faces[f].is_circle()) {
          const double th = rng.uniform(0.0, 2.0 * std::numbers::pi);
          p.normal = {std::cos(th), std::sin(th), 0.0};
          p.x[0] = domain.center[0] + domain.radius * p.normal[0];
          p.x[1] = domain.center[1] + domain.radius * p.normal[1];
        } else {
          const int ax = faces[f].axis;
          for (int a = 0; a < dims; ++a) {
            const auto& e = domain.extents[static_cast<std::size_t>(a)];
            p.x[static_cast<std::size_t>(a)] = a == ax ? (faces[f].side ? e.second : e.first)
                                                        : rng.uniform(e.first, e.second);
          }
          p.normal[static_cast<std::size_t>(ax)] = faces[f].side ? 1.0 : -1.0;
        }
        set.boundary.push_back(p);
      }
    }
  }

  for (int i = 0; i < counts.initial; ++i) {
    if (domain.kind == DomainKind::Disk) throw ConfigError("initial points requested on a disk domain");
    CollocationPoint p;
    p.x[0] = domain.extents[0].first;
    for (int a = 1; a < dims; ++a) {
      p.x[static_cast<std::size_t>(a)] = rng.uniform(domain.extents[static_cast<std::size_t>(a)].first,
                                                     domain.extents[static_cast<std::size_t>(a)].second);
    }
    p.normal[0] = -1.0;
    set.initial.push_back(p);
  }
  return set;
}

CollocationSet sample(const ProblemSpec& spec, Counts counts, std::uint64_t seed) {
  if (counts.boundary > 0 && spec.boundary.empty()) {
    throw ConfigError(spec.id + ": boundary points requested but the problem has no boundary conditions");
  }
  if (counts.initial > 0 && !spec.initial) {
    throw ConfigError(spec.id + ": initial points requested but the problem has no initial condition");
  }
  const auto faces = spec.boundary_faces();
  return sample(spec.domain, faces, counts, seed);
}

std::vector<double> eval_term(const Term& t, int dims, int outputs, const double* x,
                              const double* normal, const PartialsFn& partials) {
  kernels::IndexPlan plan[2] = {kernels::IndexPlan(t.needs, dims), kernels::IndexPlan{}};
  std::array<double, 3> px{};
  const bool partner = t.partner && t.partner(x, px.data());
  if (t.partner) plan[1] = kernels::IndexPlan(t.partner_needs, dims);
  std::vector<double> u[2];
  for (int site = 0; site < 2; ++site) {
    if (site == 1 && !partner) continue;
    u[site].assign(static_cast<std::size_t>(plan[site].size() * outputs), 0.0);
    for (int s = 0; s < plan[site].size(); ++s) {
      partials(site == 0 ? x : px.data(), plan[site].indices[static_cast<std::size_t>(s)],
               u[site].data() + static_cast<std::ptrdiff_t>(s) * outputs);
    }
  }
  std::array<double, 3> n{};
  if (normal) std::copy(normal, normal + dims, n.begin());
  TermCtx<double> c;
  c.x_ = x;
  c.n_ = n.data();
  c.px_ = px.data();
  c.u_[0] = u[0].data();
  c.u_[1] = u[1].data();
  c.slots_[0] = &plan[0].slot_of;
  c.slots_[1] = &plan[1].slot_of;
  c.outputs_ = outputs;
  c.has_partner_ = partner;
  std::vector<double> r(static_cast<std::size_t>(t.arity));
  t.eval(c, r.data());
  return r;
}

GroupResiduals condition_residuals(const NetParams& theta, const ProblemSpec& spec,
                                   const CollocationSet& pts) {
  const kernels::Packed packed(theta);
  const auto& ks = kernels::select(kernels::Backend::Auto);
  detail::Workspace ws;
  GroupResiduals out;
  auto run_all = [&](const Term& t, const std::vector<CollocationPoint>& pv, std::vector<double>& dst,
                     int select_term) {
    const detail::TermRunner run(t, spec.dims, spec.outputs);
    for (const auto& p : pv) {
      if (select_term >= 0 && p.term != select_term) continue;
      detail::run_point(run, packed, ks, p, ws, nullptr);
      dst.insert(dst.end(), ws.r.begin(), ws.r.begin() + t.arity);
    }
  };
  run_all(spec.bulk, pts.bulk, out.bulk, -1);
  if (spec.initial) run_all(*spec.initial, pts.initial, out.initial, -1);
  for (std::size_t b = 0; b < spec.boundary.size(); ++b) {
    run_all(spec.boundary[b].term, pts.boundary, out.boundary, static_cast<int>(b));
  }
  return out;
}

}  // namespace dnnsolve
