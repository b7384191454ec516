#pragma once

// Problem definitions: domain, residual terms, conditions, and collocation
// sampling.
//
// Every loss contribution (bulk residual, initial condition, each boundary
// face) is a Term: a small program over the network partials at one point,
// written once as a generic lambda and instantiated on double (loss only) and
// on Dual (loss plus the gradient with respect to every partial it read).
// A term may read a second site, used for delay shifts and periodic
// partners.

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dnnsolve/diffengine.hpp"
#include "dnnsolve/dual.hpp"
#include "dnnsolve/errors.hpp"
#include "dnnsolve/network.hpp"

namespace dnnsolve {

enum class DomainKind { Box, Disk };

struct Domain {
  DomainKind kind = DomainKind::Box;
  std::vector<Extent> extents;  // box extents, or the disk's bounding box
  std::array<double, 2> center{};
  double radius = 0.0;

  static Domain box(std::vector<Extent> extents);
  /// Disk in the plane of both input coordinates (stationary 2D problems).
  static Domain disk(std::array<double, 2> center, double radius);

  int dims() const { return static_cast<int>(extents.size()); }
  bool contains(std::span<const double> x, double tol = 1e-12) const;
};

/// A box face (axis, side 0 = low / 1 = high) or the disk's circle.
struct Face {
  int axis = -1;
  int side = 0;

  static Face circle() { return Face{-1, 0}; }
  bool is_circle() const { return axis < 0; }
  friend bool operator==(const Face&, const Face&) = default;
  std::string to_string() const;
};

/// Read access to network partials inside a term.
template <class T>
class TermCtx {
 public:
  using value_type = T;

  double x(int i) const { return x_[i]; }
  double normal(int i) const { return n_[i]; }

  /// d^(o0,o1,o2) u_l at the point.
  T u(int l, int o0 = 0, int o1 = 0, int o2 = 0) const { return at(0, l, o0 + 4 * o1 + 16 * o2); }

  bool has_partner() const { return has_partner_; }
  double partner_x(int i) const { return px_[i]; }
  T partner(int l, int o0 = 0, int o1 = 0, int o2 = 0) const {
    return at(1, l, o0 + 4 * o1 + 16 * o2);
  }

  const double* x_ = nullptr;
  const double* n_ = nullptr;
  const double* px_ = nullptr;
  const T* u_[2] = {nullptr, nullptr};
  const std::array<int, 64>* slots_[2] = {nullptr, nullptr};
  int outputs_ = 1;
  bool has_partner_ = false;

 private:
  T at(int site, int l, int code) const {
    const int s = (*slots_[site])[static_cast<std::size_t>(code)];
    if (s < 0) throw ConfigError("term read a partial it did not declare");
    return u_[site][s * outputs_ + l];
  }
};

using PointFn = std::function<void(const double* x, double* out)>;

struct Term {
  std::string name;
  int arity = 0;
  std::vector<MultiIndex> needs;          // partials read at the point
  std::vector<MultiIndex> partner_needs;  // partials read at the partner site
  /// Maps x to the partner site; returns false when there is none at this
  /// point (for delays: the shifted time falls into the history).
  std::function<bool(const double* x, double* partner)> partner;
  std::function<void(const TermCtx<double>&, double*)> eval;
  std::function<void(const TermCtx<Dual>&, Dual*)> eval_dual;
};

/// Wrap one generic lambda `f(ctx, out)` as both instantiations.
template <class F>
Term make_term(std::string name, int arity, std::vector<MultiIndex> needs, F f) {
  Term t;
  t.name = std::move(name);
  t.arity = arity;
  t.needs = std::move(needs);
  t.eval = [f](const TermCtx<double>& c, double* out) { f(c, out); };
  t.eval_dual = [f](const TermCtx<Dual>& c, Dual* out) { f(c, out); };
  return t;
}

/// All multi-indices of total order <= max_order in `dims` dimensions.
std::vector<MultiIndex> all_indices(int dims, int max_order);
/// Unit index along one axis: (0,..,order,..,0).
MultiIndex axis_index(int dims, int axis, int order = 1);

// Standard condition terms. `target` writes one value per output.
Term dirichlet(int dims, int outputs, PointFn target);
/// n . grad u - g, with the outward normal stored on the point.
Term neumann(int dims, int outputs, PointFn target);
/// Value mismatch and, when velocity is given, d/dt mismatch (axis 0).
Term initial_condition(int dims, int outputs, PointFn value, PointFn velocity = {});
/// u(face) - u(opposite face) and, optionally, the same for d/d(axis).
Term periodic(int dims, int outputs, int axis, Extent extent, bool with_derivative);

/// Supplies d^idx u at a point: writes one value per output.
using PartialsFn = std::function<void(const double* x, const MultiIndex& idx, double* out)>;

/// Evaluate a term on externally computed partials (reference solutions,
/// oracles). The partner site, if the term has one, is read from the same
/// source. Returns arity residual components.
std::vector<double> eval_term(const Term& t, int dims, int outputs, const double* x,
                              const double* normal, const PartialsFn& partials);

struct BoundaryEntry {
  Face face;
  Term term;
};

struct ProblemSpec {
  std::string id;
  std::string title;
  int dims = 1;
  int outputs = 1;
  Domain domain;
  Term bulk;
  std::optional<Term> initial;  // imposed on the t = t0 face (axis 0, low side)
  std::vector<BoundaryEntry> boundary;

  /// Throws ConfigError on inconsistent definitions.
  void validate() const;
  std::vector<Face> boundary_faces() const;
};

struct CollocationPoint {
  std::array<double, 3> x{};
  std::array<double, 3> normal{};
  int term = -1;  // boundary: index into ProblemSpec::boundary
};

struct CollocationSet {
  std::vector<CollocationPoint> bulk, initial, boundary;
};

struct Counts {
  int bulk = 0;
  int boundary = 0;
  int initial = 0;
};

inline constexpr std::uint64_t kSampleStream = 2;

/// Points for a bare domain. Boundary points go to `faces` proportionally
/// to face measure (all box faces when empty); initial points lie on the
/// axis-0 low face.
CollocationSet sample(const Domain& domain, std::span<const Face> faces, Counts counts,
                      std::uint64_t seed);
/// Points for a problem: boundary faces are those with a condition entry.
CollocationSet sample(const ProblemSpec& spec, Counts counts, std::uint64_t seed);

/// Residual vectors per group at the given parameters (no gradient).
struct GroupResiduals {
  std::vector<double> bulk, initial, boundary;
};
GroupResiduals condition_residuals(const NetParams& theta, const ProblemSpec& spec,
                                   const CollocationSet& pts);

}  // namespace dnnsolve
