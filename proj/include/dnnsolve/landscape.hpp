#pragma once

// Loss surfaces of two single-neuron toys: u = d sin(w t + p) for
// u'' + (5 pi)^2 u = 0, u(0) = 0, u'(0) = 10 pi on [0, 1], and a product of
// three sines for the 2+1D wave problem with data sin(3 pi x) sin(4 pi y).

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "dnnsolve/loss.hpp"

namespace dnnsolve::landscape {

/// Mean of sin^2(w x + p) over [0, 1]: (2w + sin 2p - sin 2(w + p)) / (4w).
double sin2_mean(double w, double p);
/// Mean of sin(w x + p) sin(k pi x) over [0, 1].
double sin_overlap(double w, double p, int k);

/// Closed form; total = bulk + alpha0 * initial.
LossBreakdown ho_loss(double omega, double phi, double d, double alpha0);
/// Bulk points at the midpoints of a grid of step dt on [0, 1].
LossBreakdown ho_loss_sampled(double omega, double phi, double d, double alpha0, double dt);

struct WaveToy {
  double wt, wx, wy;  // frequencies
  double pt, px, py;  // phases
};

/// Closed forms; total = bulk + alpha0 * initial + alpha_boundary * boundary.
LossBreakdown wave_toy_losses(const WaveToy& p, LossWeights alphas = {});
/// Same integrals estimated with n uniform random points per group.
LossBreakdown wave_toy_sampled(const WaveToy& p, int n, std::uint64_t seed, LossWeights alphas = {});

/// Closed-form losses on the zero set of the bulk term, w_t = sqrt(w_x^2 + w_y^2).
LossBreakdown wave_toy_on_cone(double wx, double wy, double pt, double px, double py, LossWeights alphas = {});

enum class Points { Random, Halton };

/// wave_toy_sampled over the grid wt x wx x wy (last axis fastest) with
/// fixed phases. All grid points share one set of sample points. Halton
/// points skip the first 'seed' terms of the sequence; faces are then
/// visited in turn.
std::vector<LossBreakdown> wave_toy_sampled_grid(std::span<const double> wt, std::span<const double> wx,
                                                 std::span<const double> wy, double pt, double px, double py,
                                                 int n, std::uint64_t seed, LossWeights alphas = {},
                                                 Points points = Points::Random);

/// Van der Corput radical inverse of i in the given base.
double radical_inverse(std::uint64_t i, int base);

/// Strict interior local minima of a sampled curve; ties do not count.
int count_local_minima(std::span<const double> values);

/// Axis for grid exports: n evenly spaced values from lo to hi inclusive.
struct Axis {
  std::string name;
  double lo = 0.0, hi = 0.0;
  int n = 1;
  double at(int i) const { return n == 1 ? lo : lo + (hi - lo) * i / (n - 1); }
};

/// Parses "lo:hi:n".
Axis parse_axis(const std::string& name, const std::string& spec);

/// Writes the Cartesian product of the axes (last axis fastest) with one
/// column per value name. Throws ConfigError if the file cannot be written.
void surface_export(const std::string& path, const std::vector<Axis>& axes,
                    const std::vector<std::string>& value_names,
                    const std::function<std::vector<double>(std::span<const double>)>& fn);

}  // namespace dnnsolve::landscape
