#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dnnsolve/diffengine.hpp"

namespace dnnsolve {

using Extent = std::pair<double, double>;

/// Trainable weights of the dual-branch network.
///
/// Layout (all row-major):
///   omega, phi, w, b : D x N      (row j holds the layer fed by input j)
///   d                : n_o x 3N   (columns [F | S | FS])
///   a                : n_o
/// The flat parameter vector concatenates omega, phi, w, b, d, a in that
/// order. This ordering is frozen: optimizer state, checkpoints and gradient
/// tests depend on it.
struct NetParams {
  int neurons = 0;  // N
  int dims = 0;     // D
  int outputs = 0;  // n_o
  std::vector<double> omega, phi, w, b, d, a;

  // Metadata kept with the weights so checkpoints are self-describing.
  std::vector<Extent> domain;
  std::uint64_t seed = 0;

  NetParams() = default;
  NetParams(int n, int dims, int outputs);

  /// 4 N D + n_o (3N + 1).
  static std::size_t count(int n, int dims, int outputs);
  std::size_t size() const { return count(neurons, dims, outputs); }

  double& omega_at(int j, int k) { return omega[idx(j, k)]; }
  double& phi_at(int j, int k) { return phi[idx(j, k)]; }
  double& w_at(int j, int k) { return w[idx(j, k)]; }
  double& b_at(int j, int k) { return b[idx(j, k)]; }
  double omega_at(int j, int k) const { return omega[idx(j, k)]; }
  double phi_at(int j, int k) const { return phi[idx(j, k)]; }
  double w_at(int j, int k) const { return w[idx(j, k)]; }
  double b_at(int j, int k) const { return b[idx(j, k)]; }

  /// Output amplitude for branch 0 (F), 1 (S) or 2 (FS).
  double& amp(int l, int branch, int k) { return d[amp_idx(l, branch, k)]; }
  double amp(int l, int branch, int k) const { return d[amp_idx(l, branch, k)]; }

  std::vector<double> flatten() const;
  void unflatten(std::span<const double> flat);

  /// Names of the flat blocks in order, with their [begin, end) ranges.
  struct Block {
    const char* name;
    std::size_t begin, end;
  };
  std::vector<Block> blocks() const;

 private:
  std::size_t idx(int j, int k) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(neurons) +
           static_cast<std::size_t>(k);
  }
  std::size_t amp_idx(int l, int branch, int k) const {
    return static_cast<std::size_t>(l) * 3u * static_cast<std::size_t>(neurons) +
           static_cast<std::size_t>(branch) * static_cast<std::size_t>(neurons) +
           static_cast<std::size_t>(k);
  }
};

/// Initialization:
///   d = 1e-4, w ~ U(0, 1e-3), omega_j ~ U(pi/L_j, N pi/L_j), phi = b = a = 0.
/// Draw order: all omega (dimension-major, then neuron), then all w in the
/// same order, from Rng::stream(seed, kInitStream).
NetParams init_params(int neurons, int dims, int outputs, std::span<const Extent> domain,
                      std::uint64_t seed);

inline constexpr std::uint64_t kInitStream = 1;

/// Network outputs and requested input partials at one point.
struct FieldJet {
  std::vector<double> values;  // n_o
  std::vector<std::pair<MultiIndex, std::vector<double>>> partials;

  /// Throws ConfigError if idx was not requested.
  const std::vector<double>& at(const MultiIndex& idx) const;
};

/// Plain forward evaluation (n_o outputs).
std::vector<double> eval(const NetParams& theta, std::span<const double> x);

/// Outputs plus the requested partials; order per index <= 3.
FieldJet eval_jet(const NetParams& theta, std::span<const double> x,
                  std::span<const MultiIndex> needed);

/// Checkpoint document {meta:{...}, params:{...}}.
std::string checkpoint_json(const NetParams& theta);
NetParams checkpoint_from_json(const std::string& text);

}  // namespace dnnsolve
