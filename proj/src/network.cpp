#include "dnnsolve/network.hpp"

#include <cmath>
#include <numbers>

#include "json.hpp"

#include "dnnsolve/errors.hpp"
#include "dnnsolve/kernels.hpp"
#include "dnnsolve/rng.hpp"

namespace dnnsolve {

NetParams::NetParams(int n, int dims_, int outputs_) : neurons(n), dims(dims_), outputs(outputs_) {
  if (n < 1 || dims_ < 1 || outputs_ < 1) {
    throw ConfigError("network needs N, D and n_o all >= 1");
  }
  if (dims_ > kMaxDims) throw ConfigError("at most 3 input dimensions are supported");
  const auto layer = static_cast<std::size_t>(n) * static_cast<std::size_t>(dims_);
  omega.assign(layer, 0.0);
  phi.assign(layer, 0.0);
  w.assign(layer, 0.0);
  b.assign(layer, 0.0);
  d.assign(static_cast<std::size_t>(outputs_) * 3u * static_cast<std::size_t>(n), 0.0);
  a.assign(static_cast<std::size_t>(outputs_), 0.0);
}

std::size_t NetParams::count(int n, int dims, int outputs) {
  return 4u * static_cast<std::size_t>(n) * static_cast<std::size_t>(dims) +
         static_cast<std::size_t>(outputs) * (3u * static_cast<std::size_t>(n) + 1u);
}

std::vector<double> NetParams::flatten() const {
  std::vector<double> out;
  out.reserve(size());
  for (const auto* v : {&omega, &phi, &w, &b, &d, &a}) out.insert(out.end(), v->begin(), v->end());
  return out;
}

void NetParams::unflatten(std::span<const double> flat) {
  if (flat.size() != size()) throw ConfigError("flat parameter vector has the wrong length");
  std::size_t at = 0;
  for (auto* v : {&omega, &phi, &w, &b, &d, &a}) {
    std::copy(flat.begin() + static_cast<std::ptrdiff_t>(at),
              flat.begin() + static_cast<std::ptrdiff_t>(at + v->size()), v->begin());
    at += v->size();
  }
}

std::vector<NetParams::Block> NetParams::blocks() const {
  std::vector<Block> out;
  std::size_t at = 0;
  const std::pair<const char*, std::size_t> sizes[] = {
      {"omega", omega.size()}, {"phi", phi.size()}, {"w", w.size()},
      {"b", b.size()},         {"d", d.size()},     {"a", a.size()}};
  for (const auto& [name, n] : sizes) {
    out.push_back({name, at, at + n});
    at += n;
  }
  return out;
}

NetParams init_params(int neurons, int dims, int outputs, std::span<const Extent> domain,
                      std::uint64_t seed) {
  NetParams th(neurons, dims, outputs);
  if (static_cast<int>(domain.size()) != dims) {
    throw ConfigError("domain extents must have one entry per input dimension");
  }
  for (const auto& [lo, hi] : domain) {
    if (!(hi > lo)) throw ConfigError("degenerate domain extent");
  }
  th.domain.assign(domain.begin(), domain.end());
  th.seed = seed;

  Rng rng = Rng::stream(seed, kInitStream);
  const double pi = std::numbers::pi;
  for (int j = 0; j < dims; ++j) {
    const double len = domain[static_cast<std::size_t>(j)].second -
                       domain[static_cast<std::size_t>(j)].first;
    for (int k = 0; k < neurons; ++k) {
      th.omega_at(j, k) = rng.uniform(pi / len, neurons * pi / len);
    }
  }
  for (int j = 0; j < dims; ++j) {
    for (int k = 0; k < neurons; ++k) th.w_at(j, k) = rng.uniform(0.0, 1e-3);
  }
  std::fill(th.d.begin(), th.d.end(), 1e-4);
  return th;
}

const std::vector<double>& FieldJet::at(const MultiIndex& idx) const {
  for (const auto& [mi, v] : partials) {
    if (mi == idx) return v;
  }
  throw ConfigError("partial " + idx.to_string() + " was not requested");
}

FieldJet eval_jet(const NetParams& theta, std::span<const double> x,
                  std::span<const MultiIndex> needed) {
  if (static_cast<int>(x.size()) != theta.dims) throw ConfigError("point has the wrong dimension");
  std::vector<MultiIndex> want;
  want.reserve(needed.size() + 1);
  want.push_back(MultiIndex::zero(theta.dims));
  for (const auto& mi : needed) {
    if (mi.total() > kMaxOrder) throw UnsupportedOrder("requested partial above order 3");
    want.push_back(mi.with_dims(theta.dims));
  }

  const kernels::Packed packed(theta);
  const kernels::IndexPlan plan(want, theta.dims);
  kernels::PointBuffers buf;
  buf.reserve(packed, plan);
  const auto& ks = kernels::select(kernels::Backend::Auto);
  ks.factor_jets(packed, x.data(), plan, false, buf);
  std::vector<double> u(static_cast<std::size_t>(plan.size() * theta.outputs));
  ks.forward(packed, plan, buf, u.data());

  FieldJet out;
  out.values.assign(u.begin(), u.begin() + theta.outputs);
  for (const auto& mi : want) {
    const int slot = plan.slot_of[static_cast<std::size_t>(mi.code())];
    const auto first = u.begin() + slot * theta.outputs;
    bool seen = false;
    for (const auto& p : out.partials) seen = seen || p.first == mi;
    if (!seen) out.partials.emplace_back(mi, std::vector<double>(first, first + theta.outputs));
  }
  return out;
}

std::vector<double> eval(const NetParams& theta, std::span<const double> x) {
  return eval_jet(theta, x, {}).values;
}

std::string checkpoint_json(const NetParams& theta) {
  nlohmann::ordered_json j;
  nlohmann::ordered_json dom = nlohmann::json::array();
  for (const auto& [lo, hi] : theta.domain) dom.push_back({lo, hi});
  j["meta"] = {{"N", theta.neurons},       {"D", theta.dims}, {"n_o", theta.outputs},
               {"domain", dom},            {"seed", theta.seed},
               {"version", 1}};
  j["params"] = {{"omega", theta.omega}, {"phi", theta.phi}, {"w", theta.w},
                 {"b", theta.b},         {"d", theta.d},     {"a", theta.a}};
  return j.dump(2);
}

NetParams checkpoint_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    const auto& m = j.at("meta");
    NetParams th(m.at("N").get<int>(), m.at("D").get<int>(), m.at("n_o").get<int>());
    for (const auto& e : m.at("domain")) th.domain.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
    th.seed = m.at("seed").get<std::uint64_t>();
    const auto& p = j.at("params");
    auto load = [&](const char* key, std::vector<double>& dst) {
      auto v = p.at(key).get<std::vector<double>>();
      if (v.size() != dst.size()) throw ConfigError(std::string("checkpoint block ") + key + " has the wrong size");
      dst = std::move(v);
    };
    load("omega", th.omega);
    load("phi", th.phi);
    load("w", th.w);
    load("b", th.b);
    load("d", th.d);
    load("a", th.a);
    return th;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad checkpoint: ") + e.what());
  }
}

}  // namespace dnnsolve
