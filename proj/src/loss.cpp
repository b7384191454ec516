#include "dnnsolve/loss.hpp"

#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include "point_eval.hpp"

namespace dnnsolve {

struct Objective::Impl {
  std::vector<detail::TermRunner> runners;  // bulk, initial (optional), boundary entries
  int initial_runner = -1;
  int boundary_base = 0;
  const kernels::KernelSet* ks = nullptr;
};

namespace {

struct Chunk {
  Group group;
  std::size_t begin, end;  // into the sorted subset
};

struct ChunkResult {
  double ss = 0.0;
  long entries = 0;
  kernels::GradAccum grad;
  std::string error;
};

const char* group_name(Group g) {
  switch (g) {
    case Group::Bulk:
      return "bulk";
    case Group::Initial:
      return "initial";
    default:
      return "boundary";
  }
}

// Pairwise combination of results[first, last) into results[first].
void pairwise(std::vector<ChunkResult>& r, std::size_t first, std::size_t last, bool grad) {
  if (last - first <= 1) return;
  const std::size_t mid = first + (last - first) / 2;
  pairwise(r, first, mid, grad);
  pairwise(r, mid, last, grad);
  r[first].ss += r[mid].ss;
  r[first].entries += r[mid].entries;
  if (grad) r[first].grad.add(r[mid].grad);
}

}  // namespace

Objective::Objective(const ProblemSpec& spec, CollocationSet pts, LossWeights w, int threads,
                     kernels::Backend backend)
    : spec_(spec), pts_(std::move(pts)), w_(w), threads_(std::max(1, threads)),
      impl_(std::make_unique<Impl>()) {
  spec_.validate();
  impl_->ks = &kernels::select(backend);
  impl_->runners.reserve(2 + spec_.boundary.size());
  impl_->runners.emplace_back(spec_.bulk, spec_.dims, spec_.outputs);
  if (spec_.initial) {
    impl_->initial_runner = static_cast<int>(impl_->runners.size());
    impl_->runners.emplace_back(*spec_.initial, spec_.dims, spec_.outputs);
  } else if (!pts_.initial.empty()) {
    throw ConfigError(spec_.id + ": initial points given but no initial condition");
  }
  impl_->boundary_base = static_cast<int>(impl_->runners.size());
  for (const auto& b : spec_.boundary) impl_->runners.emplace_back(b.term, spec_.dims, spec_.outputs);
  for (const auto& p : pts_.boundary) {
    if (p.term < 0 || p.term >= static_cast<int>(spec_.boundary.size())) {
      throw ConfigError(spec_.id + ": boundary point without a matching condition");
    }
  }
}

Objective::~Objective() = default;

std::size_t Objective::total_points() const {
  return pts_.bulk.size() + pts_.initial.size() + pts_.boundary.size();
}

std::vector<PointRef> Objective::all_refs() const {
  std::vector<PointRef> refs;
  refs.reserve(total_points());
  for (std::uint32_t i = 0; i < pts_.bulk.size(); ++i) refs.push_back({Group::Bulk, i});
  for (std::uint32_t i = 0; i < pts_.initial.size(); ++i) refs.push_back({Group::Initial, i});
  for (std::uint32_t i = 0; i < pts_.boundary.size(); ++i) refs.push_back({Group::Boundary, i});
  return refs;
}

LossBreakdown Objective::loss(const NetParams& theta) const {
  const auto refs = all_refs();
  return run(theta, refs, {}, false);
}

LossBreakdown Objective::loss_grad(const NetParams& theta, std::span<double> grad) const {
  const auto refs = all_refs();
  return run(theta, refs, grad, true);
}

LossBreakdown Objective::loss(const NetParams& theta, std::span<const PointRef> subset) const {
  return run(theta, subset, {}, false);
}

LossBreakdown Objective::loss_grad(const NetParams& theta, std::span<const PointRef> subset,
                                   std::span<double> grad) const {
  return run(theta, subset, grad, true);
}

LossBreakdown Objective::run(const NetParams& theta, std::span<const PointRef> subset_in,
                             std::span<double> grad, bool want_grad) const {
  if (theta.dims != spec_.dims || theta.outputs != spec_.outputs) {
    throw ConfigError(spec_.id + ": network shape does not match the problem");
  }
  if (want_grad && grad.size() != theta.size()) throw ConfigError("gradient buffer has the wrong length");

  std::vector<PointRef> subset(subset_in.begin(), subset_in.end());
  std::sort(subset.begin(), subset.end());

  std::vector<Chunk> chunks;
  for (std::size_t i = 0; i < subset.size();) {
    std::size_t j = i;
    while (j < subset.size() && subset[j].group == subset[i].group && j - i < static_cast<std::size_t>(kChunk)) ++j;
    chunks.push_back({subset[i].group, i, j});
    i = j;
  }

  const kernels::Packed packed(theta);
  std::vector<ChunkResult> results(chunks.size());
  const Impl& im = *impl_;

  auto work = [&](std::size_t c) {
    thread_local detail::Workspace ws;
    ChunkResult& res = results[c];
    if (want_grad) res.grad = kernels::GradAccum(packed);
    const Chunk& ch = chunks[c];
    for (std::size_t i = ch.begin; i < ch.end; ++i) {
      const PointRef ref = subset[i];
      const CollocationPoint* p;
      const detail::TermRunner* run;
      switch (ref.group) {
        case Group::Bulk:
          p = &pts_.bulk[ref.index];
          run = &im.runners[0];
          break;
        case Group::Initial:
          p = &pts_.initial[ref.index];
          run = &im.runners[static_cast<std::size_t>(im.initial_runner)];
          break;
        default:
          p = &pts_.boundary[ref.index];
          run = &im.runners[static_cast<std::size_t>(im.boundary_base + p->term)];
          break;
      }
      const double ss = detail::run_point(*run, packed, *im.ks, *p, ws, want_grad ? &res.grad : nullptr);
      if (!std::isfinite(ss)) {
        std::ostringstream msg;
        msg << spec_.id << ": non-finite " << group_name(ref.group) << " residual at point "
            << ref.index << " (";
        for (int a = 0; a < spec_.dims; ++a) msg << (a ? "," : "") << p->x[static_cast<std::size_t>(a)];
        msg << ")";
        for (int m = 0; m < run->term->arity; ++m) {
          if (!std::isfinite(ws.r[static_cast<std::size_t>(m)])) {
            msg << ", component " << m << " of " << run->term->name;
            break;
          }
        }
        res.error = msg.str();
        return;
      }
      res.ss += ss;
      res.entries += run->term->arity;
    }
  };

  const int nthreads = std::min<int>(threads_, static_cast<int>(chunks.size()));
  if (nthreads <= 1) {
    for (std::size_t c = 0; c < chunks.size(); ++c) work(c);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t c = next++; c < chunks.size(); c = next++) work(c);
      });
    }
    for (auto& th : pool) th.join();
  }
  for (const auto& r : results) {
    if (!r.error.empty()) throw NumericError(r.error);
  }

  // Reduce each group's chunks; chunks are contiguous per group.
  double ss[3] = {0, 0, 0};
  long entries[3] = {0, 0, 0};
  int head[3] = {-1, -1, -1};
  for (std::size_t c = 0; c < chunks.size();) {
    std::size_t e = c;
    while (e < chunks.size() && chunks[e].group == chunks[c].group) ++e;
    pairwise(results, c, e, want_grad);
    const auto g = static_cast<std::size_t>(chunks[c].group);
    ss[g] = results[c].ss;
    entries[g] = results[c].entries;
    head[g] = static_cast<int>(c);
    c = e;
  }

  double part[3] = {0, 0, 0};
  for (int g = 0; g < 3; ++g) {
    if (entries[g] > 0) part[g] = std::sqrt(ss[g] / static_cast<double>(entries[g]));
  }
  LossBreakdown out;
  out.bulk = part[0];
  out.initial = part[1];
  out.boundary = part[2];
  out.has_initial = entries[1] > 0;
  out.has_boundary = entries[2] > 0;
  out.total = out.bulk + w_.alpha0 * out.initial + w_.alpha_boundary * out.boundary;
  if (!std::isfinite(out.total)) throw NumericError(spec_.id + ": non-finite loss");

  if (want_grad) {
    const double alpha[3] = {1.0, w_.alpha0, w_.alpha_boundary};
    kernels::GradAccum total(packed);
    for (int g = 0; g < 3; ++g) {
      // d sqrt(S/n) = dS / (2 n L) and dS = 2 sum r dr; zero when L = 0.
      if (head[g] < 0 || part[g] == 0.0) continue;
      kernels::GradAccum& gg = results[static_cast<std::size_t>(head[g])].grad;
      gg.scale(alpha[g] / (static_cast<double>(entries[g]) * part[g]));
      total.add(gg);
    }
    total.to_flat(theta, grad);
    for (const auto& blk : theta.blocks()) {
      for (std::size_t i = blk.begin; i < blk.end; ++i) {
        if (!std::isfinite(grad[i])) {
          throw NumericError(spec_.id + ": non-finite gradient in parameter block " + blk.name +
                             " (entry " + std::to_string(i - blk.begin) + ")");
        }
      }
    }
  }
  return out;
}

}  // namespace dnnsolve
