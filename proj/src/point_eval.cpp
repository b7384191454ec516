#include "point_eval.hpp"

#include <cmath>

namespace dnnsolve::detail {

TermRunner::TermRunner(const Term& t, int dims, int outputs_) : term(&t), outputs(outputs_) {
  plan[0] = kernels::IndexPlan(t.needs, dims);
  if (t.partner) plan[1] = kernels::IndexPlan(t.partner_needs, dims);
  if (slots(0) + slots(1) > Dual::kCapacity) {
    throw ConfigError("term " + t.name + " reads more partials than the dual type can carry");
  }
  if (plan[0].size() == 0) throw ConfigError("term " + t.name + " declares no partials");
}

void Workspace::prepare(const kernels::Packed& p, const TermRunner& run) {
  for (int s = 0; s < 2; ++s) {
    if (buf[s].np != p.np || buf[s].dims != p.dims || buf[s].nidx < run.plan[s].size()) {
      buf[s].reserve(p, run.plan[s]);
    }
    const auto n = static_cast<std::size_t>(run.slots(s));
    if (u[s].size() < n) {
      u[s].resize(n);
      ud[s].resize(n);
      lam[s].resize(n);
    }
  }
  const auto m = static_cast<std::size_t>(run.term->arity);
  if (r.size() < m) {
    r.resize(m);
    rd.resize(m);
  }
}

double run_point(const TermRunner& run, const kernels::Packed& p, const kernels::KernelSet& ks,
                 const CollocationPoint& pt, Workspace& ws, kernels::GradAccum* grad) {
  const Term& t = *run.term;
  ws.prepare(p, run);
  const bool want_grad = grad != nullptr;

  ks.factor_jets(p, pt.x.data(), run.plan[0], want_grad, ws.buf[0]);
  ks.forward(p, run.plan[0], ws.buf[0], ws.u[0].data());

  std::array<double, 3> px{};
  const bool partner = t.partner && t.partner(pt.x.data(), px.data());
  if (partner) {
    ks.factor_jets(p, px.data(), run.plan[1], want_grad, ws.buf[1]);
    ks.forward(p, run.plan[1], ws.buf[1], ws.u[1].data());
  }

  double ss = 0.0;
  if (!want_grad) {
    TermCtx<double> c;
    c.x_ = pt.x.data();
    c.n_ = pt.normal.data();
    c.px_ = px.data();
    c.u_[0] = ws.u[0].data();
    c.u_[1] = ws.u[1].data();
    c.slots_[0] = &run.plan[0].slot_of;
    c.slots_[1] = &run.plan[1].slot_of;
    c.outputs_ = run.outputs;
    c.has_partner_ = partner;
    t.eval(c, ws.r.data());
    for (int m = 0; m < t.arity; ++m) ss += ws.r[static_cast<std::size_t>(m)] * ws.r[static_cast<std::size_t>(m)];
    return ss;
  }

  const int n0 = run.slots(0);
  const int n1 = partner ? run.slots(1) : 0;
  for (int i = 0; i < n0; ++i) ws.ud[0][static_cast<std::size_t>(i)] = Dual::seeded(ws.u[0][static_cast<std::size_t>(i)], i);
  for (int i = 0; i < n1; ++i) ws.ud[1][static_cast<std::size_t>(i)] = Dual::seeded(ws.u[1][static_cast<std::size_t>(i)], n0 + i);

  TermCtx<Dual> c;
  c.x_ = pt.x.data();
  c.n_ = pt.normal.data();
  c.px_ = px.data();
  c.u_[0] = ws.ud[0].data();
  c.u_[1] = ws.ud[1].data();
  c.slots_[0] = &run.plan[0].slot_of;
  c.slots_[1] = &run.plan[1].slot_of;
  c.outputs_ = run.outputs;
  c.has_partner_ = partner;
  t.eval_dual(c, ws.rd.data());

  for (int i = 0; i < n0; ++i) ws.lam[0][static_cast<std::size_t>(i)] = 0.0;
  for (int i = 0; i < n1; ++i) ws.lam[1][static_cast<std::size_t>(i)] = 0.0;
  for (int m = 0; m < t.arity; ++m) {
    const Dual& rm = ws.rd[static_cast<std::size_t>(m)];
    const double v = rm.value();
    ws.r[static_cast<std::size_t>(m)] = v;
    ss += v * v;
    if (v == 0.0) continue;
    for (int i = 0; i < n0; ++i) ws.lam[0][static_cast<std::size_t>(i)] += v * rm.d(i);
    for (int i = 0; i < n1; ++i) ws.lam[1][static_cast<std::size_t>(i)] += v * rm.d(n0 + i);
  }
  if (!std::isfinite(ss)) return ss;
  ks.backward(p, run.plan[0], ws.buf[0], ws.lam[0].data(), *grad);
  if (partner) ks.backward(p, run.plan[1], ws.buf[1], ws.lam[1].data(), *grad);
  return ss;
}

}  // namespace dnnsolve::detail
