#pragma once

// Kernel bodies shared by the scalar and AVX2 translation units.
//
// Written once against a tiny vector interface V (load/store/set1, + - * /,
// abs, select, sin/cos/exp, hsum). kernels_scalar.cpp instantiates it with
// a one-lane double wrapper over libm, kernels_avx2.cpp with a __m256d
// wrapper over glibc's vector math library. Arithmetic is the same sequence
// of IEEE operations in both; the vector sin/cos/exp differ from libm by a
// few ulp and the lane reductions in forward() differ in association order.

#include <cmath>

#include "dnnsolve/diffengine.hpp"
#include "dnnsolve/kernels.hpp"

namespace dnnsolve::kernels::detail {

template <class V>
struct Impl {
  using Fam = PointBuffers::Family;

  static void factor_jets(const Packed& p, const double* x, const IndexPlan& plan, bool derivs,
                          PointBuffers& buf) {
    const int np = p.np;
    for (int j = 0; j < p.dims; ++j) {
      const int mo = plan.max_order[static_cast<std::size_t>(j)];
      const double xj = x[j];
      const std::size_t row = static_cast<std::size_t>(j) * static_cast<std::size_t>(np);
      double* sn = buf.raw_at(0, j);
      double* cs = buf.raw_at(1, j);
      double* sg = buf.raw_at(2, j);
      double* qq = buf.raw_at(3, j);
      double* tt = buf.raw_at(4, j);
      for (int k = 0; k < np; k += V::W) {
        const std::size_t at = row + static_cast<std::size_t>(k);
        const V z = V::load(p.omega.data() + at) * V::set1(xj) + V::load(p.phi.data() + at);
        V::sin(z).store(sn + k);
        V::cos(z).store(cs + k);
        // sigma from e = exp(-|y|), which cannot overflow; q = e / (1 + e)^2
        // and 1 - 2 sigma flips sign with y.
        const V y = V::load(p.w.data() + at) * V::set1(xj) + V::load(p.b.data() + at);
        const V e = V::exp(V::set1(0.0) - V::abs(y));
        const V inv = V::set1(1.0) / (V::set1(1.0) + e);
        (e * inv * inv).store(qq + k);
        const auto pos = y.nonneg();
        V::select(pos, inv, e * inv).store(sg + k);
        V::select(pos, (e - V::set1(1.0)) * inv, (V::set1(1.0) - e) * inv).store(tt + k);
      }

      switch (mo) {
        case 0:
          derivs ? jets<0, true>(p, j, xj, buf) : jets<0, false>(p, j, xj, buf);
          break;
        case 1:
          derivs ? jets<1, true>(p, j, xj, buf) : jets<1, false>(p, j, xj, buf);
          break;
        case 2:
          derivs ? jets<2, true>(p, j, xj, buf) : jets<2, false>(p, j, xj, buf);
          break;
        default:
          derivs ? jets<3, true>(p, j, xj, buf) : jets<3, false>(p, j, xj, buf);
          break;
      }
    }
  }

  static void forward(const Packed& p, const IndexPlan& plan, PointBuffers& buf, double* u) {
    const int np = p.np;
    for (int slot = 0; slot < plan.size(); ++slot) {
      const MultiIndex& mi = plan.indices[static_cast<std::size_t>(slot)];
      double* pf = buf.prod(0, slot);
      double* ps = buf.prod(1, slot);
      double* pg = buf.prod(2, slot);
      for (int k = 0; k < np; k += V::W) {
        V a = V::load(buf.fam(Fam::F, 0, mi.order(0)) + k);
        V b = V::load(buf.fam(Fam::S, 0, mi.order(0)) + k);
        V c = V::load(buf.fam(Fam::G, 0, mi.order(0)) + k);
        for (int j = 1; j < p.dims; ++j) {
          a = a * V::load(buf.fam(Fam::F, j, mi.order(j)) + k);
          b = b * V::load(buf.fam(Fam::S, j, mi.order(j)) + k);
          c = c * V::load(buf.fam(Fam::G, j, mi.order(j)) + k);
        }
        a.store(pf + k);
        b.store(ps + k);
        c.store(pg + k);
      }
      for (int l = 0; l < p.outputs; ++l) {
        const std::size_t row = static_cast<std::size_t>(l) * static_cast<std::size_t>(np);
        V acc = V::set1(0.0);
        for (int k = 0; k < np; k += V::W) {
          acc = acc + V::load(p.dF.data() + row + k) * V::load(pf + k) +
                V::load(p.dS.data() + row + k) * V::load(ps + k) +
                V::load(p.dG.data() + row + k) * V::load(pg + k);
        }
        double v = acc.hsum();
        if (mi.is_zero()) v += p.a[static_cast<std::size_t>(l)];
        u[static_cast<std::size_t>(slot) * static_cast<std::size_t>(p.outputs) +
          static_cast<std::size_t>(l)] = v;
      }
    }
  }

  static void backward(const Packed& p, const IndexPlan& plan, const PointBuffers& buf,
                       const double* lambda, GradAccum& g) {
    const int np = p.np;
    const int no = p.outputs;
    for (int slot = 0; slot < plan.size(); ++slot) {
      const MultiIndex& mi = plan.indices[static_cast<std::size_t>(slot)];
      const double* lam = lambda + static_cast<std::size_t>(slot) * static_cast<std::size_t>(no);
      bool any = false;
      for (int l = 0; l < no; ++l) any = any || lam[l] != 0.0;
      if (!any) continue;
      if (mi.is_zero()) {
        for (int l = 0; l < no; ++l) g.a[static_cast<std::size_t>(l)] += lam[l];
      }

      const double* pf = buf.prod(0, slot);
      const double* ps = buf.prod(1, slot);
      const double* pg = buf.prod(2, slot);
      for (int k = 0; k < np; k += V::W) {
        const V vf = V::load(pf + k);
        const V vs = V::load(ps + k);
        const V vg = V::load(pg + k);
        V cF = V::set1(0.0), cS = V::set1(0.0), cG = V::set1(0.0);
        for (int l = 0; l < no; ++l) {
          if (lam[l] == 0.0) continue;
          const std::size_t row = static_cast<std::size_t>(l) * static_cast<std::size_t>(np);
          const V lv = V::set1(lam[l]);
          cF = cF + lv * V::load(p.dF.data() + row + k);
          cS = cS + lv * V::load(p.dS.data() + row + k);
          cG = cG + lv * V::load(p.dG.data() + row + k);
          (V::load(g.dF.data() + row + k) + lv * vf).store(g.dF.data() + row + k);
          (V::load(g.dS.data() + row + k) + lv * vs).store(g.dS.data() + row + k);
          (V::load(g.dG.data() + row + k) + lv * vg).store(g.dG.data() + row + k);
        }
        for (int j = 0; j < p.dims; ++j) {
          V ef = V::set1(1.0), es = V::set1(1.0), eg = V::set1(1.0);
          for (int i = 0; i < p.dims; ++i) {
            if (i == j) continue;
            ef = ef * V::load(buf.fam(Fam::F, i, mi.order(i)) + k);
            es = es * V::load(buf.fam(Fam::S, i, mi.order(i)) + k);
            eg = eg * V::load(buf.fam(Fam::G, i, mi.order(i)) + k);
          }
          const int o = mi.order(j);
          const V ff = cF * ef;
          const V ss = cS * es;
          const V gg = cG * eg;
          const std::size_t off = static_cast<std::size_t>(j) * static_cast<std::size_t>(np) +
                                  static_cast<std::size_t>(k);
          (V::load(g.omega.data() + off) + ff * V::load(buf.fam(Fam::Fom, j, o) + k) +
           gg * V::load(buf.fam(Fam::Gom, j, o) + k))
              .store(g.omega.data() + off);
          (V::load(g.phi.data() + off) + ff * V::load(buf.fam(Fam::Fph, j, o) + k) +
           gg * V::load(buf.fam(Fam::Gph, j, o) + k))
              .store(g.phi.data() + off);
          (V::load(g.w.data() + off) + ss * V::load(buf.fam(Fam::Sw, j, o) + k) +
           gg * V::load(buf.fam(Fam::Gw, j, o) + k))
              .store(g.w.data() + off);
          (V::load(g.b.data() + off) + ss * V::load(buf.fam(Fam::Sb, j, o) + k) +
           gg * V::load(buf.fam(Fam::Gb, j, o) + k))
              .store(g.b.data() + off);
        }
      }
    }
  }

  static KernelSet table() { return KernelSet{&factor_jets, &forward, &backward}; }

 private:
  // Jets to order MO of the sin, sigmoid and product factors along axis j,
  // plus their parameter derivatives when DERIVS.
  template <int MO, bool DERIVS>
  static void jets(const Packed& p, int j, double xj, PointBuffers& buf) {
    const int np = p.np;
    const std::size_t row = static_cast<std::size_t>(j) * static_cast<std::size_t>(np);
    const double* sn = buf.raw_at(0, j);
    const double* cs = buf.raw_at(1, j);
    const double* sg = buf.raw_at(2, j);
    const double* qq = buf.raw_at(3, j);
    const double* tt = buf.raw_at(4, j);
    const V xv = V::set1(xj);
    const V zero = V::set1(0.0);
    const V one = V::set1(1.0);
    for (int k = 0; k < np; k += V::W) {
      const V om = V::load(p.omega.data() + row + k);
      const V wv = V::load(p.w.data() + row + k);
      const V s = V::load(sn + k);
      const V c = V::load(cs + k);
      const V sd[5] = {s, c, zero - s, zero - c, s};
      const V opow[4] = {one, om, om * om, om * om * om};
      const V wpow[4] = {one, wv, wv * wv, wv * wv * wv};

      const V sig = V::load(sg + k);
      const V q = V::load(qq + k);
      const V t = V::load(tt + k);
      // sigma^(n): sigma, q, q(1-2s), q(1-6q), q(1-2s)(1-12q)
      const V qt = q * t;
      const V dd[5] = {sig, q, qt, q * (one - V::set1(6.0) * q),
                       qt * (one - V::set1(12.0) * q)};

      V f[4], sv[4], fom[4], fph[4], sw[4], sb[4];
      for (int o = 0; o <= MO; ++o) {
        f[o] = opow[o] * sd[o];
        sv[o] = wpow[o] * dd[o];
        if constexpr (DERIVS) {
          fph[o] = opow[o] * sd[o + 1];
          sb[o] = wpow[o] * dd[o + 1];
          const V xo = xv * opow[o] * sd[o + 1];
          const V xw = xv * wpow[o] * dd[o + 1];
          if (o > 0) {
            const V ov = V::set1(static_cast<double>(o));
            fom[o] = ov * opow[o - 1] * sd[o] + xo;
            sw[o] = ov * wpow[o - 1] * dd[o] + xw;
          } else {
            fom[o] = xo;
            sw[o] = xw;
          }
        }
      }
      for (int o = 0; o <= MO; ++o) {
        f[o].store(buf.fam(Fam::F, j, o) + k);
        sv[o].store(buf.fam(Fam::S, j, o) + k);
        leibniz(f, sv, o).store(buf.fam(Fam::G, j, o) + k);
        if constexpr (DERIVS) {
          fom[o].store(buf.fam(Fam::Fom, j, o) + k);
          fph[o].store(buf.fam(Fam::Fph, j, o) + k);
          sw[o].store(buf.fam(Fam::Sw, j, o) + k);
          sb[o].store(buf.fam(Fam::Sb, j, o) + k);
          leibniz(fom, sv, o).store(buf.fam(Fam::Gom, j, o) + k);
          leibniz(fph, sv, o).store(buf.fam(Fam::Gph, j, o) + k);
          leibniz(f, sw, o).store(buf.fam(Fam::Gw, j, o) + k);
          leibniz(f, sb, o).store(buf.fam(Fam::Gb, j, o) + k);
        }
      }
    }
  }

  // Order-o coefficient of the product of two jets (Leibniz rule).
  static V leibniz(const V* a, const V* b, int o) {
    switch (o) {
      case 0:
        return a[0] * b[0];
      case 1:
        return a[1] * b[0] + a[0] * b[1];
      case 2:
        return a[2] * b[0] + V::set1(2.0) * (a[1] * b[1]) + a[0] * b[2];
      default:
        return a[3] * b[0] + V::set1(3.0) * (a[2] * b[1]) + V::set1(3.0) * (a[1] * b[2]) +
               a[0] * b[3];
    }
  }
};

}  // namespace dnnsolve::kernels::detail
