#include "dnnsolve/problem_io.hpp"

#include <cmath>
#include <fstream>
#include <memory>
#include <numbers>
#include <set>
#include <sstream>

#include "json.hpp"

namespace dnnsolve {
namespace {

using nlohmann::json;
using ojson = nlohmann::ordered_json;

struct Expr {
  enum Op { Const, X, Normal, U, Add, Sub, Mul, Div, Neg, Pow, Sin, Cos, Exp };
  Op op = Const;
  double value = 0.0;
  int index = 0;  // coordinate, normal component or output
  std::array<int, 3> orders{};
  std::vector<Expr> args;
  bool reads_u = false;
};

[[noreturn]] void bad(const std::string& what, const json& at) {
  throw ConfigError("problem file: " + what + " at " + at.dump());
}

int small_int(const json& j, int lo, int hi, const char* what) {
  if (!j.is_number_integer()) bad(std::string(what) + " must be an integer", j);
  const int v = j.get<int>();
  if (v < lo || v > hi) bad(std::string(what) + " out of range", j);
  return v;
}

Expr parse_expr(const json& j, int dims, int outputs) {
  Expr e;
  if (j.is_number()) {
    e.value = j.get<double>();
    return e;
  }
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "pi") {
      e.value = std::numbers::pi;
      return e;
    }
    static const char* names[3] = {"t", "x", "y"};
    for (int i = 0; i < dims; ++i) {
      if (s == names[i]) {
        e.op = Expr::X;
        e.index = i;
        return e;
      }
    }
    bad("unknown symbol '" + s + "'", j);
  }
  if (!j.is_array() || j.empty() || !j[0].is_string()) bad("expected a number, symbol or [op, ...]", j);
  const auto op = j[0].get<std::string>();
  const std::size_t n = j.size() - 1;

  if (op == "x" || op == "n") {
    if (n != 1) bad(op + " takes one index", j);
    e.op = op == "x" ? Expr::X : Expr::Normal;
    e.index = small_int(j[1], 0, dims - 1, "coordinate index");
    return e;
  }
  if (op == "u") {
    if (n < 1 || n > 2) bad("u takes an output and optional orders", j);
    e.op = Expr::U;
    e.reads_u = true;
    e.index = small_int(j[1], 0, outputs - 1, "output index");
    if (n == 2) {
      if (!j[2].is_array() || j[2].size() > static_cast<std::size_t>(dims)) bad("orders must be a list of up to dims entries", j);
      int total = 0;
      for (std::size_t a = 0; a < j[2].size(); ++a) {
        e.orders[a] = small_int(j[2][a], 0, 3, "derivative order");
        total += e.orders[a];
      }
      if (total > 3) bad("partials are limited to total order 3", j);
    }
    return e;
  }

  struct Spec {
    const char* name;
    Expr::Op op;
    std::size_t min_args, max_args;
  };
  static const Spec ops[] = {{"+", Expr::Add, 2, 64}, {"*", Expr::Mul, 2, 64}, {"-", Expr::Sub, 1, 2},
                             {"/", Expr::Div, 2, 2},  {"pow", Expr::Pow, 2, 2}, {"sin", Expr::Sin, 1, 1},
                             {"cos", Expr::Cos, 1, 1}, {"exp", Expr::Exp, 1, 1}};
  for (const auto& s : ops) {
    if (op != s.name) continue;
    if (n < s.min_args || n > s.max_args) bad("wrong number of arguments for " + op, j);
    e.op = s.op == Expr::Sub && n == 1 ? Expr::Neg : s.op;
    for (std::size_t i = 1; i <= n; ++i) {
      e.args.push_back(parse_expr(j[i], dims, outputs));
      e.reads_u = e.reads_u || e.args.back().reads_u;
    }
    if (e.op == Expr::Pow && e.args[1].reads_u) bad("pow exponent may not depend on u", j);
    return e;
  }
  bad("unknown operator '" + op + "'", j);
}

template <class T>
T eval_expr(const Expr& e, const TermCtx<T>& c) {
  using std::cos;
  using std::exp;
  using std::pow;
  using std::sin;
  switch (e.op) {
    case Expr::Const:
      return T(e.value);
    case Expr::X:
      return T(c.x(e.index));
    case Expr::Normal:
      return T(c.normal(e.index));
    case Expr::U:
      return c.u(e.index, e.orders[0], e.orders[1], e.orders[2]);
    case Expr::Add: {
      T s = eval_expr(e.args[0], c);
      for (std::size_t i = 1; i < e.args.size(); ++i) s = s + eval_expr(e.args[i], c);
      return s;
    }
    case Expr::Mul: {
      T s = eval_expr(e.args[0], c);
      for (std::size_t i = 1; i < e.args.size(); ++i) s = s * eval_expr(e.args[i], c);
      return s;
    }
    case Expr::Sub:
      return eval_expr(e.args[0], c) - eval_expr(e.args[1], c);
    case Expr::Div:
      return eval_expr(e.args[0], c) / eval_expr(e.args[1], c);
    case Expr::Neg:
      return -eval_expr(e.args[0], c);
    case Expr::Pow: {
      // The exponent never reads u, so a plain double context suffices.
      TermCtx<double> plain;
      plain.x_ = c.x_;
      plain.n_ = c.n_;
      return pow(eval_expr(e.args[0], c), eval_expr(e.args[1], plain));
    }
    case Expr::Sin:
      return sin(eval_expr(e.args[0], c));
    case Expr::Cos:
      return cos(eval_expr(e.args[0], c));
    case Expr::Exp:
      return exp(eval_expr(e.args[0], c));
  }
  return T(0.0);
}

void collect_needs(const Expr& e, int dims, std::set<std::array<int, 3>>& out) {
  if (e.op == Expr::U) out.insert(e.orders);
  for (const auto& a : e.args) collect_needs(a, dims, out);
}

Term term_from_json(const std::string& name, const json& j, int dims, int outputs) {
  if (!j.is_array() || j.empty()) bad(name + " must be a non-empty list of expressions", j);
  auto exprs = std::make_shared<std::vector<Expr>>();
  std::set<std::array<int, 3>> seen;
  for (const auto& item : j) {
    exprs->push_back(parse_expr(item, dims, outputs));
    collect_needs(exprs->back(), dims, seen);
  }
  if (seen.empty()) bad(name + " never reads u", j);
  std::vector<MultiIndex> needs;
  for (const auto& o : seen) needs.push_back(MultiIndex::from_span(std::span<const int>(o.data(), static_cast<std::size_t>(dims))));
  return make_term(name, static_cast<int>(exprs->size()), needs, [exprs](const auto& c, auto* r) {
    for (std::size_t m = 0; m < exprs->size(); ++m) r[m] = eval_expr((*exprs)[m], c);
  });
}

Domain domain_from_json(const json& j, int dims) {
  if (j.contains("box")) {
    std::vector<Extent> ext;
    for (const auto& e : j.at("box")) {
      if (!e.is_array() || e.size() != 2) bad("box extents are [lo, hi] pairs", e);
      ext.push_back({e[0].get<double>(), e[1].get<double>()});
    }
    if (static_cast<int>(ext.size()) != dims) bad("box has the wrong number of extents", j);
    return Domain::box(std::move(ext));
  }
  if (j.contains("disk")) {
    const auto& d = j.at("disk");
    const auto c = d.at("center");
    if (dims != 2 || c.size() != 2) bad("disks are two-dimensional", j);
    return Domain::disk({c[0].get<double>(), c[1].get<double>()}, d.at("radius").get<double>());
  }
  bad("domain needs \"box\" or \"disk\"", j);
}

ojson domain_to_json(const Domain& d) {
  ojson out;
  if (d.kind == DomainKind::Disk) {
    out["disk"] = {{"center", {d.center[0], d.center[1]}}, {"radius", d.radius}};
  } else {
    ojson box = ojson::array();
    for (const auto& e : d.extents) box.push_back({e.first, e.second});
    out["box"] = box;
  }
  return out;
}

bool same_domain(const Domain& a, const Domain& b) {
  if (a.kind != b.kind || a.extents.size() != b.extents.size()) return false;
  for (std::size_t i = 0; i < a.extents.size(); ++i) {
    if (a.extents[i] != b.extents[i]) return false;
  }
  return a.kind == DomainKind::Box || (a.center == b.center && a.radius == b.radius);
}

CaseDefaults group_defaults(int dims) {
  switch (dims) {
    case 1:
      return {35, Counts{2000, 0, 1}, LossWeights{1.0, 1.0}, 150};
    case 2:
      return {10, Counts{1000, 200, 200}, LossWeights{10.0, 1.0}, 210};
    default:
      return {10, Counts{1000, 1200, 500}, LossWeights{1.0, 1.0}, 210};
  }
}

void apply_hyper(const json& h, CaseDefaults& d) {
  if (!h.is_object()) bad("hyper must be an object", h);
  for (const auto& [k, v] : h.items()) {
    if (k == "N") {
      d.neurons = small_int(v, 1, 100000, "N");
    } else if (k == "adam_epochs") {
      d.adam_epochs = small_int(v, 0, 100000000, "adam_epochs");
    } else if (k == "counts") {
      for (const auto& [ck, cv] : v.items()) {
        int& slot = ck == "bulk" ? d.counts.bulk
                    : ck == "boundary" ? d.counts.boundary
                    : ck == "initial" ? d.counts.initial
                    : (bad("unknown count '" + ck + "'", v), d.counts.bulk);
        slot = small_int(cv, 0, 100000000, "count");
      }
    } else if (k == "alphas") {
      for (const auto& [ak, av] : v.items()) {
        if (!av.is_number()) bad("alphas are numbers", v);
        if (ak == "alpha0") {
          d.alphas.alpha0 = av.get<double>();
        } else if (ak == "alpha_boundary") {
          d.alphas.alpha_boundary = av.get<double>();
        } else {
          bad("unknown alpha '" + ak + "'", v);
        }
      }
    } else {
      bad("unknown hyperparameter '" + k + "'", h);
    }
  }
}

ojson hyper_to_json(const CaseDefaults& d) {
  ojson h;
  h["N"] = d.neurons;
  h["counts"] = {{"bulk", d.counts.bulk}, {"boundary", d.counts.boundary}, {"initial", d.counts.initial}};
  h["alphas"] = {{"alpha0", d.alphas.alpha0}, {"alpha_boundary", d.alphas.alpha_boundary}};
  h["adam_epochs"] = d.adam_epochs;
  return h;
}

std::vector<Face> faces_from_json(const json& j, const Domain& dom) {
  std::vector<Face> out;
  if (j.is_string() && j.get<std::string>() == "circle") {
    if (dom.kind != DomainKind::Disk) bad("\"circle\" needs a disk domain", j);
    out.push_back(Face::circle());
    return out;
  }
  if (!j.is_array() || j.empty()) bad("faces must be \"circle\" or a list of [axis, side]", j);
  for (const auto& f : j) {
    if (!f.is_array() || f.size() != 2) bad("faces are [axis, side] pairs", f);
    out.push_back(Face{small_int(f[0], 0, dom.dims() - 1, "face axis"), small_int(f[1], 0, 1, "face side")});
  }
  return out;
}

BenchmarkCase from_catalog(const json& j) {
  CaseParams overrides;
  if (j.contains("params")) {
    for (const auto& [k, v] : j.at("params").items()) overrides[k] = v.get<double>();
  }
  BenchmarkCase c = get_case(j.at("residual").get<std::string>(), overrides);
  if (j.contains("dims") && j.at("dims").get<int>() != c.spec.dims) bad("dims disagree with the catalog case", j.at("dims"));
  if (j.contains("outputs") && j.at("outputs").get<int>() != c.spec.outputs) bad("outputs disagree with the catalog case", j.at("outputs"));
  if (j.contains("domain") && !same_domain(domain_from_json(j.at("domain"), c.spec.dims), c.spec.domain)) {
    bad("domain disagrees with the catalog case", j.at("domain"));
  }
  if (j.contains("conditions")) bad("catalog cases bring their own conditions", j.at("conditions"));
  if (j.contains("hyper")) apply_hyper(j.at("hyper"), c.defaults);
  return c;
}

BenchmarkCase from_trees(const json& j) {
  BenchmarkCase c;
  c.id = j.at("id").get<std::string>();
  const int dims = small_int(j.at("dims"), 1, 3, "dims");
  const int outputs = small_int(j.value("outputs", json(1)), 1, 2, "outputs");
  ProblemSpec& s = c.spec;
  s.id = c.id;
  s.title = j.value("title", c.id);
  c.summary = s.title;
  s.dims = dims;
  s.outputs = outputs;
  s.domain = domain_from_json(j.at("domain"), dims);
  s.bulk = term_from_json("residual", j.at("residual"), dims, outputs);

  ojson def;
  def["residual"] = j.at("residual");
  if (j.contains("conditions")) {
    const auto& cond = j.at("conditions");
    def["conditions"] = cond;
    for (const auto& [k, v] : cond.items()) {
      if (k == "initial") {
        s.initial = term_from_json("initial", v, dims, outputs);
      } else if (k == "boundary") {
        int idx = 0;
        for (const auto& entry : v) {
          const std::string name = "boundary " + std::to_string(idx++);
          const Term t = term_from_json(name, entry.at("residual"), dims, outputs);
          for (const Face& f : faces_from_json(entry.at("faces"), s.domain)) s.boundary.push_back({f, t});
        }
      } else {
        bad("unknown condition group '" + k + "'", cond);
      }
    }
  }
  if (j.contains("solution")) {
    const auto& sol = j.at("solution");
    def["solution"] = sol;
    if (!sol.is_array() || static_cast<int>(sol.size()) != outputs) bad("solution needs one expression per output", sol);
    auto exprs = std::make_shared<std::vector<Expr>>();
    for (const auto& item : sol) {
      exprs->push_back(parse_expr(item, dims, outputs));
      if (exprs->back().reads_u) bad("solution may not read u", item);
    }
    c.analytic = [exprs](const double* x, double* out) {
      const std::array<double, 3> zero{};
      TermCtx<double> ctx;
      ctx.x_ = x;
      ctx.n_ = zero.data();
      for (std::size_t l = 0; l < exprs->size(); ++l) out[l] = eval_expr((*exprs)[l], ctx);
    };
    c.reference_kind = ReferenceKind::Analytic;
  } else {
    c.reference_kind = ReferenceKind::None;
  }
  c.definition = def.dump();

  c.defaults = group_defaults(dims);
  if (j.contains("hyper")) apply_hyper(j.at("hyper"), c.defaults);
  if (j.contains("notes")) c.notes = j.at("notes").get<std::vector<std::string>>();
  s.validate();
  return c;
}

}  // namespace

BenchmarkCase problem_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    if (!j.is_object()) throw ConfigError("problem file must hold a JSON object");
    if (!j.contains("residual")) throw ConfigError("problem file needs a \"residual\" field");
    return j.at("residual").is_string() ? from_catalog(j) : from_trees(j);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("problem file: ") + e.what());
  }
}

BenchmarkCase load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return problem_from_json(ss.str());
}

std::string problem_to_json(const BenchmarkCase& c) {
  ojson j;
  j["id"] = c.id;
  j["title"] = c.summary;
  j["dims"] = c.spec.dims;
  j["outputs"] = c.spec.outputs;
  j["domain"] = domain_to_json(c.spec.domain);
  if (c.definition.empty()) {
    j["residual"] = c.id;
    j["params"] = c.params;
  } else {
    const ojson def = ojson::parse(c.definition);
    for (const auto& [k, v] : def.items()) j[k] = v;
  }
  j["hyper"] = hyper_to_json(c.defaults);
  j["notes"] = c.notes;
  return j.dump(2);
}

}  // namespace dnnsolve
