// dnnsolve: solve catalog or file-defined problems, tabulate benchmark runs
// and export the toy loss surfaces.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "dnnsolve/catalog.hpp"
#include "dnnsolve/landscape.hpp"
#include "dnnsolve/problem_io.hpp"
#include "dnnsolve/report.hpp"
#include "dnnsolve/solve.hpp"
#include "dnnsolve/network.hpp"
#include "dnnsolve/validate.hpp"

namespace fs = std::filesystem;
using namespace dnnsolve;

namespace {

constexpr int kBadArgs = 2;
constexpr int kAborted = 3;
constexpr double kPi = std::numbers::pi;

std::string valid_ids() {
  std::string s;
  for (const auto& id : list_cases()) s += (s.empty() ? "" : " ") + id;
  return s;
}

BenchmarkCase resolve_case(const std::string& id, const std::string& problem,
                           const std::map<std::string, double>& params) {
  if (!problem.empty()) {
    if (!params.empty()) throw ConfigError("--param applies to catalog cases; put params in the problem file");
    return load_problem(problem);
  }
  return get_case(id, params);
}

std::string fmt_log10(std::optional<double> v) {
  if (!v || !(*v > 0.0)) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", std::log10(*v));
  return buf;
}

std::string summary_line(const TrainingReport& rep) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1f", rep.wall_seconds);
  return rep.case_id + " log10(L)=" + fmt_log10(rep.loss.total) + " log10(r)=" + fmt_log10(rep.r) +
         " epochs=" + std::to_string(rep.adam_epochs + rep.bfgs_iters) + " time=" + buf + "s";
}

// ---------------------------------------------------------------- solve

struct SolveArgs {
  std::string id, problem, out = ".";
  std::uint64_t seed = 0;
  std::optional<int> neurons, adam_epochs, bfgs_max_iters;
  std::optional<double> alpha0, alphab;
  std::map<std::string, double> params;
  bool grid_dump = false, trace = false;
  int threads = 1;
};

int cmd_solve(const SolveArgs& a) {
  const BenchmarkCase c = resolve_case(a.id, a.problem, a.params);
  SolveOptions opt;
  opt.seed = a.seed;
  opt.neurons = a.neurons;
  opt.alpha0 = a.alpha0;
  opt.alpha_boundary = a.alphab;
  opt.adam_epochs = a.adam_epochs;
  if (a.bfgs_max_iters) opt.bfgs_max_iters = *a.bfgs_max_iters;
  opt.threads = a.threads;

  fs::create_directories(a.out);
  const TrainingReport rep = solve(c, opt);
  const fs::path dir(a.out);
  write_file((dir / "report.json").string(), report_json(rep, c));
  write_file((dir / "checkpoint.json").string(), checkpoint_json(rep.theta) + "\n");
  if (a.trace) write_file((dir / "trace.csv").string(), loss_trace_csv(rep));
  if (a.grid_dump && !rep.aborted) {
    if (has_reference(c)) {
      write_grid_csv((dir / "grid.csv").string(), rep.theta, c, reference_for(c));
    } else {
      std::cerr << c.id << ": no reference solution, grid dump skipped\n";
    }
  }
  std::cout << summary_line(rep) << "\n";
  if (rep.aborted) {
    std::cerr << "training aborted: " << rep.message << "\n";
    return kAborted;
  }
  return 0;
}

// ---------------------------------------------------------------- bench

struct BenchArgs {
  std::string dims = "all", format = "md", out;
  int seeds = 1;
  int threads = 1;
  std::vector<std::string> only, skip;
};

std::optional<double> median(std::vector<double> v) {
  if (v.empty()) return std::nullopt;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::optional<double> median_log10(const std::vector<std::optional<double>>& v) {
  std::vector<double> logs;
  for (const auto& x : v) {
    if (!x) return std::nullopt;
    logs.push_back(*x > 0.0 ? std::log10(*x) : -HUGE_VAL);
  }
  return median(logs);
}

int cmd_bench(const BenchArgs& a) {
  int dims = 0;
  if (a.dims != "all") dims = std::stoi(a.dims);
  if (a.seeds < 1) throw ConfigError("--seeds must be >= 1");
  std::vector<std::string> ids = list_cases(dims);
  if (!a.only.empty()) {
    for (const auto& id : a.only) get_case(id);
    std::erase_if(ids, [&](const std::string& id) { return std::find(a.only.begin(), a.only.end(), id) == a.only.end(); });
  }
  std::erase_if(ids, [&](const std::string& id) { return std::find(a.skip.begin(), a.skip.end(), id) != a.skip.end(); });

  const bool csv = a.format == "csv";
  if (!csv && a.format != "md") throw ConfigError("--format must be md or csv");
  std::ostringstream table;
  const std::vector<std::string> head = {"case", "time_s", "epochs", "log10_L", "log10_L_bulk", "log10_L_initial",
                                         "log10_L_boundary", "log10_r", "paper_L", "paper_r", "delta_L", "delta_r"};
  auto emit = [&](const std::vector<std::string>& cells) {
    if (csv) {
      for (std::size_t i = 0; i < cells.size(); ++i) table << cells[i] << (i + 1 < cells.size() ? "," : "\n");
    } else {
      table << "|";
      for (const auto& c : cells) table << " " << c << " |";
      table << "\n";
    }
  };
  auto num = [](std::optional<double> v, int prec) {
    if (!v) return std::string("n/a");
    if (std::isinf(*v)) return std::string(*v < 0 ? "-inf" : "inf");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.*f", prec, *v);
    return std::string(buf);
  };
  emit(head);
  if (!csv) emit(std::vector<std::string>(head.size(), "---"));

  bool any_abort = false;
  for (const auto& id : ids) {
    const BenchmarkCase c = get_case(id);
    std::vector<double> times, epochs;
    std::vector<std::optional<double>> L, Lb, L0, Ld, r;
    for (int s = 0; s < a.seeds; ++s) {
      SolveOptions opt;
      opt.seed = static_cast<std::uint64_t>(s);
      opt.threads = a.threads;
      TrainingReport rep;
      try {
        rep = solve(c, opt);
      } catch (const NumericError& e) {
        std::cerr << id << " seed=" << s << " ABORTED: " << e.what() << "\n";
        any_abort = true;
        continue;
      }
      std::cerr << summary_line(rep) << " seed=" << s << (rep.aborted ? " ABORTED: " + rep.message : "") << "\n";
      any_abort = any_abort || rep.aborted;
      times.push_back(rep.wall_seconds);
      epochs.push_back(rep.adam_epochs + rep.bfgs_iters);
      L.push_back(rep.loss.total);
      Lb.push_back(rep.loss.bulk);
      L0.push_back(rep.loss.has_initial ? std::optional<double>(rep.loss.initial) : std::nullopt);
      Ld.push_back(rep.loss.has_boundary ? std::optional<double>(rep.loss.boundary) : std::nullopt);
      r.push_back(rep.r);
    }
    const auto mL = median_log10(L), mr = median_log10(r);
    const auto& ref = c.reference;
    auto delta = [](std::optional<double> run, std::optional<double> paper) -> std::optional<double> {
      if (!run || !paper) return std::nullopt;
      return *run - *paper;
    };
    emit({id, num(median(times), 1), num(median(epochs), 0), num(mL, 2), num(median_log10(Lb), 2),
          num(median_log10(L0), 2), num(median_log10(Ld), 2), num(mr, 2), num(ref.L, 1), num(ref.r, 1),
          num(delta(mL, ref.L), 2), num(delta(mr, ref.r), 2)});
  }
  if (a.out.empty()) {
    std::cout << table.str();
  } else {
    write_file(a.out, table.str());
  }
  return any_abort ? kAborted : 0;
}

// ------------------------------------------------------------ landscape

struct LandscapeArgs {
  std::string toy = "ho", grid, out;
  std::optional<double> dt;
  double alpha0 = 1.0, alphab = 1.0, d = 2.0;
  bool cone = false;
  int samples = 0;
};

std::vector<landscape::Axis> parse_grid(const std::string& spec, const std::vector<std::string>& names) {
  std::map<std::string, landscape::Axis> given;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError("bad grid entry '" + item + "'; expected name=lo:hi:n");
    const std::string name = item.substr(0, eq);
    if (std::find(names.begin(), names.end(), name) == names.end()) {
      std::string all;
      for (const auto& n : names) all += " " + n;
      throw ConfigError("unknown grid axis '" + name + "'; axes are" + all);
    }
    given[name] = landscape::parse_axis(name, item.substr(eq + 1));
  }
  std::vector<landscape::Axis> axes;
  for (const auto& n : names) {
    if (!given.count(n)) throw ConfigError("grid spec lacks axis " + n);
    axes.push_back(given[n]);
  }
  return axes;
}

std::vector<double> axis_values(const landscape::Axis& a) {
  std::vector<double> v;
  for (int i = 0; i < a.n; ++i) v.push_back(a.at(i));
  return v;
}

int cmd_landscape(const LandscapeArgs& a) {
  const std::string out = a.out.empty() ? (a.toy == "ho" ? "ho_loss.csv" : "wave") : a.out;
  if (a.toy == "ho") {
    const auto axes = parse_grid(a.grid.empty() ? "omega=0.1:47.12:200,phi=-3.1416:3.1416:101" : a.grid, {"omega", "phi"});
    if (a.dt && !(*a.dt > 0.0 && *a.dt <= 1.0)) throw ConfigError("--dt must lie in (0, 1]");
    auto eval = [&](double w, double p) {
      return a.dt ? landscape::ho_loss_sampled(w, p, a.d, a.alpha0, *a.dt) : landscape::ho_loss(w, p, a.d, a.alpha0);
    };
    landscape::surface_export(out, axes, {"L_bulk", "L_initial", "L"}, [&](std::span<const double> x) {
      const auto l = eval(x[0], x[1]);
      return std::vector<double>{l.bulk, l.initial, l.total};
    });
    std::vector<double> line;
    for (double w : axis_values(axes[0])) line.push_back(eval(w, 0.0).total);
    std::cout << "wrote " << out << "; local minima along omega at phi=0: " << landscape::count_local_minima(line) << "\n";
    return 0;
  }
  if (a.toy != "wave") throw ConfigError("--toy must be ho or wave");

  const LossWeights w{a.alpha0, a.alphab};
  const char* parts[3] = {"bulk", "initial", "boundary"};
  auto pick = [](const LossBreakdown& l, int k) { return k == 0 ? l.bulk : k == 1 ? l.initial : l.boundary; };
  // Phases at the minimum of the initial-condition loss.
  const double pt = kPi / 2, px = 0.0, py = 0.0;

  if (a.cone) {
    const auto axes = parse_grid(a.grid.empty() ? "wx=1.5708:20.42:201,wy=1.5708:20.42:201" : a.grid, {"wx", "wy"});
    for (int k = 0; k < 3; ++k) {
      const std::string path = out + "_cone_" + parts[k] + ".csv";
      landscape::surface_export(path, axes, {std::string("L_") + parts[k]}, [&](std::span<const double> x) {
        return std::vector<double>{pick(landscape::wave_toy_on_cone(x[0], x[1], pt, px, py, w), k)};
      });
      std::cout << "wrote " << path << "\n";
    }
    const auto wx = axis_values(axes[0]), wy = axis_values(axes[1]);
    std::vector<double> along_x, along_y;
    const double mid_y = wy[wy.size() / 2], mid_x = wx[wx.size() / 2];
    for (double v : wx) along_x.push_back(landscape::wave_toy_on_cone(v, mid_y, pt, px, py, w).boundary);
    for (double v : wy) along_y.push_back(landscape::wave_toy_on_cone(mid_x, v, pt, px, py, w).boundary);
    std::cout << "boundary-loss local minima on the cone: " << landscape::count_local_minima(along_x)
              << " along wx (wy=" << mid_y << "), " << landscape::count_local_minima(along_y) << " along wy (wx=" << mid_x
              << ")\n";
    return 0;
  }

  const auto axes = parse_grid(a.grid.empty() ? "wt=1:20:11,wx=1:20:11,wy=1:20:11" : a.grid, {"wt", "wx", "wy"});
  std::vector<LossBreakdown> sampled;
  if (a.samples > 0) {
    const auto t = axis_values(axes[0]), x = axis_values(axes[1]), y = axis_values(axes[2]);
    sampled = landscape::wave_toy_sampled_grid(t, x, y, pt, px, py, a.samples, 0, w, landscape::Points::Halton);
  }
  for (int k = 0; k < 3; ++k) {
    const std::string path = out + "_" + parts[k] + ".csv";
    std::size_t at = 0;
    landscape::surface_export(path, axes, {std::string("L_") + parts[k]}, [&](std::span<const double> x) {
      const LossBreakdown l = sampled.empty() ? landscape::wave_toy_losses({x[0], x[1], x[2], pt, px, py}, w) : sampled[at++];
      return std::vector<double>{pick(l, k)};
    });
    std::cout << "wrote " << path << "\n";
  }
  return 0;
}

// --------------------------------------------------------------- export

int cmd_export(const std::string& id, const std::map<std::string, double>& params, const std::string& out) {
  const BenchmarkCase c = resolve_case(id, "", params);
  const std::string text = problem_to_json(c) + "\n";
  if (out.empty()) {
    std::cout << text;
  } else {
    write_file(out, text);
  }
  return 0;
}

int cmd_list(int dims) {
  for (const auto& id : list_cases(dims)) std::cout << id << "  " << case_summary(id) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dnnsolve: physics-informed network solver for ODE and PDE benchmarks"};
  app.require_subcommand(1);

  SolveArgs sa;
  auto* solve_cmd = app.add_subcommand("solve", "train on one case and write report.json and checkpoint.json");
  auto* case_opt = solve_cmd->add_option("--case", sa.id, "catalog case id, e.g. B.3");
  auto* prob_opt = solve_cmd->add_option("--problem", sa.problem, "problem definition JSON file");
  case_opt->excludes(prob_opt);
  solve_cmd->add_option("--seed", sa.seed, "seed for initialization, sampling and shuffling");
  solve_cmd->add_option("--neurons", sa.neurons, "neurons per branch");
  solve_cmd->add_option("--alpha0", sa.alpha0, "initial-condition weight");
  solve_cmd->add_option("--alphab", sa.alphab, "boundary weight");
  solve_cmd->add_option("--adam-epochs", sa.adam_epochs, "ADAM epochs");
  solve_cmd->add_option("--bfgs-max-iters", sa.bfgs_max_iters, "BFGS iteration cap");
  solve_cmd->add_option("--param", sa.params, "catalog parameter override, name=value")->delimiter(',');
  solve_cmd->add_option("--out", sa.out, "output directory");
  solve_cmd->add_flag("--grid-dump", sa.grid_dump, "write grid.csv against the reference solution");
  solve_cmd->add_flag("--trace", sa.trace, "write trace.csv with the loss per epoch");
  solve_cmd->add_option("--threads", sa.threads, "worker threads per evaluation")->check(CLI::PositiveNumber);

  BenchArgs ba;
  auto* bench_cmd = app.add_subcommand("bench", "run every case of a dimension group and tabulate against the published reference values");
  bench_cmd->add_option("--dims", ba.dims, "1, 2, 3 or all")->check(CLI::IsMember({"1", "2", "3", "all"}));
  bench_cmd->add_option("--seeds", ba.seeds, "seeds per case; the table shows medians")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--format", ba.format, "md or csv")->check(CLI::IsMember({"md", "csv"}));
  bench_cmd->add_option("--out", ba.out, "write the table to a file");
  bench_cmd->add_option("--only", ba.only, "restrict to these ids");
  bench_cmd->add_option("--skip", ba.skip, "leave out these ids");
  bench_cmd->add_option("--threads", ba.threads, "worker threads per evaluation")->check(CLI::PositiveNumber);

  LandscapeArgs la;
  auto* land_cmd = app.add_subcommand("landscape", "export loss surfaces of the one-neuron toys");
  land_cmd->add_option("--toy", la.toy, "ho or wave")->check(CLI::IsMember({"ho", "wave"}));
  land_cmd->add_option("--grid", la.grid, "axes as name=lo:hi:n,...; ho: omega,phi; wave: wt,wx,wy (cone: wx,wy)");
  land_cmd->add_option("--dt", la.dt, "ho: sample the bulk on a grid of this step instead of the closed form");
  land_cmd->add_option("--alpha0", la.alpha0, "initial-condition weight");
  land_cmd->add_option("--alphab", la.alphab, "boundary weight (wave)");
  land_cmd->add_option("--amplitude", la.d, "ho: amplitude d");
  land_cmd->add_flag("--cone", la.cone, "wave: restrict to the zero set of the bulk loss");
  land_cmd->add_option("--samples", la.samples, "wave: Monte Carlo points per group instead of closed forms");
  land_cmd->add_option("--out", la.out, "CSV path (ho) or file prefix (wave)");

  std::string export_id, export_out;
  std::map<std::string, double> export_params;
  auto* export_cmd = app.add_subcommand("export", "write a catalog case as a problem definition file");
  export_cmd->add_option("--case", export_id, "catalog case id")->required();
  export_cmd->add_option("--param", export_params, "parameter override, name=value")->delimiter(',');
  export_cmd->add_option("--out", export_out, "output file (default stdout)");

  int list_dims = 0;
  auto* list_cmd = app.add_subcommand("list", "list catalog cases");
  list_cmd->add_option("--dims", list_dims, "1, 2 or 3 (default all)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kBadArgs;
  }

  try {
    if (*solve_cmd) {
      if (sa.id.empty() && sa.problem.empty()) throw ConfigError("solve needs --case or --problem\nvalid ids: " + valid_ids());
      return cmd_solve(sa);
    }
    if (*bench_cmd) return cmd_bench(ba);
    if (*land_cmd) return cmd_landscape(la);
    if (*export_cmd) return cmd_export(export_id, export_params, export_out);
    if (*list_cmd) return cmd_list(list_dims);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadArgs;
  } catch (const NumericError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kAborted;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadArgs;
  }
  return 0;
}
