#include "dnnsolve/report.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace dnnsolve {
namespace {

using ojson = nlohmann::ordered_json;

ojson number_or_null(bool has, double v) {
  if (!has || !std::isfinite(v)) return nullptr;
  return v;
}

ojson log10_or_null(bool has, double v) {
  if (!has || !(v > 0.0) || !std::isfinite(v)) return nullptr;
  return std::log10(v);
}

ojson number_or_null(const std::optional<double>& v) { return number_or_null(v.has_value(), v.value_or(0.0)); }
ojson log10_or_null(const std::optional<double>& v) { return log10_or_null(v.has_value(), v.value_or(0.0)); }

}  // namespace

RunSummary summarize(const TrainingReport& rep) {
  RunSummary s;
  s.seconds = rep.wall_seconds;
  s.epochs = rep.adam_epochs + rep.bfgs_iters;
  s.L = rep.loss.total;
  s.L_bulk = rep.loss.bulk;
  if (rep.loss.has_initial) s.L_initial = rep.loss.initial;
  if (rep.loss.has_boundary) s.L_boundary = rep.loss.boundary;
  s.r = rep.r;
  return s;
}

std::string report_json(const TrainingReport& rep, const BenchmarkCase& c) {
  ojson j;
  j["case"] = rep.case_id;
  j["seed"] = rep.seed;

  const RunConfig& cfg = rep.config;
  ojson config;
  config["neurons"] = cfg.neurons;
  config["counts"] = {{"bulk", cfg.counts.bulk}, {"boundary", cfg.counts.boundary}, {"initial", cfg.counts.initial}};
  config["alpha0"] = cfg.alphas.alpha0;
  config["alpha_boundary"] = cfg.alphas.alpha_boundary;
  config["adam_epochs"] = cfg.adam_epochs;
  config["batch_size"] = cfg.batch_size;
  config["lr0"] = cfg.lr0;
  config["bfgs_max_iters"] = cfg.bfgs_max_iters;
  config["bfgs_grad_tol"] = cfg.bfgs_grad_tol;
  config["threads"] = cfg.threads;
  if (!c.params.empty()) config["params"] = c.params;
  j["config"] = config;
  j["corrections_applied"] = rep.corrections;

  const LossBreakdown& L = rep.loss;
  ojson loss;
  loss["bulk"] = number_or_null(true, L.bulk);
  loss["initial"] = number_or_null(L.has_initial, L.initial);
  loss["boundary"] = number_or_null(L.has_boundary, L.boundary);
  loss["total"] = number_or_null(true, L.total);
  loss["log10"] = {{"bulk", log10_or_null(true, L.bulk)},
                   {"initial", log10_or_null(L.has_initial, L.initial)},
                   {"boundary", log10_or_null(L.has_boundary, L.boundary)},
                   {"total", log10_or_null(true, L.total)}};
  j["loss"] = loss;
  j["r"] = number_or_null(rep.r);
  j["log10_r"] = log10_or_null(rep.r);
  j["r_source"] = rep.r ? ojson(rep.r_source) : ojson(nullptr);
  j["epochs"] = {{"adam", rep.adam_epochs}, {"bfgs", rep.bfgs_iters}, {"total", rep.adam_epochs + rep.bfgs_iters}};
  j["wall_seconds"] = rep.wall_seconds;
  j["bfgs_restarts"] = rep.bfgs_restarts;
  j["stop_reason"] = rep.stop_reason;
  if (!rep.message.empty()) j["message"] = rep.message;

  if (c.reference.L || c.reference.r) {
    ojson rows = ojson::array();
    for (const auto& row : compare_report(summarize(rep), c)) {
      ojson o;
      o["column"] = row.column;
      o["run"] = number_or_null(row.run);
      o["paper"] = number_or_null(row.paper);
      o["delta"] = number_or_null(row.delta);
      if (!row.note.empty()) o["note"] = row.note;
      rows.push_back(o);
    }
    j["comparison"] = rows;
  }
  return j.dump(2) + "\n";
}

std::string loss_trace_csv(const TrainingReport& rep) {
  std::ostringstream out;
  out.precision(17);
  out << "epoch,loss,lr\n";
  for (const auto& e : rep.adam_trace) out << e.epoch + 1 << ',' << e.loss << ',' << e.lr << '\n';
  int k = rep.adam_epochs;
  for (double f : rep.bfgs_trace) out << ++k << ',' << f << ",\n";
  return out.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  out << text;
  if (!out) throw ConfigError("write failed for " + path);
}

}  // namespace dnnsolve
