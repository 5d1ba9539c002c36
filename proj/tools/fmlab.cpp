// fmlab: command-line front end.
//
//   fmlab dim --config dim.json [--out DIR]
//   fmlab verify --suite all [--out DIR] [--seed N]
//   fmlab experiment --config exp.json [--out DIR] [--seed N]
//
// Exit codes: 0 pass, 1 input error, 2 verification failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "fmlab/detail/parallel.hpp"
#include "fmlab/io.hpp"
#include "fmlab/verify.hpp"

namespace fs = std::filesystem;
using namespace fmlab;

namespace {

constexpr int exit_pass = 0;
constexpr int exit_input = 1;
constexpr int exit_fail = 2;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return json::parse(ss.str());
  } catch (const json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw InputError("cannot write '" + p.string() + "'");
  out << text;
}

fs::path prepare_out(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw InputError("output directory '" + dir + "' is not writable");
  return fs::path(dir);
}

// ---------------------------------------------------------------------------
// dim

DimensionMethod parse_method(const std::string& s) {
  if (s == "entropy_slope") return DimensionMethod::entropy_slope;
  if (s == "gap_sum") return DimensionMethod::gap_sum;
  if (s == "distance_integral") return DimensionMethod::distance_integral;
  throw std::invalid_argument("unknown dimension method '" + s + "'");
}

int cmd_dim(const std::string& config_path, const fs::path& out, std::optional<std::uint64_t> seed) {
  const json j = read_config(config_path);
  detail::check_keys(j,
                     {"set_name", "E", "methods", "delta_min", "per_decade", "schedule", "j_range", "a", "expected",
                      "tolerance", "seed"},
                     "dim");
  if (!j.contains("E")) throw std::invalid_argument("dim: missing 'E'");
  const DilationSet e = dilation_set_from_json(j.at("E"));

  std::vector<std::string> methods = detail::get_or<std::vector<std::string>>(j, "methods", {"entropy_slope"});
  if (methods.empty()) throw std::invalid_argument("dim: 'methods' is empty");
  for (const auto& m : methods) parse_method(m);

  std::vector<double> sched;
  json sched_json;
  if (j.contains("schedule")) {
    const auto& s = j.at("schedule");
    detail::check_keys(s, {"base", "levels"}, "schedule");
    const double base = detail::get_or(s, "base", 3.0);
    const int levels = detail::get_or(s, "levels", 12);
    sched = geometric_delta_schedule(base, levels);
    sched_json = {{"base", base}, {"levels", levels}};
  } else {
    const double dmin = detail::get_or(j, "delta_min", 1e-6);
    const int per = detail::get_or(j, "per_decade", 3);
    if (!(dmin > 0 && dmin < 1) || per < 1) throw std::invalid_argument("dim: bad delta schedule");
    sched = default_delta_schedule(dmin, per);
    sched_json = {{"delta_min", dmin}, {"per_decade", per}};
  }
  int j_min = 0, j_max = 0;
  if (j.contains("j_range")) {
    const auto r = j.at("j_range").get<std::vector<int>>();
    if (r.size() != 2 || r[0] > r[1]) throw std::invalid_argument("dim: j_range must be [j_min, j_max]");
    j_min = r[0];
    j_max = r[1];
  }
  const double a = detail::get_or(j, "a", 0.5);
  const std::optional<double> expected =
      j.contains("expected") ? std::optional<double>(j.at("expected").get<double>()) : std::nullopt;
  const double tol = detail::get_or(j, "tolerance", 0.05);

  std::vector<BlockSet> blocks;
  for (int b = j_min; b <= j_max; ++b) {
    auto blk = rescaled_block(e, b);
    if (!blk.empty()) blocks.push_back(std::move(blk));
  }
  if (blocks.empty()) throw std::invalid_argument("dilation set is empty on the requested j range");

  json report;
  json cfg;
  cfg["set_name"] = detail::get_or<std::string>(j, "set_name", "custom");
  cfg["E"] = to_json(e);
  cfg["methods"] = methods;
  cfg["schedule"] = sched_json;
  cfg["j_range"] = {j_min, j_max};
  cfg["a"] = a;
  cfg["expected"] = expected ? json(*expected) : json(nullptr);
  cfg["tolerance"] = tol;
  cfg["seed"] = seed.value_or(detail::get_or<std::uint64_t>(j, "seed", 0));
  report["config"] = cfg;
  report["estimates"] = json::array();
  bool pass = true;
  for (const auto& name : methods) {
    DimensionEstimate est;
    switch (parse_method(name)) {
      case DimensionMethod::entropy_slope: est = kappa(e, sched, j_min, j_max); break;
      case DimensionMethod::gap_sum: est = gap_sum_exponent(e); break;
      case DimensionMethod::distance_integral: est = distance_integral_exponent(e, j_min, j_max); break;
    }
    json ej = to_json(est);
    if (expected) {
      const bool ok = std::abs(est.value - *expected) <= tol;
      ej["pass"] = ok;
      pass = pass && ok;
    }
    report["estimates"].push_back(ej);
  }
  report["pass"] = pass;

  std::ostringstream csv;
  csv.precision(17);
  csv << "j,delta,N,delta_a_N\n";
  for (const auto& b : blocks)
    for (double d : sched) {
      const auto n = entropy_number(b, d);
      csv << b.j << "," << d << "," << n << "," << std::pow(d, a) * static_cast<double>(n) << "\n";
    }
  write_text(out / "dim_report.json", report.dump(2) + "\n");
  write_text(out / "dim_table.csv", csv.str());
  for (const auto& est : report["estimates"])
    std::cout << est["method"].get<std::string>() << " " << est["value"].dump() << "\n";
  return pass ? exit_pass : exit_fail;
}

// ---------------------------------------------------------------------------
// verify

int cmd_verify(const std::string& suite, const fs::path& out, std::uint64_t seed) {
  if (suite != "all" && std::find(suite_names().begin(), suite_names().end(), suite) == suite_names().end())
    throw InputError("unknown suite '" + suite + "'");
  const json report = run_verify(suite, seed);
  write_text(out / ("verify_" + suite + ".json"), report.dump(2) + "\n");
  for (const auto& s : report["suites"])
    for (const auto& c : s["checks"])
      std::cout << (c["pass"].get<bool>() ? "PASS " : "FAIL ") << s["suite"].get<std::string>() << "/"
                << c["name"].get<std::string>() << "\n";
  const bool pass = report["pass"].get<bool>();
  std::cout << (pass ? "all checks passed" : "verification failed") << "\n";
  return pass ? exit_pass : exit_fail;
}

// ---------------------------------------------------------------------------
// experiment

int cmd_experiment(const std::string& config_path, const fs::path& out, std::optional<std::uint64_t> seed) {
  const json j = read_config(config_path);
  ExperimentConfig c = experiment_from_json(j);
  if (seed) c.seed = *seed;

  json report;
  report["config"] = to_json(c);
  bool pass = true;
  if (c.kind == "lemma31") {
    const auto r = lemma31_ratio(c);
    report["result"] = to_json(r);
    pass = r.pass;
    write_text(out / "ratio_histogram.csv", ratio_histogram_csv(r.ratio));
    std::cout << "max ratio " << r.base.max_ratio << " -> " << r.refined.max_ratio << ", change " << r.relative_change
              << "\n";
  } else if (c.kind == "halfwave") {
    std::vector<std::int64_t> schedule = c.schedule;
    if (schedule.empty())
      for (int k = 1; k <= 12; ++k) schedule.push_back(std::int64_t{1} << k);
    report["config"]["schedule"] = schedule;
    const auto r = halfwave_convergence(c.function(), c.alpha, c.beta, c.E, schedule);
    report["result"] = to_json(r);
    pass = r.pass;
    write_text(out / "rate.csv", rate_csv(r));
    std::cout << "beta_fit " << r.slope << "\n";
  } else if (c.kind == "mm_linf") {
    const auto cut = build_cutoffs(c.m.cutoff.kind());
    const auto w = build_hweights(c.E, c.beta, c.j_min, c.j_max, c.depth, HGridOptions{c.t_nodes});
    const auto xi = log_spaced_xi(-4, 8, 8);
    const auto r = mm_linf_h_norm(c.m, xi, w, cut);
    report["result"] = to_json(r);
    pass = r.pass;
    std::ostringstream csv;
    csv.precision(17);
    csv << "xi,h_norm\n";
    for (std::size_t i = 0; i < r.xi.size(); ++i) csv << r.xi[i] << "," << r.h_norm[i] << "\n";
    write_text(out / "h_norm.csv", csv.str());
    std::cout << "ratio " << r.ratio << "\n";
  } else {
    const auto r = operator_norm_probe(c, c.trials);
    report["result"] = to_json(r);
    std::cout << "lower bound " << r.lower_bound << "\n";
  }
  report["pass"] = pass;
  write_text(out / "experiment_report.json", report.dump(2) + "\n");
  return pass ? exit_pass : exit_fail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fmlab: maximal Fourier multiplier laboratory"};
  app.require_subcommand(1);
  std::string config, out = "fmlab_out", suite = "all";
  std::optional<std::uint64_t> seed;
  int workers = -1;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", out, "Output directory");
    sub->add_option("--seed", seed, "Seed override");
    sub->add_option("--workers", workers, "Worker threads (0 = hardware concurrency)");
  };
  auto* dim = app.add_subcommand("dim", "Dimension estimates for a dilation set");
  dim->add_option("--config", config, "Config JSON")->required();
  add_common(dim);
  auto* verify = app.add_subcommand("verify", "Run a property suite");
  verify->add_option("--suite", suite, "dimension | fraccalc | frames | multipliers | maximal | all");
  add_common(verify);
  auto* exp = app.add_subcommand("experiment", "Run a maximal-operator experiment");
  exp->add_option("--config", config, "Config JSON")->required();
  add_common(exp);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_pass : exit_input;
  }
  if (workers >= 0) set_workers(workers);

  try {
    const fs::path dir = prepare_out(out);
    if (*dim) return cmd_dim(config, dir, seed);
    if (*verify) return cmd_verify(suite, dir, seed.value_or(0));
    return cmd_experiment(config, dir, seed);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_input;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_input;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_input;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_fail;
  }
}
