#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "qplab/suites.hpp"
#include "qplab/version.hpp"

namespace {

using json = nlohmann::ordered_json;
using qplab::suites::Config;

constexpr int kUsage = 2;

int worker_count() {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw <= 0) hw = 1;
  const char* env = std::getenv("QPLAB_THREADS");
  if (!env || !*env) return hw;
  char* end = nullptr;
  long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 1) throw std::invalid_argument("QPLAB_THREADS must be a positive integer");
  return std::min<int>(hw, static_cast<int>(v));
}

std::vector<std::string> expand_suites(const std::vector<std::string>& requested) {
  const auto& known = qplab::suites::suite_names();
  std::vector<std::string> out;
  for (const auto& r : requested) {
    std::stringstream ss(r);
    std::string s;
    while (std::getline(ss, s, ',')) {
      if (s == "all") {
        out = known;
        return out;
      }
      if (std::find(known.begin(), known.end(), s) == known.end())
        throw std::invalid_argument("unknown suite '" + s + "' (see qplab list-suites)");
      if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
    }
  }
  return out;
}

json record_json(const qplab::suites::Record& r) {
  json j;
  j["test"] = r.id;
  j["anchor"] = r.anchor;
  j["points"] = r.points;
  j["max_defect"] = r.max_defect;  // NaN is written as null
  j["threshold"] = r.threshold;
  j["pass"] = r.pass;
  if (!r.note.empty()) j["error"] = r.note;
  return j;
}

int run(const Config& cfg, const std::vector<std::string>& suites, const std::string& out_path) {
  json report;
  json env;
  env["seed"] = cfg.seed;
  env["version"] = qplab::kVersion;
  env["n"] = cfg.n;
  env["samples"] = cfg.samples;
  env["tolerances"] = {{"deriv", cfg.tol_deriv}, {"rank", cfg.tol_rank}, {"member", cfg.tol_member}, {"alg", cfg.tol_alg},
                       {"exact", cfg.tol_exact}};
  json timings = json::object();
  json records = json::array();
  int failed = 0, total = 0;
  double seconds = 0.0;
  for (const auto& name : suites) {
    qplab::suites::SuiteResult res;
    try {
      res = qplab::suites::run_suite(name, cfg);
    } catch (const std::exception& e) {
      res.name = name;
      res.records.push_back({name + ".setup", "suite construction", 0, std::numeric_limits<double>::quiet_NaN(), 0.0,
                             false, e.what()});
    }
    timings[name] = res.seconds;
    seconds += res.seconds;
    for (const auto& r : res.records) {
      ++total;
      if (!r.pass) ++failed;
      std::cout << (r.pass ? "PASS " : "FAIL ") << r.id << "  max=" << r.max_defect << "  thr=" << r.threshold
                << "  n=" << r.points << (r.note.empty() ? "" : "  [" + r.note + "]") << "\n";
      records.push_back(record_json(r));
    }
  }
  timings["total"] = seconds;
  env["timings"] = timings;
  report["env"] = env;
  report["records"] = records;
  report["summary"] = {{"records", total}, {"failed", failed}, {"pass", failed == 0}};
  std::string text = report.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out_path);
    if (!f) {
      std::cerr << "qplab: cannot write " << out_path << "\n";
      return kUsage;
    }
    f << text;
  }
  std::cout << (failed ? "FAILED " : "OK ") << total - failed << "/" << total << "\n";
  return failed ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical certification of quasi-Poisson and log-symplectic identities"};
  app.require_subcommand(1);
  Config cfg;
  std::vector<std::string> suites{"all"};
  std::string out;

  auto* run_cmd = app.add_subcommand("run", "run verification suites and write a JSON report");
  run_cmd->add_option("--n", cfg.n, "rank of SL(n)")->check(CLI::IsMember({2, 3}));
  run_cmd->add_option("--seed", cfg.seed, "64-bit seed");
  run_cmd->add_option("--samples", cfg.samples, "points per test")->check(CLI::PositiveNumber);
  run_cmd->add_option("--suite", suites, "suite names, comma separated, or all")->delimiter(',');
  run_cmd->add_option("--out", out, "report path (stdout if omitted)");
  run_cmd->add_option("--tol-deriv", cfg.tol_deriv, "derivative identities")->check(CLI::PositiveNumber);
  run_cmd->add_option("--tol-rank", cfg.tol_rank, "relative rank cut")->check(CLI::PositiveNumber);
  run_cmd->add_option("--tol-member", cfg.tol_member, "membership residuals")->check(CLI::PositiveNumber);
  run_cmd->add_option("--tol-alg", cfg.tol_alg, "closed-form identities")->check(CLI::PositiveNumber);
  auto* list_cmd = app.add_subcommand("list-suites", "print the suite names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  if (list_cmd->parsed()) {
    for (const auto& s : qplab::suites::suite_names()) std::cout << s << "\n";
    return 0;
  }
  std::vector<std::string> selected;
  try {
    cfg.threads = worker_count();
    selected = expand_suites(suites);
  } catch (const std::exception& e) {
    std::cerr << "qplab: " << e.what() << "\n";
    return kUsage;
  }
  if (selected.empty()) {
    std::cerr << "qplab: no suites selected\n";
    return kUsage;
  }
  return run(cfg, selected, out);
}
