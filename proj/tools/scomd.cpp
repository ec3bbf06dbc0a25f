// scomd: generate loss streams, run learners against the best fixed action,
// run the inequality checks, and compare result files.
//
// Exit codes: 0 success, 1 operational error, 2 bound or check violation
// (run --acceptance, verify) or mismatch (compare).

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "scomd/bench/experiment.hpp"
#include "scomd/bench/generators.hpp"
#include "scomd/bench/io.hpp"
#include "scomd/verify.hpp"

namespace fs = std::filesystem;
using namespace scomd;
using namespace scomd::bench;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_error = 1;
constexpr int exit_violation = 2;

fs::path default_output_dir() {
  if (const char* env = std::getenv("SCOMD_OUTPUT_DIR"); env && *env) return env;
  return ".";
}

template <class Enum, class Parse>
Enum parse_or_throw(const std::string& s, Parse parse, const char* what) {
  if (auto v = parse(s)) return *v;
  throw Error(std::string("unknown ") + what + " '" + s + "'");
}

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

// ---------------------------------------------------------------------------
// gen

struct GenOptions {
  std::string problem = "ops";
  std::string kind = "iid-uniform";
  std::string state = "random-mixed";
  std::string povm = "random-basis";
  std::int64_t d = 5;
  std::int64_t horizon = 1000;
  std::uint64_t seed = 0;
  std::string out;
};

int run_gen(const GenOptions& o) {
  if (o.problem == "ops") {
    const auto stream = generate_market(parse_or_throw<MarketKind>(o.kind, parse_market_kind, "market kind"), o.d,
                                        o.horizon, o.seed);
    if (o.out.empty() || o.out == "-") {
      write_price_csv(std::cout, stream);
    } else {
      std::ofstream out = open_output(o.out);
      write_price_csv(out, stream);
    }
    return exit_ok;
  }
  if (o.problem == "quantum") {
    const QuantumStream qs =
        generate_quantum_stream(o.d, o.horizon, o.seed, parse_or_throw<StateKind>(o.state, parse_state_kind, "state"),
                                parse_or_throw<PovmKind>(o.povm, parse_povm_kind, "povm"));
    const nlohmann::json j = observables_to_json(o.d, qs.observables, qs.outcomes, &qs.truth);
    if (o.out.empty() || o.out == "-") {
      std::cout << j.dump() << '\n';
    } else {
      std::ofstream out = open_output(o.out);
      out << j.dump() << '\n';
    }
    return exit_ok;
  }
  throw Error("unknown problem kind '" + o.problem + "' (ops | quantum)");
}

// ---------------------------------------------------------------------------
// run

struct RunOptions {
  std::string problem;
  std::string algorithm = "lb-omd";
  std::int64_t d = 5;
  std::int64_t horizon = 1000;
  std::vector<std::uint64_t> seeds{0};
  std::optional<double> eta;
  std::optional<double> gamma;
  std::string eg_variant = "sqrt-log-d";
  std::string market = "iid-uniform";
  std::string state = "random-mixed";
  std::string povm = "random-basis";
  std::string input;
  std::string out_dir;
  std::string name;
  bool kahan = false;
  bool acceptance = false;
  double comparator_tolerance = 1e-6;
  unsigned jobs = 1;
};

ExperimentConfig base_config(const RunOptions& o) {
  ExperimentConfig c;
  c.algorithm = parse_or_throw<Algorithm>(o.algorithm, parse_algorithm, "algorithm");
  if (!o.problem.empty() && (o.problem == "quantum") != is_quantum(c.algorithm))
    throw ScheduleError("problem '" + o.problem + "' does not match algorithm '" + o.algorithm + "'");
  c.dimension = o.d;
  c.horizon = o.horizon;
  c.eta = o.eta;
  c.gamma = o.gamma;
  if (o.eg_variant == "sqrt-log-d")
    c.eg_variant = EgEtaVariant::sqrt_log_d;
  else if (o.eg_variant == "sqrt-d")
    c.eg_variant = EgEtaVariant::sqrt_d;
  else
    throw Error("unknown eg eta variant '" + o.eg_variant + "' (sqrt-log-d | sqrt-d)");
  c.market = parse_or_throw<MarketKind>(o.market, parse_market_kind, "market kind");
  c.state = parse_or_throw<StateKind>(o.state, parse_state_kind, "state");
  c.povm = parse_or_throw<PovmKind>(o.povm, parse_povm_kind, "povm");
  c.summation = o.kahan ? Summation::kahan : Summation::naive;
  c.comparator_tolerance = o.comparator_tolerance;
  return c;
}

ExperimentResult execute(const ExperimentConfig& c, const std::string& input) {
  if (input.empty()) return run_experiment(c);
  if (is_quantum(c.algorithm)) return run_quantum_experiment(c, read_observables_json(input).observables);
  return run_market_experiment(c, read_price_csv(input));
}

std::string default_name(const ExperimentConfig& c, bool from_file) {
  std::string n = to_string(c.algorithm) + "-d" + std::to_string(c.dimension) + "-T" + std::to_string(c.horizon);
  if (!from_file) n += "-seed" + std::to_string(c.seed);
  return n;
}

int run_run(const RunOptions& o) {
  const ExperimentConfig base = base_config(o);
  std::vector<ExperimentConfig> configs;
  for (std::uint64_t s : o.seeds) {
    ExperimentConfig c = base;
    c.seed = s;
    // File inputs fix d and T; they are validated after loading.
    if (o.input.empty()) c.validate();
    configs.push_back(c);
  }
  if (!o.input.empty() && configs.size() > 1) throw Error("--input takes a single seed");
  const fs::path dir = o.out_dir.empty() ? default_output_dir() : fs::path(o.out_dir);

  std::atomic<std::size_t> next{0};
  std::atomic<bool> violated{false};
  std::mutex io;
  std::vector<std::string> errors;
  auto worker = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) {
      try {
        const ExperimentResult r = execute(configs[i], o.input);
        std::string name = o.name.empty() ? default_name(r.config, !o.input.empty()) : o.name;
        if (!o.name.empty() && configs.size() > 1) name += "-seed" + std::to_string(r.config.seed);
        {
          std::ofstream csv = open_output(dir / (name + ".csv"));
          write_trace_csv(csv, r);
          std::ofstream js = open_output(dir / (name + ".json"));
          js << summary_json(r).dump(2) << '\n';
        }
        if (!r.bound_satisfied) violated = true;
        std::lock_guard<std::mutex> lock(io);
        std::cout << name << ": regret " << r.final_regret << ", bound "
                  << (r.bound ? std::to_string(*r.bound) : std::string("n/a")) << ", gap " << r.comparator_gap
                  << (r.bound_satisfied ? ", satisfied" : ", NOT satisfied") << '\n';
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(io);
        errors.push_back("seed " + std::to_string(configs[i].seed) + ": " + e.what());
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(o.jobs, static_cast<unsigned>(configs.size())));
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < n; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (const auto& e : errors) std::cerr << "error: " << e << '\n';
  if (!errors.empty()) return exit_error;
  if (o.acceptance && violated) return exit_violation;
  return exit_ok;
}

// ---------------------------------------------------------------------------
// verify

int run_verify(std::uint64_t seed, std::size_t samples, const std::string& out) {
  const auto reports = verify::run_verify_suite(seed, samples);
  std::ofstream file;
  if (!out.empty()) file = open_output(out);
  std::ostream& sink = out.empty() ? std::cout : file;
  for (const auto& r : reports) sink << r.to_json_line() << '\n';
  return verify::all_passed(reports) ? exit_ok : exit_violation;
}

// ---------------------------------------------------------------------------
// compare

std::vector<std::vector<std::string>> read_csv_cells(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> cells;
    for (std::string_view c : bench::detail::split_commas(line)) cells.emplace_back(c);
    rows.push_back(std::move(cells));
  }
  return rows;
}

int compare_csv(const std::string& a, const std::string& b, double tolerance) {
  const auto ra = read_csv_cells(a);
  const auto rb = read_csv_cells(b);
  if (ra.empty() || rb.empty() || ra.front() != rb.front()) {
    std::cout << "headers differ\n";
    return exit_violation;
  }
  if (ra.size() != rb.size()) {
    std::cout << "row counts differ: " << ra.size() - 1 << " vs " << rb.size() - 1 << '\n';
    return exit_violation;
  }
  const auto& header = ra.front();
  std::vector<double> worst(header.size(), 0.0);
  bool structural = false;
  for (std::size_t i = 1; i < ra.size(); ++i) {
    if (ra[i].size() != rb[i].size()) {
      structural = true;
      continue;
    }
    for (std::size_t k = 0; k < ra[i].size() && k < header.size(); ++k) {
      if (ra[i][k] == rb[i][k]) continue;
      if (ra[i][k].empty() || rb[i][k].empty()) {
        structural = true;
        continue;
      }
      const double x = std::stod(ra[i][k]);
      const double y = std::stod(rb[i][k]);
      worst[k] = std::max(worst[k], std::abs(x - y));
    }
  }
  bool ok = !structural;
  for (std::size_t k = 0; k < header.size(); ++k) {
    std::cout << header[k] << " max_abs_diff " << worst[k] << '\n';
    if (worst[k] > tolerance) ok = false;
  }
  if (structural) std::cout << "rows differ in shape or missing cells\n";
  std::cout << (ok ? "match" : "MISMATCH") << '\n';
  return ok ? exit_ok : exit_violation;
}

int compare_json(const std::string& a, const std::string& b, double tolerance) {
  const nlohmann::json ja = nlohmann::json::parse(bench::detail::read_file(a));
  const nlohmann::json jb = nlohmann::json::parse(bench::detail::read_file(b));
  bool ok = true;
  for (const auto& [key, va] : ja.items()) {
    if (key == "wall_seconds") continue;
    if (!jb.contains(key)) {
      std::cout << key << " missing in second file\n";
      ok = false;
      continue;
    }
    const auto& vb = jb[key];
    if (va.is_number() && vb.is_number()) {
      const double diff = std::abs(va.get<double>() - vb.get<double>());
      if (diff > tolerance) {
        std::cout << key << " differs by " << diff << '\n';
        ok = false;
      }
    } else if (va != vb) {
      std::cout << key << " differs: " << va.dump() << " vs " << vb.dump() << '\n';
      ok = false;
    }
  }
  std::cout << (ok ? "match" : "MISMATCH") << '\n';
  return ok ? exit_ok : exit_violation;
}

int run_compare(const std::string& a, const std::string& b, double tolerance) {
  if (fs::path(a).extension() == ".json") return compare_json(a, b, tolerance);
  return compare_csv(a, b, tolerance);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mirror descent with self-concordant losses: portfolio selection and quantum state learning"};
  app.require_subcommand(1);

  GenOptions gen;
  auto* g = app.add_subcommand("gen", "generate a loss stream");
  g->add_option("--problem", gen.problem, "ops | quantum")->capture_default_str();
  g->add_option("--kind", gen.kind, "market kind (ops)")->capture_default_str();
  g->add_option("--state", gen.state, "true state (quantum)")->capture_default_str();
  g->add_option("--povm", gen.povm, "measurement (quantum)")->capture_default_str();
  g->add_option("-d,--d", gen.d, "dimension")->capture_default_str();
  g->add_option("-T,--T", gen.horizon, "rounds")->capture_default_str();
  g->add_option("--seed", gen.seed, "64-bit seed")->capture_default_str();
  g->add_option("-o,--out", gen.out, "output file, '-' for stdout");

  RunOptions run;
  auto* r = app.add_subcommand("run", "run a learner and write <name>.csv and <name>.json");
  r->add_option("--problem", run.problem, "ops | quantum (inferred from the algorithm)");
  r->add_option("-a,--algorithm", run.algorithm, "eg | lb-omd | lb-ftrl | q-lb-omd")->capture_default_str();
  r->add_option("-d,--d", run.d, "dimension")->capture_default_str();
  r->add_option("-T,--T", run.horizon, "rounds")->capture_default_str();
  r->add_option("--seed", run.seeds, "seed; repeat for several runs")->capture_default_str();
  r->add_option("--eta", run.eta, "learning rate override");
  r->add_option("--gamma", run.gamma, "eg mixing override");
  r->add_option("--eg-eta-variant", run.eg_variant, "sqrt-log-d | sqrt-d")->capture_default_str();
  r->add_option("--market", run.market, "market generator")->capture_default_str();
  r->add_option("--state", run.state, "true state generator")->capture_default_str();
  r->add_option("--povm", run.povm, "measurement generator")->capture_default_str();
  r->add_option("-i,--input", run.input, "price CSV or observables JSON instead of a generator");
  r->add_option("--out-dir", run.out_dir, "output directory (default $SCOMD_OUTPUT_DIR or .)");
  r->add_option("--name", run.name, "output file stem");
  r->add_flag("--kahan", run.kahan, "compensated summation of losses");
  r->add_flag("--acceptance", run.acceptance, "exit 2 if a regret bound is violated");
  r->add_option("--comparator-tolerance", run.comparator_tolerance, "certified gap target")->capture_default_str();
  r->add_option("-j,--jobs", run.jobs, "parallel runs over the seeds")->capture_default_str()->check(CLI::PositiveNumber);

  std::uint64_t verify_seed = 0;
  std::size_t verify_samples = 1000;
  std::string verify_out;
  auto* v = app.add_subcommand("verify", "run the inequality checks, one JSON line per check");
  v->add_option("--seed", verify_seed)->capture_default_str();
  v->add_option("--samples", verify_samples, "samples per sampled check")->capture_default_str()->check(
      CLI::PositiveNumber);
  v->add_option("-o,--out", verify_out, "output file (default stdout)");

  std::string cmp_a, cmp_b;
  double cmp_tol = 0.0;
  auto* c = app.add_subcommand("compare", "diff two trace CSVs or two summaries");
  c->add_option("first", cmp_a)->required();
  c->add_option("second", cmp_b)->required();
  c->add_option("--tolerance", cmp_tol, "max absolute difference")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (g->parsed()) return run_gen(gen);
    if (r->parsed()) return run_run(run);
    if (v->parsed()) return run_verify(verify_seed, verify_samples, verify_out);
    if (c->parsed()) return run_compare(cmp_a, cmp_b, cmp_tol);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_error;
  }
  return exit_error;
}
