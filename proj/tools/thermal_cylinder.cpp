// Command-line front end: kernels, simulate, correlate, nelson-compare, oracle, report.

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <thread>

#include "tcyl/errors.hpp"
#include "tcyl/field_io.hpp"
#include "tcyl/pipeline.hpp"
#include "tcyl/spectral.hpp"

namespace {

using namespace tcyl;

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitError = 3;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

int resolve_threads(std::optional<int> flag) {
  if (flag) {
    if (*flag < 1) throw UsageError("--threads must be positive");
    return *flag;
  }
  if (const char* env = std::getenv("THERMAL_CYLINDER_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n >= 1) return n;
    } catch (const std::exception&) {
    }
    throw UsageError("THERMAL_CYLINDER_THREADS must be a positive integer");
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

void emit(const std::string& text, const std::optional<std::string>& out_dir, const std::string& name) {
  if (out_dir) {
    std::filesystem::create_directories(*out_dir);
    write_file_atomic(std::filesystem::path(*out_dir) / name, text);
  } else {
    std::cout << text;
  }
}

RunManifest manifest_with_overrides(const std::string& config, std::optional<std::uint64_t> seed,
                                    const std::optional<std::string>& output) {
  RunManifest m = load_manifest(config);
  if (seed) m.mc.seed = *seed;
  if (output) m.output_dir = *output;
  m.finalize();
  return m;
}

struct KernelArgs {
  std::string kind = "c0";
  double beta = 1.0;
  double mass = 1.0;
  std::vector<double> k, tau, x, t, y;
  std::int64_t n_cut = 1000000;
};

std::string kernel_table(const KernelArgs& a) {
  ModelParams p;
  p.beta = a.beta;
  p.mass = a.mass;
  p.validate();
  const auto need = [](const std::vector<double>& v, const char* flag) {
    if (v.empty()) throw UsageError(std::string("empty grid: ") + flag + " needs at least one value");
  };
  std::ostringstream os;
  if (a.kind == "c0") {
    need(a.k, "--k");
    os << "k,tau,value\n";
    for (double k : a.k) os << format_double(k) << ",0," << format_double(thermal_covariance_kernel(k, p)) << '\n';
  } else if (a.kind == "matsubara") {
    need(a.k, "--k");
    need(a.tau, "--tau");
    os << "k,tau,value\n";
    for (double k : a.k) {
      for (double tau : a.tau) {
        os << format_double(k) << ',' << format_double(tau) << ','
           << format_double(matsubara_covariance(k, tau, p, a.n_cut)) << '\n';
      }
    }
  } else if (a.kind == "propagator") {
    need(a.tau, "--tau");
    need(a.x, "--x");
    os << "tau,x,value\n";
    for (double tau : a.tau) {
      for (double x : a.x) {
        os << format_double(tau) << ',' << format_double(x) << ','
           << format_double(free_euclidean_propagator(tau, x, p)) << '\n';
      }
    }
  } else if (a.kind == "wightman") {
    need(a.t, "--t");
    need(a.y, "--y");
    need(a.x, "--x");
    os << "t_re,t_im,x,w_re,w_im\n";
    for (double t : a.t) {
      for (double y : a.y) {
        for (double x : a.x) {
          const auto w = free_wightman({t, -y}, x, p);
          os << format_double(t) << ',' << format_double(-y) << ',' << format_double(x) << ','
             << format_double(w.real()) << ',' << format_double(w.imag()) << '\n';
        }
      }
    }
  } else {
    throw UsageError("unknown kernel '" + a.kind + "'");
  }
  return os.str();
}

std::vector<CheckReport> reports_from_json(const std::string& text, std::string& hash) {
  const auto j = nlohmann::json::parse(text);
  hash = j.at("manifest_hash").get<std::string>();
  std::vector<CheckReport> reports;
  for (const auto& c : j.at("checks")) {
    CheckReport r;
    r.name = c.at("name").get<std::string>();
    const auto v = c.at("verdict").get<std::string>();
    r.verdict = v == "PASS" ? Verdict::Pass : v == "FAIL" ? Verdict::Fail : Verdict::Inconclusive;
    r.statistic = c.at("statistic").is_number() ? c.at("statistic").get<double>() : std::nan("");
    r.threshold = c.at("threshold").is_number() ? c.at("threshold").get<double>() : std::nan("");
    for (const auto& [k, val] : c.at("values").items()) {
      r.values.emplace_back(k, val.is_number() ? val.get<double>() : std::nan(""));
    }
    r.message = c.at("message").get<std::string>();
    reports.push_back(std::move(r));
  }
  return reports;
}

int verdict_exit(const std::vector<CheckReport>& reports) { return all_pass(reports) ? 0 : kExitFail; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"thermal-cylinder: thermal P(phi)_2 kernels, lattice Monte Carlo and Fock-space oracle"};
  app.set_version_flag("--version", std::string(TCYL_VERSION));
  app.require_subcommand(1);

  std::optional<std::string> config;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<std::string> output;
  const auto common = [&](CLI::App* sub, bool needs_config) {
    auto* c = sub->add_option("--config", config, "run manifest (key = value sections)");
    if (needs_config) c->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "override the manifest seed");
    sub->add_option("--threads", threads, "parallel chains (fallback: THERMAL_CYLINDER_THREADS)");
    sub->add_option("--output", output, "output directory");
  };

  KernelArgs ka;
  auto* kernels = app.add_subcommand("kernels", "tabulate free thermal kernels as CSV");
  kernels->add_option("--kernel", ka.kind, "c0 | matsubara | propagator | wightman")
      ->check(CLI::IsMember({"c0", "matsubara", "propagator", "wightman"}));
  kernels->add_option("--beta", ka.beta, "inverse temperature");
  kernels->add_option("--mass", ka.mass, "mass");
  kernels->add_option("--k", ka.k, "momenta")->delimiter(',');
  kernels->add_option("--tau", ka.tau, "imaginary times in [0, beta)")->delimiter(',');
  kernels->add_option("--x", ka.x, "spatial separations")->delimiter(',');
  kernels->add_option("--t", ka.t, "real times (wightman)")->delimiter(',');
  kernels->add_option("--y", ka.y, "imaginary offsets y, evaluated at t - i y (wightman)")->delimiter(',');
  kernels->add_option("--n-cut", ka.n_cut, "Matsubara cutoff");
  kernels->add_option("--output", output, "output directory (default: stdout)");

  auto* simulate = app.add_subcommand("simulate", "run the Monte Carlo pipeline of a manifest");
  common(simulate, true);

  std::string run_dir;
  auto* correlate = app.add_subcommand("correlate", "recompute correlator and checks from stored samples");
  correlate->add_option("run", run_dir, "run directory written by simulate")->required()->check(CLI::ExistingDirectory);
  correlate->add_option("--output", output, "output directory (default: the run directory)");

  std::string run_a, run_b;
  auto* nelson = app.add_subcommand("nelson-compare", "compare a run with its transposed-lattice partner");
  nelson->add_option("run_a", run_a, "first run directory")->required()->check(CLI::ExistingDirectory);
  nelson->add_option("run_b", run_b, "run directory on the transposed lattice")->required()->check(CLI::ExistingDirectory);
  nelson->add_option("--output", output, "output directory for verdicts.json and report.txt");

  auto* oracle = app.add_subcommand("oracle", "Fock-space exact diagonalization on the circle");
  common(oracle, true);

  auto* report = app.add_subcommand("report", "print the report of a run directory");
  report->add_option("run", run_dir, "directory holding verdicts.json")->required()->check(CLI::ExistingDirectory);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (kernels->parsed()) {
      emit(kernel_table(ka), output, "kernel_" + ka.kind + ".csv");
      return 0;
    }
    if (simulate->parsed()) {
      const RunManifest m = manifest_with_overrides(*config, seed, output);
      const auto result = run_simulation(m, resolve_threads(threads));
      write_simulation(result, m.output_dir);
      std::cout << read_text_file(std::filesystem::path(m.output_dir) / "report.txt");
      return verdict_exit(result.reports);
    }
    if (correlate->parsed()) {
      const auto r = correlate_run(run_dir);
      const std::filesystem::path dir = output ? std::filesystem::path(*output) : std::filesystem::path(run_dir);
      std::filesystem::create_directories(dir);
      write_file_atomic(dir / "correlator.csv", correlator_csv(r.symmetric));
      write_file_atomic(dir / "verdicts.json", verdicts_json(r.manifest.manifest_hash, r.manifest.mc.seed, r.reports));
      const auto text = report_text("thermal-cylinder correlate", r.manifest.manifest_hash, r.reports, r.raw.warnings);
      write_file_atomic(dir / "report.txt", text);
      std::cout << text;
      return verdict_exit(r.reports);
    }
    if (nelson->parsed()) {
      const auto ma = load_manifest(std::filesystem::path(run_a) / "manifest.toml");
      const std::vector<CheckReport> reports{nelson_compare_runs(run_a, run_b)};
      const auto text = report_text("thermal-cylinder nelson-compare", ma.manifest_hash, reports,
                                    {"run_a = " + run_a, "run_b = " + run_b});
      if (output) {
        std::filesystem::create_directories(*output);
        write_file_atomic(std::filesystem::path(*output) / "verdicts.json",
                          verdicts_json(ma.manifest_hash, ma.mc.seed, reports));
        write_file_atomic(std::filesystem::path(*output) / "report.txt", text);
      }
      std::cout << text;
      return verdict_exit(reports);
    }
    if (oracle->parsed()) {
      const RunManifest m = manifest_with_overrides(*config, seed, output);
      const auto r = run_oracle(m);
      const std::filesystem::path dir(m.output_dir);
      std::filesystem::create_directories(dir);
      const auto text = oracle_report_text(m, r);
      write_file_atomic(dir / "manifest.toml", m.to_text());
      write_file_atomic(dir / "two_point.csv", r.two_point_csv);
      write_file_atomic(dir / "verdicts.json", verdicts_json(m.manifest_hash, m.mc.seed, r.reports));
      write_file_atomic(dir / "report.txt", text);
      std::cout << text;
      return verdict_exit(r.reports);
    }
    if (report->parsed()) {
      std::string hash;
      const auto reports = reports_from_json(read_text_file(std::filesystem::path(run_dir) / "verdicts.json"), hash);
      std::cout << report_text("thermal-cylinder report", hash, reports, {});
      return verdict_exit(reports);
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const tcyl::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitUsage;
}
