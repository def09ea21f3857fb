// hmlab: numerical laboratory for the constant-scalar-curvature soliton
// family. Evaluates curvature identities, conical regularity, static vacuum
// residuals, the almost-complex structure, and boundary-integral energies,
// and reports every computed quantity next to its closed-form reference.
//
// Exit status: 0 all checks pass, 1 check failure, 2 usage/domain error,
// 3 numerical non-convergence.

#include "hmlab/report.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct CliOptions {
  int n = 3;
  double ell = 1.0;
  double a = 0.0;
  double r0 = 1.0;
  std::string lambda_csv;
  double G = 1.0;
  double r = 0.0;
  std::string sweep;
  std::string format = "table";
  std::string out;
  double tol_fd = 1e-6;
  double tol_extrap = 1e-8;
  double root_tol = 1e-12;
  std::string config_path;
};

void add_common_options(CLI::App* cmd, CliOptions& opt) {
  cmd->add_option("--n", opt.n, "fiber dimension (n >= 3)");
  cmd->add_option("--ell", opt.ell, "curvature scale ell");
  cmd->add_option("--a", opt.a, "family parameter a");
  cmd->add_option("--r0", opt.r0, "soliton scale r0");
  cmd->add_option("--lambda", opt.lambda_csv,
                  "comma-separated torus periods (default: 2*pi each)");
  cmd->add_option("--G", opt.G, "Newton constant");
  cmd->add_option("--r", opt.r, "evaluation radius (default 2 r_plus)");
  cmd->add_option("--sweep", opt.sweep, "parameter sweep, e.g. a=-5..5:41");
  cmd->add_option("--format", opt.format, "output format: table, csv or json")
      ->check(CLI::IsMember({"table", "csv", "json"}));
  cmd->add_option("--out", opt.out, "write the report to this path");
  cmd->add_option("--tol-fd", opt.tol_fd, "finite-difference tolerance");
  cmd->add_option("--tol-extrap", opt.tol_extrap, "extrapolation tolerance");
  cmd->add_option("--root-tol", opt.root_tol, "root-location tolerance");
  cmd->add_option("--config", opt.config_path,
                  "flat key=value configuration file (flags take precedence)");
}

/// Applies "key=value" lines (keys named like the long flags, without the
/// dashes) for every option the command line leaves untouched. Blank lines
/// and lines starting with '#' are skipped.
void apply_config_file(const CLI::App* cmd, CliOptions& opt) {
  std::ifstream file(opt.config_path);
  if (!file) throw std::invalid_argument("cannot read config file: " + opt.config_path);
  auto untouched = [cmd](const std::string& flag) { return cmd->count(flag) == 0; };
  std::string line;
  int line_no = 0;
  while (std::getline(file, line)) {
    ++line_no;
    const auto start = line.find_first_not_of(" \t");
    if (start == std::string::npos || line[start] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config file line " + std::to_string(line_no) +
                                  ": expected key=value");
    const std::string key = line.substr(start, eq - start);
    const std::string value = line.substr(eq + 1);
    try {
      if (key == "n") {
        if (untouched("--n")) opt.n = std::stoi(value);
      } else if (key == "ell") {
        if (untouched("--ell")) opt.ell = std::stod(value);
      } else if (key == "a") {
        if (untouched("--a")) opt.a = std::stod(value);
      } else if (key == "r0") {
        if (untouched("--r0")) opt.r0 = std::stod(value);
      } else if (key == "lambda") {
        if (untouched("--lambda")) opt.lambda_csv = value;
      } else if (key == "G") {
        if (untouched("--G")) opt.G = std::stod(value);
      } else if (key == "r") {
        if (untouched("--r")) opt.r = std::stod(value);
      } else if (key == "sweep") {
        if (untouched("--sweep")) opt.sweep = value;
      } else if (key == "format") {
        if (untouched("--format")) opt.format = value;
      } else if (key == "out") {
        if (untouched("--out")) opt.out = value;
      } else if (key == "tol-fd") {
        if (untouched("--tol-fd")) opt.tol_fd = std::stod(value);
      } else if (key == "tol-extrap") {
        if (untouched("--tol-extrap")) opt.tol_extrap = std::stod(value);
      } else if (key == "root-tol") {
        if (untouched("--root-tol")) opt.root_tol = std::stod(value);
      } else {
        throw std::invalid_argument("config file: unknown key " + key);
      }
    } catch (const std::invalid_argument&) {
      throw;
    } catch (const std::exception&) {
      throw std::invalid_argument("config file line " + std::to_string(line_no) +
                                  ": bad value for " + key);
    }
  }
}

hmlab::RunConfig build_config(const CliOptions& opt, hmlab::Command command) {
  hmlab::SolitonParams params;
  params.n = opt.n;
  params.ell = opt.ell;
  params.a = opt.a;
  params.r0 = opt.r0;
  params.G = opt.G;
  if (opt.lambda_csv.empty()) {
    params.lambdas = Eigen::VectorXd::Constant(std::max(opt.n - 2, 0), 2.0 * hmlab::kPi);
  } else {
    std::vector<double> values;
    std::stringstream ss(opt.lambda_csv);
    std::string item;
    while (std::getline(ss, item, ',')) values.push_back(std::stod(item));
    params.lambdas = Eigen::Map<const Eigen::VectorXd>(
        values.data(), static_cast<Eigen::Index>(values.size()));
  }
  params.validate();

  hmlab::RunConfig cfg;
  cfg.params = params;
  cfg.command = command;
  cfg.r = opt.r;
  cfg.format = hmlab::format_from_name(opt.format);
  cfg.out_path = opt.out;
  cfg.tol.tol_fd = opt.tol_fd;
  cfg.tol.tol_extrap = opt.tol_extrap;
  cfg.tol.root_tol = opt.root_tol;
  if (!opt.sweep.empty()) cfg.sweep = hmlab::parse_sweep(opt.sweep);
  return cfg;
}

int write_output(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) {
    std::cerr << "error: cannot open output path: " << path << "\n";
    return 2;
  }
  file << text;
  return file.good() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for soliton metrics of Horowitz-Myers type"};
  app.require_subcommand(1);

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"curvature", "closed-form vs finite-difference curvature at a point"},
      {"regularity", "root location, period, and cone-angle checks"},
      {"static-check", "static vacuum residuals and the lapse fit"},
      {"complex", "almost-complex structure checks (even n)"},
      {"energy", "boundary-integral and Hamiltonian energies"},
      {"compare", "energy comparison with the matched-period companion"},
      {"verify-all", "every check of the selected member"},
  };

  std::vector<CliOptions> options(commands.size());
  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    CLI::App* sub = app.add_subcommand(commands[i].first, commands[i].second);
    add_common_options(sub, options[i]);
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (!subs[i]->parsed()) continue;
    try {
      if (!options[i].config_path.empty()) apply_config_file(subs[i], options[i]);
      const hmlab::RunConfig cfg =
          build_config(options[i], hmlab::command_from_name(commands[i].first));
      const hmlab::Report report = hmlab::run_report(cfg);
      const int io_status = write_output(hmlab::emit(report, cfg.format), cfg.out_path);
      if (io_status != 0) return io_status;
      return report.all_pass() ? 0 : 1;
    } catch (const std::invalid_argument& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    } catch (const std::runtime_error& e) {
      std::cerr << "numerical failure: " << e.what() << "\n";
      return 3;
    }
  }
  return 2;
}
