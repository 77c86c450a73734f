#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <string>

#include "modeguide/geometry.hpp"
#include "modeguide/report.hpp"
#include "modeguide/solver.hpp"

using namespace modeguide;

int main(int argc, char** argv) {
  CLI::App app{"Neumann-window strip eigenvalue solver", "modeguide"};
  app.set_help_flag("--help", "print help");
  app.require_subcommand(1);
  app.set_config("--config", "", "flat key=value file; flags override it");

  const nlohmann::json defaults = default_config();
  double d = kPi, a = 0, tol = 1e-12, h = 1.0 / 64, L = 0;
  std::string l, format = "csv", out, parity = "both";
  int n = 1, modes = 40, region_modes = 512, jobs = 1, k = 2, levels = 3;
  bool quick = false;

  app.add_option("--d", d, "strip width")->capture_default_str();
  auto* opt_a = app.add_option("--a", a, "window half-length");
  app.add_option("--l", l, "window half-distance, start:stop:step or a single value");
  app.add_option("--n", n, "critical width count or index")->capture_default_str();
  app.add_option("--modes", modes, "interface flux basis size N")->capture_default_str();
  app.add_option("--region-modes", region_modes, "transverse modes per region J")->capture_default_str();
  app.add_option("--tol", tol, "root tolerance")->capture_default_str();
  app.add_option("--jobs", jobs, "worker threads")->capture_default_str();
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  app.add_option("--out", out, "output directory");
  app.add_flag("--quick", quick, "verify without finite-difference refinement");
  app.add_option("--h", h, "finest oracle grid step")->capture_default_str();
  auto* opt_L = app.add_option("--L", L, "oracle box length");
  app.add_option("--k", k, "oracle eigenvalues per sector")->capture_default_str();
  app.add_option("--levels", levels, "oracle grid levels")->capture_default_str();
  app.add_option("--parity", parity, "oracle sector: even, odd or both")->capture_default_str();

  std::string command;
  for (const auto& name : command_names()) {
    auto* sub = app.add_subcommand(name);
    sub->fallthrough();
    sub->callback([&command, name] { command = name; });
  }
  app.get_subcommand("single")->description("eigenvalues of one window");
  app.get_subcommand("split")->description("two-window splitting sweep over l");
  app.get_subcommand("critical")->description("critical window widths");
  app.get_subcommand("threshold")->description("near-threshold sweep at a critical width");
  app.get_subcommand("oracle")->description("finite-difference reference eigenvalues");
  app.get_subcommand("verify")->description("acceptance suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    if (e.get_exit_code() != 0) std::cerr << app.help();
    return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
  }

  nlohmann::json cfg = defaults;
  cfg["d"] = d;
  cfg["a"] = opt_a->count() ? nlohmann::json(a) : nlohmann::json(nullptr);
  cfg["l"] = l;
  cfg["n"] = n;
  cfg["modes"] = modes;
  cfg["region_modes"] = region_modes;
  cfg["tol"] = tol;
  cfg["jobs"] = jobs;
  cfg["format"] = format;
  cfg["quick"] = quick;
  cfg["h"] = h;
  cfg["L"] = opt_L->count() ? nlohmann::json(L) : nlohmann::json(nullptr);
  cfg["k"] = k;
  cfg["levels"] = levels;
  cfg["parity"] = parity;

  const auto log = [](const std::string& s) { std::cerr << s << "\n"; };
  try {
    const RunRecord rec = run_command(command, cfg, log);
    const Rendered r = render(rec, format);
    if (!out.empty()) {
      write_outputs(rec, r, out, utc_timestamp());
    } else {
      std::cout << r.primary;
      if (!r.fits.empty() && format == "csv") std::cout << "\n# fits\n" << r.fits;
    }
    const int code = outcome(rec);
    if (code != kExitOk) {
      std::cerr << "failed criteria:";
      for (const auto& id : rec.outputs.at("failed")) std::cerr << " " << id.get<int>();
      std::cerr << "\n";
    }
    return code;
  } catch (const NonConvergence& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNonConvergence;
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailed;
  }
}
