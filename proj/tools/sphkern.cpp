#include <iostream>

#include "CLI11.hpp"
#include "sphkern_cli.hpp"

int main(int argc, char** argv) {
  using sphkern::cli::RunConfig;
  RunConfig cfg;

  CLI::App app{"Spectra, widths and finite-rank approximation of isotropic kernels on spheres"};
  app.set_version_flag("--version", sphkern::cli::kToolVersion);
  app.require_subcommand(1, 1);
  app.fallthrough();

  app.add_option("--m", cfg.m, "sphere dimension m of S^m");
  app.add_option("--kernel", cfg.kernel,
                 "gaussian:sigma=S[,form=power|closed], dotpower:eps=E, constant:c=C, linear, "
                 "csv:PATH");
  app.add_option("--kernel-kind", cfg.kernel_kind, "csv kernel coefficients: power|eigen")
      ->check(CLI::IsMember({"power", "eigen"}));
  app.add_option("--family", cfg.family, "shifting|caps|steklov")
      ->check(CLI::IsMember({"shifting", "caps", "steklov"}));
  app.add_option("--kmax", cfg.kmax, "largest harmonic degree");
  app.add_option("--nmax", cfg.nmax, "largest width / diagnostic index");
  app.add_option("--l", cfg.l, "Jackson order or auto");
  app.add_option("--n", cfg.n, "Jackson degree parameter(s)");
  app.add_option("--r", cfg.r, "sine exponent r or auto");
  app.add_option("--rho", cfg.rho, "Hölder exponent used by decay diagnostics");
  app.add_option("--t", cfg.t, "explicit t values");
  app.add_option("--t-min", cfg.t_min, "smallest t of the log grid");
  app.add_option("--t-max", cfg.t_max, "largest t of the log grid");
  app.add_option("--t-count", cfg.t_count, "points of the log grid");
  app.add_option("--ugrid", cfg.ugrid, "Chebyshev points for the Hölder deviation");
  app.add_option("--ntheta", cfg.ntheta, "oracle grid latitudes");
  app.add_option("--nphi", cfg.nphi, "oracle grid longitudes");
  app.add_option("--count", cfg.count, "oracle eigenvalues to compare");
  app.add_option("--floor", cfg.floor, "oracle comparison floor");
  app.add_option("--quad-nodes", cfg.quad_nodes, "Gauss–Gegenbauer size (0 = default)");
  app.add_option("--out", cfg.out, "output file (default stdout)");
  app.add_option("--format", cfg.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));

  for (const auto& name : sphkern::cli::command_names()) {
    app.add_subcommand(name)->callback([&cfg, name] { cfg.command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    sphkern::cli::report_error(std::cerr, cfg.command, "invalid_config", e.what());
    return sphkern::cli::kExitConfig;
  }
  return sphkern::cli::run(cfg, std::cout, std::cerr);
}
