// Command-line front end: certify the local stable/unstable manifolds of a
// saddle described by a system file.

#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "invman/system_io.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Verified Taylor parametrisations of saddle stable/unstable manifolds"};
  invman::RunConfig cfg;
  std::string mode = "float";
  int rho = 0;
  int with_g = 0;

  app.add_option("--input", cfg.input, "System definition file")->required()->check(CLI::ExistingFile);
  app.add_option("--order", cfg.order, "Truncation order n1")->check(CLI::Range(2, 100000));
  app.add_option("--mode", mode, "Arithmetic: float or interval")->check(CLI::IsMember({"float", "interval"}));
  auto* rho_opt = app.add_option("--rho", rho, "Tail cut-off order for the quadratic bound")->check(CLI::PositiveNumber);
  auto* g_opt = app.add_option("--with-G", with_g, "Also compute the normal-form tail G to this order")
                    ->check(CLI::Range(2, 100000));
  app.add_option("--samples", cfg.samples, "Enclosure samples per parameter axis")->check(CLI::NonNegativeNumber);
  app.add_option("--out", cfg.out_dir, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : invman::kParseError;
  }

  cfg.mode = mode == "interval" ? invman::Mode::Interval : invman::Mode::Float;
  if (rho_opt->count() > 0) cfg.rho = rho;
  if (g_opt->count() > 0) cfg.normal_form_order = with_g;
  return invman::run_pipeline(cfg, std::cerr);
}
