// wavetrans command line: configuration-driven experiment runner.
// Links only the C API of the shared library.
#include <CLI11.hpp>

#include <cstdio>

#include "wavetrans.h"

int main(int argc, char** argv) {
  CLI::App app{std::string("wavetrans ") + wt_version() +
               " - wave-energy transport and source inversion in random waveguides"};
  app.require_subcommand(1);

  CLI::App* run = app.add_subcommand("run", "run the task described by a JSON config");
  std::string config_path;
  std::string out_dir;
  long long seed = -1;
  std::string figure;
  run->add_option("config", config_path, "path to the JSON experiment config")->required();
  run->add_option("--out", out_dir, "output directory (overrides config output_dir)");
  run->add_option("--seed", seed, "seed override (>= 0)");
  run->add_option("--figure", figure,
                  "reproduce a figure: fig2|fig3|fig4|fig5|fig6|lambda_pert");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // usage problems share the config-error code
  }

  const int status = wt_run(config_path.c_str(), out_dir.empty() ? nullptr : out_dir.c_str(),
                            seed, figure.empty() ? nullptr : figure.c_str());
  if (status != 0) {
    const char* message = wt_last_error();
    if (message != nullptr && message[0] != '\0') std::fprintf(stderr, "%s\n", message);
    return status == WT_ERR_CONFIG ? 2 : 3;
  }
  return 0;
}
