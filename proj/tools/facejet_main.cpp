#include <CLI11.hpp>

#include <iostream>

#include "facejet/commands.hpp"
#include "facejet/error.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Illumination-normalized Gabor jet face identification"};
  app.require_subcommand(1);

  std::string config_path;
  std::string probe, out, strategy;
  std::uint64_t seed = 0;
  bool raw = false;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--out", out, "Output path overriding the config");
    sub->add_option("--strategy", strategy, "Convolution engine")->check(CLI::IsMember({"direct", "fft"}));
    sub->add_option("--seed", seed, "Perturbation seed overriding the config");
  };
  CLI::App* select = app.add_subcommand("select", "Choose discriminant feature points");
  CLI::App* enroll = app.add_subcommand("enroll", "Build a gallery from the dataset");
  CLI::App* identify = app.add_subcommand("identify", "Rank gallery subjects for one probe");
  CLI::App* evaluate = app.add_subcommand("evaluate", "Rank-1/CMC report over the probe set");
  CLI::App* perturb = app.add_subcommand("perturb", "Write perturbed copies of the probe set");
  for (CLI::App* sub : {select, enroll, identify, evaluate, perturb}) add_common(sub);
  identify->add_option("--probe", probe, "Probe image")->required();
  evaluate->add_flag("--raw-coefficients", raw, "Also evaluate un-normalized coefficients");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : facejet::kExitConfig;
  }

  facejet::CommandOptions options;
  if (!probe.empty()) options.probe = probe;
  if (!out.empty()) options.out = out;
  if (!strategy.empty()) options.strategy = facejet::parse_strategy(strategy);
  for (CLI::App* sub : {select, enroll, identify, evaluate, perturb})
    if (sub->parsed() && sub->count("--seed")) options.seed = seed;
  options.raw_coefficients = raw;

  std::string command;
  for (CLI::App* sub : {select, enroll, identify, evaluate, perturb})
    if (sub->parsed()) command = sub->get_name();
  return facejet::run_command(command, config_path, options, std::cout, std::cerr);
}
