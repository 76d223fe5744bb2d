#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "locus/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"locus-forge: multipartite structure analysis"};
  app.require_subcommand(1);

  std::string in_path, out_path, mode;
  double eps = -1.0, eps_rel = -1.0, tau = -1.0;
  long seed = -1;

  std::vector<CLI::App*> subs;
  for (const char* name :
       {"partitions", "recover", "tps", "classical", "check"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--in", in_path, "problem file (JSON)")->required();
    sub->add_option("--out", out_path, "machine-readable report path");
    sub->add_option("--mode", mode, "pairwise | multiway");
    sub->add_option("--eps", eps, "rank / algebra tolerance");
    sub->add_option("--eps-rel", eps_rel, "factorization defect tolerance");
    sub->add_option("--tau", tau, "PCA spectrum threshold");
    sub->add_option("--seed", seed, "seed for randomized searches");
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    locus::ProblemFile input = locus::load_problem(in_path);
    if (!mode.empty()) {
      if (mode == "pairwise")
        input.options.mode = locus::SepMode::Pairwise;
      else if (mode == "multiway")
        input.options.mode = locus::SepMode::Multiway;
      else
        throw locus::InputError("--mode: expected pairwise | multiway");
    }
    if (eps > 0) input.options.eps = eps;
    if (eps_rel > 0) input.options.eps_rel = eps_rel;
    if (tau > 0) input.options.tau = tau;
    if (seed >= 0) input.options.seed = static_cast<unsigned>(seed);

    const std::string command = app.get_subcommands().front()->get_name();
    const locus::CommandResult result =
        locus::run_command(command, input, std::cout);
    if (!out_path.empty()) {
      std::ofstream out(out_path, std::ios::binary);
      if (!out) throw locus::InputError("cannot open output file '" + out_path + "'");
      out << result.machine_body;
    }
    return result.exit_code;
  } catch (const locus::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const locus::ShapeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
}
