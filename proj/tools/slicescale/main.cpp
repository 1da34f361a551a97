#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

void add_run_flags(CLI::App* sub, slicescale::cli::RunConfig& c) {
  sub->add_option("--tol", c.tol, "Stop when the gradient norm is at most this")->check(CLI::PositiveNumber);
  sub->add_option("--max-iters", c.max_iters, "Iteration budget")->check(CLI::Range(std::size_t{1}, std::size_t(-1)));
  sub->add_option("--seed", c.seed, "Seed for random starts and bound sampling");
  sub->add_option("--trace", c.trace, "Trace detail in the report: none, summary, full")
      ->transform(CLI::CheckedTransformer(std::map<std::string, slicescale::cli::TraceLevel>{
          {"none", slicescale::cli::TraceLevel::none},
          {"summary", slicescale::cli::TraceLevel::summary},
          {"full", slicescale::cli::TraceLevel::full}}));
  sub->add_option("--guard", c.divergence_guard, "Stop as diverging once max|x| exceeds this")
      ->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  slicescale::cli::RunConfig c;
  CLI::App app{"Scale nonnegative matrices and tensors to prescribed slice sums"};
  app.require_subcommand(1);
  app.add_option("-o,--output", c.output, "Write the JSON report here instead of stdout");

  auto* scale = app.add_subcommand("scale", "Scale a tensor to target slice sums");
  scale->add_option("input", c.input, "Tensor file (.json or .csv)")->required();
  scale->add_option("--targets", c.targets, "Targets as inline JSON [[...],...] or a JSON file");
  scale->add_flag("--force", c.force, "Skip the feasibility check");
  scale->add_flag("--random-start", c.random_start, "Start from a seeded random point");
  add_run_flags(scale, c);

  auto* feasible = app.add_subcommand("feasible", "Decide whether a tensor can be scaled to the targets");
  feasible->add_option("input", c.input, "Tensor file (.json or .csv)")->required();
  feasible->add_option("--targets", c.targets, "Targets as inline JSON [[...],...] or a JSON file");

  auto* bridge = app.add_subcommand("bridge", "Solve a discrete Schrodinger bridge B = D1 A D2, Ba = b, B^T 1 = c");
  bridge->add_option("input", c.input, "Bridge file {A, a, b, c}")->required();
  bridge->add_flag("--stochastic", c.stochastic, "Column-stochastic case, c = 1");
  bridge->add_flag("--random-start", c.random_start, "Start from a seeded random point");
  add_run_flags(bridge, c);

  auto* demo = app.add_subcommand("demo-quadratic", "Greedy coordinate minimization of a random SPD quadratic");
  demo->add_option("--dim", c.dimension, "Dimension n (= number of blocks)")->check(CLI::Range(2, 500));
  demo->add_flag("--diagonal", c.diagonal, "Use a diagonal matrix");
  demo->add_option("--input", c.input, "Quadratic file {A, b, c, x0} instead of a random one");
  add_run_flags(demo, c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Help and version exit 0; every other parse failure is a usage error.
    return app.exit(e) == 0 ? slicescale::cli::kExitOk : slicescale::cli::kExitInput;
  }
  c.command = app.get_subcommands().front()->get_name();

  slicescale::cli::configure_logging();
  return slicescale::cli::dispatch(c, std::cout, std::cerr);
}
