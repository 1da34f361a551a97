#include "commands.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "io.hpp"
#include "slicescale/slicescale.hpp"

namespace slicescale::cli {

using nlohmann::json;

void RunConfig::validate() const {
  if (!(tol > 0.0)) throw Error("tol must be > 0");
  if (max_iters < 1) throw Error("max_iters must be >= 1");
  if (!(divergence_guard > 0.0)) throw Error("divergence guard must be > 0");
}

void configure_logging() {
  auto logger = spdlog::stderr_color_mt("slicescale");
  logger->set_pattern("[%l] %v");
  spdlog::set_default_logger(logger);
  const char* env = std::getenv("SLICESCALE_LOG");
  spdlog::set_level(env ? spdlog::level::from_str(env) : spdlog::level::warn);
}

namespace {

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

void emit(json report, const RunConfig& config, std::ostream& out) {
  report["timestamp"] = utc_timestamp();
  if (config.output.empty()) {
    out << report.dump(2) << '\n';
    return;
  }
  std::ofstream f(config.output);
  if (!f) throw IoError("cannot write " + config.output);
  f << report.dump(2) << '\n';
}

json blocks_json(const BlockVector& x) { return x.blocks(); }

json trace_json(const IterateTrace& trace, TraceLevel level) {
  json t;
  json objective = json::array();
  json choices = json::array();
  json grads = json::array();
  for (const auto& e : trace.entries) {
    objective.push_back(e.objective);
    grads.push_back(e.gradient_norm);
    if (e.block) choices.push_back(*e.block);
  }
  t["objective"] = std::move(objective);
  t["block_choices"] = std::move(choices);
  t["gradient_norms"] = std::move(grads);
  if (level == TraceLevel::full) {
    json norms = json::array();
    for (const auto& e : trace.entries) norms.push_back(e.block_norms);
    t["block_norms"] = std::move(norms);
    json iterates = json::array();
    for (const auto& x : trace.iterates) iterates.push_back(blocks_json(x));
    t["iterates"] = std::move(iterates);
  }
  return t;
}

// Sampled rate certificate: bound curve for k >= 1 against the observed gaps
// f(x_k) - f(x_final), k >= 0.
json certificate_json(const BlockProblem& problem, const IterateTrace& trace, const BlockVector& x_final,
                      std::uint64_t seed) {
  if (trace.steps() == 0) return nullptr;
  try {
    const auto [alpha, beta] = estimate_alpha_beta(problem, sublevel_samples(trace.iterates, x_final, 16, seed));
    const ConvergenceBound bound =
        ConvergenceBound::make(problem.num_blocks(), alpha, beta, trace.entries.front().gradient_norm);
    const Vector gaps = trace.gaps_to_final();
    json curve = json::array();
    bool dominated = true;
    for (std::size_t k = 1; k <= trace.steps(); ++k) {
      const double b = theoretical_bound(bound, k);
      curve.push_back(b);
      dominated = dominated && gaps[k] <= 1.05 * b;
    }
    return {{"label", "sampled"},        {"alpha", alpha},
            {"beta", beta},              {"kappa", bound.kappa},
            {"grad0_norm", bound.grad0_norm}, {"bound_curve", std::move(curve)},
            {"observed_gaps", gaps},     {"bound_dominates", dominated}};
  } catch (const Error& e) {
    spdlog::warn("certificate unavailable: {}", e.what());
    return {{"label", "sampled"}, {"error", e.what()}};
  }
}

json feasibility_json(const FeasibilityReport& f, const DenseTensor& t, const SliceTargets& s) {
  json j{{"verdict", std::string(to_string(f.verdict))},
         {"lp", {{"pivots", f.lp.pivots}, {"rows", f.lp.rows}, {"columns", f.lp.columns},
                 {"phase_one_objective", f.lp.phase_one_objective}}}};
  if (f.witness) {
    j["witness"] = blocks_json(*f.witness);
    j["witness_verified"] = verify_witness(t, s, *f.witness);
  }
  return j;
}

SliceTargets resolve_targets(const RunConfig& config, const TensorFile& f) {
  if (config.targets) return parse_targets(*config.targets);
  if (f.targets) return *f.targets;
  throw Error("no targets: pass --targets or add \"targets\" to the input file");
}

int exit_for(RunStatus s) { return s == RunStatus::converged ? kExitOk : kExitNumerical; }

RunOptions options_from(const RunConfig& config) {
  RunOptions o;
  o.tol = config.tol;
  o.max_iters = config.max_iters;
  o.divergence_guard = config.divergence_guard;
  o.keep_iterates = true;
  return o;
}

template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
}

}  // namespace

int cmd_scale(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    config.validate();
    const TensorFile f = read_tensor_file(config.input);
    SliceTargets targets = resolve_targets(config, f);
    const ScalingProblem p = ScalingProblem::make(f.tensor, std::move(targets));

    json report{{"command", "scale"}, {"dims", p.tensor.dims()}};
    if (!config.force) {
      const FeasibilityReport feas = check_scalable(p.tensor, p.targets);
      report["feasibility"] = feasibility_json(feas, p.tensor, p.targets);
      if (feas.verdict == Verdict::not_scalable) {
        spdlog::info("tensor is not scalable to the targets");
        report["status"] = "not_scalable";
        emit(std::move(report), config, out);
        return static_cast<int>(kExitInfeasible);
      }
    }

    const BlockVector x0 = config.random_start ? random_start(p, config.seed) : p.zero_point();
    const RunOptions opts = options_from(config);
    const bool projected = p.frame.degenerate();
    spdlog::debug("solving on {} (dim V0 = {})", projected ? "V0perp" : "U", p.frame.v0_basis.size());
    const ScalingSolution sol = projected ? solve_modified(p, x0, opts) : solve_positive_case(p, x0, opts);
    spdlog::info("{} after {} steps", to_string(sol.status), sol.trace.steps());

    report["status"] = std::string(to_string(sol.status));
    report["path"] = projected ? "modified" : "standard";
    report["iterations"] = sol.trace.steps();
    report["b"] = sol.b;
    report["normalized"] = sol.normalized;
    report["residuals"] = sol.residuals;
    report["scaled"] = tensor_to_json(sol.scaled);
    report["x"] = blocks_json(sol.x_star);
    if (config.trace != TraceLevel::none) report["trace"] = trace_json(sol.trace, config.trace);
    if (sol.status == RunStatus::converged) {
      std::unique_ptr<BlockProblem> problem;
      if (projected)
        problem = std::make_unique<ProjectedScalingProblem>(p);
      else
        problem = std::make_unique<PositiveScalingProblem>(p);
      report["certificate"] = certificate_json(*problem, sol.trace, sol.x_star, config.seed);
    }
    emit(std::move(report), config, out);
    return exit_for(sol.status);
  });
}

int cmd_feasible(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const TensorFile f = read_tensor_file(config.input);
    const SliceTargets targets = resolve_targets(config, f);
    if (targets.dims() != f.tensor.dims()) throw Error("targets do not match tensor dimensions");
    check_compatibility(targets);
    const FeasibilityReport feas = check_scalable(f.tensor, targets);
    json report{{"command", "feasible"}, {"dims", f.tensor.dims()}};
    report.update(feasibility_json(feas, f.tensor, targets));
    emit(std::move(report), config, out);
    return static_cast<int>(feas.verdict == Verdict::scalable ? kExitOk : kExitInfeasible);
  });
}

int cmd_bridge(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    config.validate();
    const BridgeProblem bp = read_bridge_file(config.input, config.stochastic);
    std::optional<BlockVector> x0;
    if (config.random_start) {
      const ReducedBridge r = reduce(bp);
      const ScalingProblem sp =
          ScalingProblem::make(DenseTensor::from_matrix(r.a_tilde), SliceTargets({r.row_targets, r.col_targets}));
      x0 = random_start(sp, config.seed);
    }
    json report{{"command", "bridge"}, {"stochastic", config.stochastic}};
    try {
      const BridgeSolution sol = solve_bridge(bp, options_from(config), x0);
      report["status"] = std::string(to_string(sol.scaling.status));
      report["path"] = sol.scaling.projected ? "modified" : "standard";
      report["iterations"] = sol.scaling.trace.steps();
      report["B"] = matrix_to_json(sol.B);
      report["row_residual"] = sol.row_residual;
      report["column_residual"] = sol.column_residual;
      report["b_scale"] = sol.scaling.b;
      if (config.trace != TraceLevel::none) report["trace"] = trace_json(sol.scaling.trace, config.trace);
      emit(std::move(report), config, out);
      return exit_for(sol.scaling.status);
    } catch (const InfeasibleError& e) {
      report["status"] = "not_scalable";
      report["message"] = e.what();
      report["witness"] = blocks_json(e.witness());
      emit(std::move(report), config, out);
      return static_cast<int>(kExitInfeasible);
    }
  });
}

int cmd_demo_quadratic(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    config.validate();
    std::optional<QuadraticProblem> q;
    Vector x0;
    if (!config.input.empty()) {
      // {"A": [[...]], "b": [...], "c": 0, "x0": [...]}; b, c, x0 optional.
      const json j = read_json_file(config.input);
      if (!j.is_object() || !j.contains("A")) throw IoError("quadratic file needs \"A\"");
      DenseMatrix a = matrix_from_json(j.at("A"));
      try {
        Vector b = j.contains("b") ? j.at("b").get<Vector>() : Vector(a.rows(), 0.0);
        const double c = j.value("c", 0.0);
        if (j.contains("x0")) x0 = j.at("x0").get<Vector>();
        q.emplace(std::move(a), std::move(b), c);
      } catch (const json::exception& e) {
        throw IoError(std::string("malformed quadratic file: ") + e.what());
      }
    } else {
      q.emplace(QuadraticProblem::random(config.dimension, config.seed, config.diagonal));
    }
    const std::size_t n = q->dimension();
    if (x0.empty()) x0.assign(n, 1.0);
    if (x0.size() != n) throw Error("x0 length does not match A");

    const RunResult r = run(*q, q->point(x0), options_from(config));
    const Vector xstar = q->minimizer();
    double err_inf = 0.0;
    for (std::size_t i = 0; i < n; ++i) err_inf = std::max(err_inf, std::abs(r.x.values()[i] - xstar[i]));

    json report{{"command", "demo-quadratic"},
                {"dimension", n},
                {"A", matrix_to_json(q->a())},
                {"status", std::string(to_string(r.status))},
                {"iterations", r.trace.steps()},
                {"x", r.x.values()},
                {"minimizer_error", err_inf}};
    if (config.trace != TraceLevel::none) report["trace"] = trace_json(r.trace, config.trace);
    report["certificate"] = certificate_json(*q, r.trace, r.x, config.seed);
    emit(std::move(report), config, out);
    return exit_for(r.status);
  });
}

int dispatch(const RunConfig& config, std::ostream& out, std::ostream& err) {
  if (config.command == "scale") return cmd_scale(config, out, err);
  if (config.command == "feasible") return cmd_feasible(config, out, err);
  if (config.command == "bridge") return cmd_bridge(config, out, err);
  if (config.command == "demo-quadratic") return cmd_demo_quadratic(config, out, err);
  err << "error: unknown command '" << config.command << "'\n";
  return kExitInput;
}

}  // namespace slicescale::cli
