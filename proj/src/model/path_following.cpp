#include "swipt/path_following.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "swipt/socp_builder.hpp"

namespace swipt {

void AlgoConfig::validate() const {
  if (!(tol_converge > 0.0)) throw std::invalid_argument("tol_converge must be positive");
  if (max_outer_iters < 1) throw std::invalid_argument("max_outer_iters must be at least 1");
  if (!(0.0 < alpha_min && alpha_min < alpha_max && alpha_max < 1.0)) throw std::invalid_argument("bad alpha box");
  if (!(tol_solve > 0.0)) throw std::invalid_argument("tol_solve must be positive");
}

std::string to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Converged: return "converged";
    case RunStatus::MaxOuterIters: return "max_outer_iters";
    case RunStatus::Degraded: return "degraded";
    case RunStatus::Infeasible: return "infeasible";
    case RunStatus::NumericalFailure: return "numerical_failure";
  }
  return "unknown";
}

namespace {

bool usable(conic::SolverStatus s) { return s == conic::SolverStatus::Optimal; }

// Solves once, then once more with a looser tolerance when the first attempt
// runs out of iterations or loses accuracy.
conic::SolverResult solve_with_retry(const conic::ConicProgram& prog, const AlgoConfig& cfg, int& iterations) {
  conic::SolverSettings st;
  st.tol = cfg.tol_solve;
  st.max_iters = cfg.solver_max_iters;
  conic::SolverResult r = conic::solve(prog, st);
  iterations += r.iterations;
  if (r.status == conic::SolverStatus::MaxIters || r.status == conic::SolverStatus::NumericalFailure) {
    st.tol *= 10.0;
    r = conic::solve(prog, st);
    iterations += r.iterations;
  }
  return r;
}

void clamp_alpha(DesignPoint& pt, const AlgoConfig& cfg) {
  for (int k = 0; k < pt.alpha.size(); ++k) pt.alpha[k] = std::clamp(pt.alpha[k], cfg.alpha_min, cfg.alpha_max);
}

double step_norm(const NetworkInstance& inst, const DesignPoint& a, const DesignPoint& b) {
  double s = 0.0;
  for (std::size_t n = 0; n < a.w.size(); ++n) s += (a.w[n] - b.w[n]).squaredNorm() / inst.P;
  s += (a.alpha - b.alpha).squaredNorm();
  return std::sqrt(s);
}

enum class Goal { Sum, Min };

double evaluate(Goal g, const NetworkInstance& inst, const DesignPoint& pt) {
  return g == Goal::Sum ? sum_eh(inst, pt) : min_eh(inst, pt);
}

double surrogate_value(Goal g, const ExpansionPoint& exp, const NetworkInstance& inst, const DesignPoint& pt) {
  double sum = 0.0, lo = std::numeric_limits<double>::infinity();
  for (int k = 0; k < inst.N1; ++k) {
    const double v = inst.zeta[k] * minorant_value(exp, inst, pt.w, pt.alpha, k);
    sum += v;
    lo = std::min(lo, v);
  }
  return g == Goal::Sum ? sum : lo;
}

RunResult run(Goal goal, const NetworkInstance& inst, const AlgoConfig& cfg, const DesignPoint* start) {
  inst.validate();
  cfg.validate();
  if (inst.N1 < 1) throw std::invalid_argument("energy objectives need at least one EH-ID UE");
  RunResult res;
  DesignPoint x;
  if (start) {
    x = *start;
  } else {
    InitResult init = initialize(inst, cfg);
    res.solver_iterations = init.solver_iterations;
    if (init.status != RunStatus::Converged) {
      res.status = init.status;
      return res;
    }
    x = init.point;
  }
  clamp_alpha(x, cfg);
  double F = evaluate(goal, inst, x);
  res.trace.initial_objective = F;
  res.status = RunStatus::MaxOuterIters;

  for (int k = 0; k < cfg.max_outer_iters; ++k) {
    const auto t0 = std::chrono::steady_clock::now();
    const ExpansionPoint exp(inst, x, cfg.alpha_min, cfg.alpha_max);
    const BuiltProgram bp = goal == Goal::Sum ? build_sum_eh_program(exp, inst, cfg.alpha_min, cfg.alpha_max)
                                              : build_max_min_program(exp, inst, cfg.alpha_min, cfg.alpha_max);
    IterateRecord rec;
    const conic::SolverResult sol = solve_with_retry(bp.program, cfg, rec.solver_iterations);
    res.solver_iterations += rec.solver_iterations;
    ++res.outer_iterations;
    rec.solver_status = sol.status;
    rec.surrogate_at_expansion = surrogate_value(goal, exp, inst, x);
    if (!usable(sol.status)) {
      rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      res.trace.records.push_back(rec);
      res.status = RunStatus::Degraded;
      break;
    }
    DesignPoint cand = bp.layout.unpack(sol.x);
    clamp_alpha(cand, cfg);
    rec.objective = evaluate(goal, inst, cand);
    rec.surrogate = surrogate_value(goal, exp, inst, cand);
    rec.step_norm = step_norm(inst, x, cand);
    const bool feasible = constraint_residuals(inst, cand).feasible(inst, cfg.feas_tol);
    rec.accepted = feasible && rec.objective >= F;
    rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    res.trace.records.push_back(rec);
    if (!feasible) {
      res.status = RunStatus::Degraded;
      break;
    }
    if (!rec.accepted) {
      res.status = RunStatus::Converged;
      break;
    }
    const double change = rec.objective - F;
    x = std::move(cand);
    F = rec.objective;
    if (change <= cfg.tol_converge * std::abs(F)) {
      res.status = RunStatus::Converged;
      break;
    }
  }
  res.point = std::move(x);
  res.objective = F;
  return res;
}

}  // namespace

InitResult initialize(const NetworkInstance& inst, const AlgoConfig& cfg) {
  inst.validate();
  cfg.validate();
  InitResult out;
  const BuiltProgram bp = build_init_program(inst, cfg.alpha_min, cfg.alpha_max);
  const conic::SolverResult sol = solve_with_retry(bp.program, cfg, out.solver_iterations);
  if (sol.status == conic::SolverStatus::Infeasible) {
    out.status = RunStatus::Infeasible;
    return out;
  }
  if (!usable(sol.status)) {
    out.status = RunStatus::NumericalFailure;
    return out;
  }
  out.point = bp.layout.unpack(sol.x);
  clamp_alpha(out.point, cfg);
  out.min_power = out.point.total_power();
  if (out.min_power > inst.P) {
    out.status = RunStatus::Infeasible;
    return out;
  }
  out.status = constraint_residuals(inst, out.point).feasible(inst, cfg.feas_tol) ? RunStatus::Converged
                                                                                  : RunStatus::NumericalFailure;
  return out;
}

RunResult maximize_sum_eh(const NetworkInstance& inst, const AlgoConfig& cfg, const DesignPoint* start) {
  return run(Goal::Sum, inst, cfg, start);
}

RunResult maximize_min_eh(const NetworkInstance& inst, const AlgoConfig& cfg, const DesignPoint* start) {
  return run(Goal::Min, inst, cfg, start);
}

}  // namespace swipt
