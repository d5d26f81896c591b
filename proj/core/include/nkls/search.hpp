#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "nkls/config.hpp"
#include "nkls/landscape.hpp"
#include "nkls/rng.hpp"

namespace nkls {

/// Evaluation budget: a walk may compute the overall fitness of at most
/// `budget` alternative configurations. The starting configuration's own
/// fitness is free; every candidate evaluation costs exactly one unit.
struct Meter {
  std::uint64_t budget = 0;
  std::uint64_t consumed = 0;

  std::uint64_t remaining() const { return budget - consumed; }
};

enum class Termination { kBudgetExhausted, kEquilibrium, kTimeStepsComplete };

std::string to_string(Termination t);

enum class SweepOrder { kFixed, kPermuted };

std::string to_string(SweepOrder order);
SweepOrder sweep_order_from_string(const std::string& s);

struct WalkResult {
  Configuration initial_config;
  Configuration final_config;
  double initial_fitness = 0.0;
  double final_fitness = 0.0;
  std::uint64_t evaluations_used = 0;
  std::uint64_t successful_moves = 0;
  std::uint64_t time_steps_executed = 0;
  Termination termination = Termination::kTimeStepsComplete;
};

/// One candidate evaluation, as seen by a trace sink.
struct TraceEvent {
  std::uint64_t time_step;
  int node;
  double candidate_fitness;
  bool accepted;
  std::uint64_t meter_consumed;
};

using TraceSink = std::function<void(const TraceEvent&)>;

/// Random-flip walker: exactly T = budget time steps; each step flips one
/// uniformly chosen bit (with replacement across steps), evaluates the
/// candidate (one meter unit) and moves iff strictly fitter. Acceptance
/// compares against the cached fitness of the current configuration, so each
/// step costs exactly one evaluation. Always consumes the whole budget.
WalkResult run_smmls(const Landscape& landscape, const Configuration& start,
                     Meter meter, SplitMix64& rng, const TraceSink& trace = {});

/// Sweep walker: within a time step candidate flips are tried in sweep order
/// (kFixed: node 0..n-1; kPermuted: a fresh uniform permutation per step,
/// which requires `rng`). The first strict improvement ends the step; a full
/// failed sweep terminates at equilibrium (the configuration is then a strict
/// local optimum); the walk stops with kBudgetExhausted before evaluating a
/// candidate the meter cannot pay for.
WalkResult run_immls(const Landscape& landscape, const Configuration& start,
                     Meter meter, SweepOrder order = SweepOrder::kFixed,
                     SplitMix64* rng = nullptr, const TraceSink& trace = {});

/// (final - initial) / initial. Non-negative: walkers only accept strict
/// improvements and fitness is strictly positive.
double fitness_improvement(const WalkResult& result);

/// 100 * evaluations_used / budget, in [0, 100].
double resource_consumption_pct(const WalkResult& result, std::uint64_t budget);

}  // namespace nkls
