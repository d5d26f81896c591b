#include "nkls/search.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace nkls {

std::string to_string(Termination t) {
  switch (t) {
    case Termination::kBudgetExhausted: return "budget_exhausted";
    case Termination::kEquilibrium: return "equilibrium";
    case Termination::kTimeStepsComplete: return "time_steps_complete";
  }
  return "unknown";
}

std::string to_string(SweepOrder order) {
  return order == SweepOrder::kFixed ? "fixed" : "permuted";
}

SweepOrder sweep_order_from_string(const std::string& s) {
  if (s == "fixed") return SweepOrder::kFixed;
  if (s == "permuted") return SweepOrder::kPermuted;
  throw FormatError("unknown sweep order: " + s);
}

namespace {

void check_walk_args(const Landscape& landscape, const Configuration& start,
                     const Meter& meter, const char* who) {
  if (meter.budget < 1) throw ZeroBudgetError(std::string(who) + ": budget must be >= 1");
  if (start.n() != landscape.n())
    throw DimensionMismatchError(std::string(who) + ": start has wrong length");
}

}  // namespace

WalkResult run_smmls(const Landscape& landscape, const Configuration& start,
                     Meter meter, SplitMix64& rng, const TraceSink& trace) {
  check_walk_args(landscape, start, meter, "smmls");
  const int n = landscape.n();
  IncrementalEvaluator eval(landscape, start);

  WalkResult result;
  result.initial_config = start;
  result.initial_fitness = eval.fitness();

  // Bits rejected since the last accepted move. Once all n have failed the
  // configuration can never change again (each candidate is a deterministic
  // function of the unchanged configuration), so without a trace sink the
  // remaining steps can be settled arithmetically.
  std::vector<std::uint8_t> failed(static_cast<std::size_t>(n), 0);
  int failed_distinct = 0;

  const std::uint64_t budget = meter.budget;
  for (std::uint64_t step = 1; step <= budget; ++step) {
    const int node = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(n)));
    const double current = eval.contribution_sum();
    const double delta = eval.candidate_delta(node);
    const bool accepted = current + delta > current;
    ++meter.consumed;
    if (trace) trace({step, node, (current + delta) / n, accepted, meter.consumed});
    if (accepted) {
      eval.flip(node);
      ++result.successful_moves;
      if (failed_distinct > 0) {
        std::fill(failed.begin(), failed.end(), 0);
        failed_distinct = 0;
      }
    } else if (!failed[static_cast<std::size_t>(node)]) {
      failed[static_cast<std::size_t>(node)] = 1;
      ++failed_distinct;
      if (failed_distinct == n && !trace) {
        meter.consumed = budget;
        break;
      }
    }
  }

  result.time_steps_executed = budget;
  result.evaluations_used = meter.consumed;
  result.termination = Termination::kTimeStepsComplete;
  result.final_config = eval.config();
  result.final_fitness = eval.fitness();
  return result;
}

WalkResult run_immls(const Landscape& landscape, const Configuration& start,
                     Meter meter, SweepOrder order, SplitMix64* rng,
                     const TraceSink& trace) {
  check_walk_args(landscape, start, meter, "immls");
  if (order == SweepOrder::kPermuted && rng == nullptr)
    throw ParameterDomainError("immls: permuted order requires a random stream");

  const int n = landscape.n();
  IncrementalEvaluator eval(landscape, start);

  WalkResult result;
  result.initial_config = start;
  result.initial_fitness = eval.fitness();

  std::vector<int> sweep(static_cast<std::size_t>(n));
  std::iota(sweep.begin(), sweep.end(), 0);

  std::uint64_t time_step = 0;
  for (;;) {
    if (order == SweepOrder::kPermuted) {
      for (int j = n - 1; j > 0; --j) {
        const auto pick = static_cast<std::size_t>(
            rng->uniform_below(static_cast<std::uint64_t>(j) + 1));
        std::swap(sweep[static_cast<std::size_t>(j)], sweep[pick]);
      }
    }

    bool moved = false;
    bool exhausted = false;
    bool step_counted = false;
    for (int pos = 0; pos < n; ++pos) {
      if (meter.consumed == meter.budget) {
        exhausted = true;  // stop before a candidate the meter cannot pay for
        break;
      }
      if (!step_counted) {
        ++time_step;
        step_counted = true;
      }
      const int node = sweep[static_cast<std::size_t>(pos)];
      const double current = eval.contribution_sum();
      const double delta = eval.candidate_delta(node);
      const bool accepted = current + delta > current;
      ++meter.consumed;
      if (trace) trace({time_step, node, (current + delta) / n, accepted, meter.consumed});
      if (accepted) {
        eval.flip(node);
        ++result.successful_moves;
        moved = true;
        break;
      }
    }

    if (exhausted) {
      result.termination = Termination::kBudgetExhausted;
      break;
    }
    if (!moved) {
      // a full sweep found no strict improvement: every neighbor is worse
      result.termination = Termination::kEquilibrium;
      break;
    }
  }

  result.time_steps_executed = time_step;
  result.evaluations_used = meter.consumed;
  result.final_config = eval.config();
  result.final_fitness = eval.fitness();
  return result;
}

double fitness_improvement(const WalkResult& result) {
  return (result.final_fitness - result.initial_fitness) / result.initial_fitness;
}

double resource_consumption_pct(const WalkResult& result, std::uint64_t budget) {
  if (budget < 1)
    throw ParameterDomainError("resource_consumption_pct: budget must be >= 1");
  return 100.0 * static_cast<double>(result.evaluations_used) /
         static_cast<double>(budget);
}

}  // namespace nkls
