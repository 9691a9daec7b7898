#include "lazysched/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <memory>
#include <mutex>
#include <thread>

#include "lazysched/lazy_dp.hpp"

namespace lazysched {

int worker_count() {
  if (const char* env = std::getenv("LAZYSCHED_THREADS")) {
    const int parsed = std::atoi(env);
    if (parsed >= 1) return parsed;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

void parallel_for(std::size_t count,
                  const std::function<void(std::size_t)>& fn) {
  const int workers =
      std::min<std::size_t>(static_cast<std::size_t>(worker_count()), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      while (!failed.load(std::memory_order_relaxed)) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) break;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          failed.store(true);
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

namespace {

RunMetrics run_policy_or_flag(const LazyPolicy& policy,
                              const Realization& realization,
                              const SystemConfig& cfg, std::string& error) {
  try {
    return simulate_lazy(policy, realization, cfg);
  } catch (const std::exception& e) {
    error = e.what();
    return RunMetrics{};
  }
}

}  // namespace

std::vector<ResultRow> run_lazy_experiment(const ExperimentSpec& spec) {
  const SystemConfig& cfg = spec.config;
  const ArrivalChain& chain = spec.processes.arrivals;

  auto dp = std::make_shared<const DpSolution>(dp_solve(cfg, chain));
  struct NamedPolicy {
    const char* name;
    LazyPolicy policy;
  };
  const std::vector<NamedPolicy> policies{
      {"dp", make_dp_policy(dp)},
      {"etls", make_etls_policy(cfg, chain, spec.etls_one_step)},
      {"hasty", make_hasty_policy(cfg)},
      {"constant", make_constant_policy(cfg, chain)},
  };

  std::vector<ResultRow> rows(
      static_cast<std::size_t>(spec.realizations) * policies.size());
  parallel_for(spec.realizations, [&](std::size_t index) {
    const Realization realization = generate_realization(
        spec.processes, spec.seed, index, cfg.horizon_slots);
    for (std::size_t p = 0; p < policies.size(); ++p) {
      ResultRow& row = rows[index * policies.size() + p];
      row.realization = index;
      row.policy = policies[p].name;
      row.metrics = run_policy_or_flag(policies[p].policy, realization, cfg,
                                       row.error);
    }
  });
  return rows;
}

std::vector<ResultRow> run_general_experiment(const ExperimentSpec& spec,
                                              std::vector<TraceRow>* traces) {
  const SystemConfig& cfg = spec.config;
  const int n_slots = cfg.horizon_slots;
  constexpr const char* kPolicies[] = {"offline", "heuristic"};

  std::vector<ResultRow> rows(static_cast<std::size_t>(spec.realizations) * 2);
  std::vector<TraceRow> trace_rows;
  if (traces)
    trace_rows.resize(static_cast<std::size_t>(spec.realizations) * 2 *
                      n_slots);

  parallel_for(spec.realizations, [&](std::size_t index) {
    const Realization realization =
        generate_realization(spec.processes, spec.seed, index, n_slots);
    for (int p = 0; p < 2; ++p) {
      ResultRow& row = rows[index * 2 + p];
      row.realization = index;
      row.policy = kPolicies[p];
      try {
        const GeneralRun run = simulate_general(
            p == 0 ? GeneralPolicy::kOfflineWaterfill
                   : GeneralPolicy::kOnlineHeuristic,
            realization, cfg, spec.initial_energy, spec.initial_backlog,
            spec.heuristic_iterations);
        row.metrics = run.metrics;
        if (traces) {
          for (int n = 0; n < n_slots; ++n) {
            TraceRow& t =
                trace_rows[(index * 2 + p) * n_slots + n];
            t.realization = index;
            t.policy = kPolicies[p];
            t.entry = run.schedule[n];
            t.gain = realization.gains[n];
            t.arrival_bits = realization.arrivals[n];
            t.harvest = realization.harvests[n];
          }
        }
      } catch (const std::exception& e) {
        row.error = e.what();
        row.metrics = RunMetrics{};
      }
    }
  });
  if (traces) *traces = std::move(trace_rows);
  return rows;
}

std::vector<SweepRow> run_sweep_experiment(const ExperimentSpec& spec,
                                           const std::vector<int>& horizons) {
  std::vector<SweepRow> rows;
  for (int horizon : horizons) {
    ExperimentSpec point = spec;
    point.config.horizon_slots = horizon;
    const std::vector<ResultRow> runs = run_general_experiment(point, nullptr);
    for (int p = 0; p < 2; ++p) {
      const char* name = p == 0 ? "offline" : "heuristic";
      double tp = 0.0;
      double energy = 0.0;
      int counted = 0;
      for (const ResultRow& row : runs) {
        if (row.policy != name || !row.error.empty()) continue;
        tp += row.metrics.avg_throughput_mbps;
        energy += row.metrics.energy_per_slot;
        ++counted;
      }
      SweepRow out;
      out.horizon = horizon;
      out.policy = name;
      out.realizations = counted;
      if (counted > 0) {
        out.mean_throughput_mbps = tp / counted;
        out.mean_energy_per_slot = energy / counted;
      }
      rows.push_back(out);
    }
  }
  return rows;
}

}  // namespace lazysched
