// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any
// failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "msim/metrics.hpp"
#include "msim/runner.hpp"
#include "msim/strategies.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace msim;

namespace {

int failures = 0;

void report(int n, bool ok, const std::string& what, const std::string& detail) {
  std::printf("%s criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", n, what.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

struct PresetRun {
  Scenario scenario;
  std::vector<Replication> reps;
  MetricsLedger ledger;
  double seconds = 0;
};

PresetRun run_preset(const std::string& name, const std::vector<std::string>& overrides = {}) {
  PresetRun p{testing::preset(name, overrides), {}, {}, 0};
  const auto t0 = std::chrono::steady_clock::now();
  p.reps = run_replications(p.scenario, p.scenario.seed, p.scenario.replications);
  p.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  p.ledger = merged_ledger(p.reps);
  return p;
}

void applicability_matrix() {
  int mismatches = 0;
  for (int n = 1; n <= kNumStrategies; ++n) {
    const StrategyId id = *strategy_from_number(n);
    const auto& row = oracle::kTable2[static_cast<std::size_t>(n - 1)];
    const std::set<Generation> both = {Generation::k5G, Generation::k4G};
    const bool got[4] = {applicability(id, {both, Deployment::kRan}), applicability(id, {both, Deployment::kCn}),
                         applicability(id, {{Generation::k5G}, std::nullopt}),
                         applicability(id, {{Generation::k4G}, std::nullopt})};
    for (int c = 0; c < 4; ++c) mismatches += got[c] != row[static_cast<std::size_t>(c)];
  }
  report(1, mismatches == 0, "applicability matrix", fmt("%d of 56 cells differ", mismatches));
}

void collision_oracle() {
  std::mt19937_64 gen(1);
  const std::uint32_t Ts[] = {32, 64, 128, 256};
  const std::uint32_t Ns[] = {1, 2, 4};
  int mismatches = 0;
  const int cases = 10000;
  for (int i = 0; i < cases; ++i) {
    oracle::Timing ta{Ts[gen() % 4], Ns[gen() % 3], 10000, static_cast<std::int64_t>(gen() % 10000), 0};
    oracle::Timing tb{Ts[gen() % 4], Ns[gen() % 3], 10000, static_cast<std::int64_t>(gen() % 10000), 0};
    const std::uint64_t ida = gen() % 1000000, idb = gen() % 1000000;
    PagingConfig ca, cb;
    ca.drx_cycle_frames = ta.T;
    ca.occasions_per_frame = ta.Ns;
    ca.frame_offset = Duration(ta.frame_offset_us);
    cb.drx_cycle_frames = tb.T;
    cb.occasions_per_frame = tb.Ns;
    cb.frame_offset = Duration(tb.frame_offset_us);
    const auto rep = detect_collision(PagingSchedule::make(compute_occasion(ida, ca), ca),
                                      PagingSchedule::make(compute_occasion(idb, cb), cb), 1);
    const auto e = oracle::enumerate_collisions(oracle::first_start(ida, ta), 10000LL * ta.T, 10000 / ta.Ns,
                                                oracle::first_start(idb, tb), 10000LL * tb.T, 10000 / tb.Ns);
    const bool ok = rep.occurrences == e.windows && rep.colliding == e.colliding &&
                    std::abs(rep.fraction_colliding - static_cast<double>(e.colliding) / static_cast<double>(e.windows)) < 1e-12;
    mismatches += !ok;
  }
  report(2, mismatches == 0, "collision detection against enumeration", fmt("%d of %d cases differ", mismatches, cases));
}

}  // namespace

int main() {
  applicability_matrix();
  collision_oracle();

  std::map<std::string, PresetRun> baseline;
  for (const auto& name : testing::preset_names()) baseline.emplace(name, run_preset(name));

  // 3: paging offset removes every collision; the baseline rate on one
  // network is one slot in T * Ns.
  {
    bool ok = true;
    std::string detail;
    for (const auto& name : testing::preset_names()) {
      const PresetRun r = run_preset(name, {"strategies.active=[13]"});
      const double after = r.ledger.collision_pairs ? static_cast<double>(r.ledger.colliding_pairs_after) /
                                                          static_cast<double>(r.ledger.collision_pairs)
                                                    : 0.0;
      ok &= r.ledger.collision_pairs > 0 && r.ledger.colliding_pairs_after == 0 && r.ledger.errors == 0;
      detail += fmt("%s after=%.4f; ", name.c_str(), after);
    }
    const auto& b = baseline.at("4g-4g-single-rx-same-mno").ledger;
    const double n = static_cast<double>(b.collision_pairs);
    const double p = 1.0 / 128.0;
    const double frac = static_cast<double>(b.colliding_pairs_before) / n;
    const double tol = 3.0 * std::sqrt(p * (1 - p) / n);
    ok &= std::abs(frac - p) <= tol;
    detail += fmt("baseline 4g-4g single-rx %.5f vs %.5f +- %.5f", frac, p, tol);
    report(3, ok, "paging offset removes occasion collisions", detail);
  }

  // 4: busy indication stops declined pages from escalating and misleading
  // the network.
  {
    const auto& b = baseline.at("5g-5g-dual-rx-same-mno").ledger;
    const PresetRun r =
        run_preset("5g-5g-dual-rx-same-mno", {"strategies.active=[3]", "strategies.params.busy_in_inactive=true"});
    const bool ok = b.declined_escalations > 0 && b.misleading_declined > 0 && r.ledger.declined_escalations == 0 &&
                    r.ledger.misleading_declined == 0 && r.ledger.busy_replies > 0;
    report(4, ok, "busy indication",
           fmt("baseline escalations=%lld misleading=%lld; busy escalations=%lld misleading=%lld replies=%lld",
               static_cast<long long>(b.declined_escalations), static_cast<long long>(b.misleading_declined),
               static_cast<long long>(r.ledger.declined_escalations),
               static_cast<long long>(r.ledger.misleading_declined), static_cast<long long>(r.ledger.busy_replies)));
  }

  // 5: local < graceful < leave-and-return in every replication.
  {
    const std::string name = "5g-4g-dual-rx-different-mno";
    const PresetRun local = run_preset(name, {"strategies.active=[1,4]"});
    const PresetRun graceful = run_preset(name, {"strategies.active=[1,5]"});
    const PresetRun lar = run_preset(name, {"strategies.active=[1,6]"});
    auto mean = [](const Replication& r, LeaveMode m) {
      const auto i = static_cast<std::size_t>(m);
      return r.ledger.leaves[i] ? static_cast<double>(r.ledger.leave_us[i]) / static_cast<double>(r.ledger.leaves[i]) / 1000.0
                                : NAN;
    };
    int ordered = 0;
    const int n = static_cast<int>(local.reps.size());
    for (int i = 0; i < n; ++i) {
      const double a = mean(local.reps[static_cast<std::size_t>(i)], LeaveMode::kLocal);
      const double b = mean(graceful.reps[static_cast<std::size_t>(i)], LeaveMode::kGraceful);
      const double c = mean(lar.reps[static_cast<std::size_t>(i)], LeaveMode::kLeaveAndReturn);
      ordered += a < b && b < c;
    }
    auto pooled = [](const PresetRun& r, LeaveMode m) {
      const auto i = static_cast<std::size_t>(m);
      return static_cast<double>(r.ledger.leave_us[i]) / static_cast<double>(std::max<std::int64_t>(1, r.ledger.leaves[i])) / 1000.0;
    };
    report(5, ordered == n, "leave time ordering",
           fmt("%d of %d replications ordered; local %.2f ms, graceful %.2f ms, leave-and-return %.2f ms", ordered, n,
               pooled(local, LeaveMode::kLocal), pooled(graceful, LeaveMode::kGraceful),
               pooled(lar, LeaveMode::kLeaveAndReturn)));
  }

  // 6: comparison directions on the default preset.
  {
    const Scenario s = testing::preset("5g-4g-dual-rx-different-mno");
    const Comparison c = compare(s, default_groups(), s.seed, s.replications);
    std::string detail;
    for (const auto& ch : c.checks) detail += ch.name + (ch.passed ? " ok; " : " FAILED; ");
    report(6, c.all_passed() && c.checks.size() >= 5, "group comparison directions", detail);
  }

  // 7: INACTIVE resumes are cheaper than setups and exist only in 5G.
  {
    bool ok = true;
    std::string detail;
    for (const auto& [name, r] : baseline) {
      const auto& l = r.ledger;
      const bool has5g = r.scenario.profile().generations.count(Generation::k5G) > 0;
      if (has5g) {
        const double per_resume = l.resumes ? static_cast<double>(l.resume_units) / static_cast<double>(l.resumes) : NAN;
        const double per_setup = l.setups ? static_cast<double>(l.setup_units) / static_cast<double>(l.setups) : NAN;
        ok &= l.resumes > 0 && per_resume < per_setup;
        detail += fmt("%s %.1f vs %.1f units; ", name.c_str(), per_resume, per_setup);
      } else {
        ok &= l.resumes == 0 && l.inactive_entries == 0;
        detail += fmt("%s resumes=%lld; ", name.c_str(), static_cast<long long>(l.resumes));
      }
    }
    report(7, ok, "INACTIVE resume cost", detail);
  }

  // 8: identical seeds give identical logs and CSV rows.
  {
    const Scenario s = testing::preset("5g-4g-dual-rx-different-mno", {"strategies.active=[1,3,5,7,13,14]"});
    auto rows = [&](int threads) {
      std::ostringstream os;
      for (const auto& rep : run_replications(s, 42, 5, threads)) {
        write_csv_row(os, {s.id, rep.seed, stack_label(s.strategies), "", "", rep.digest, rep.ledger,
                           axis_scores(rep.ledger, s, 1)});
      }
      return os.str();
    };
    const std::string a = rows(1), b = rows(1), c = rows(4);
    report(8, a == b && a == c && !a.empty(), "determinism", fmt("%zu bytes of CSV compared", a.size()));
  }

  // 9: runtime budget per preset.
  {
    bool ok = true;
    std::string detail;
    for (const auto& [name, r] : baseline) {
      ok &= r.seconds <= 60.0;
      detail += fmt("%s %.1f s; ", name.c_str(), r.seconds);
    }
    report(9, ok, "runtime of 30 replications x 1000 devices", detail);
  }

  return failures == 0 ? 0 : 1;
}
