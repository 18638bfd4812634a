// Copyright 2026 The bdprecode Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "bdprecode/bd_optimal.hpp"
#include "bdprecode/bd_suboptimal.hpp"
#include "bdprecode/evaluate.hpp"
#include "bdprecode/model.hpp"

namespace {

using namespace bdprecode;
using Clock = std::chrono::steady_clock;

SystemConfig config(int a, int mb, int k, int n, double p,
                    ConstraintScheme scheme = ConstraintScheme::kPerBs,
                    PrecodingMode mode = PrecodingMode::kBd) {
  SystemConfig c;
  c.num_bs = a;
  c.antennas_per_bs = mb;
  c.num_ms = k;
  c.antennas_per_ms = n;
  c.power_budget = p;
  c.scheme = scheme;
  c.mode = mode;
  return c;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Collects the worst observed value of every invariant over all solves.
struct InvariantLog {
  int solutions = 0;
  double duality_gap = 0.0;
  double zf_residual = 0.0;
  double power_excess = -1e300;
  double min_eigenvalue = 1e300;
  double off_diagonal = 0.0;
  double miso_second_eigenvalue = 0.0;
  double sum_power_orthogonality = 0.0;
  double sum_power_opt_vs_sub = 0.0;
  int sum_power_pairs = 0;
  int price_count_violations = 0;
  int not_converged = 0;

  void record(const Solution& s, const ProblemInstance& p) {
    ++solutions;
    if (!s.converged) ++not_converged;
    duality_gap = std::max(duality_gap, std::abs(s.duality_gap) / std::abs(s.primal_value));
    const Metrics m = metrics(s.covariances, p);
    zf_residual = std::max(zf_residual, m.max_zf_residual);
    min_eigenvalue = std::min(min_eigenvalue, m.min_covariance_eigenvalue);
    for (int a = 0; a < p.num_groups(); ++a) {
      power_excess = std::max(power_excess, s.group_powers(a) - p.config.budget(a));
    }
    for (int k = 0; k < p.num_users(); ++k) {
      const auto uk = static_cast<std::size_t>(k);
      const DiagonalizedChannel d = diagonalized_form(s, p, k);
      const ComplexMatrix e = d.decoder * p.channels.h[uk] * s.precoders[uk];
      for (Eigen::Index i = 0; i < e.rows(); ++i) {
        for (Eigen::Index j = 0; j < e.cols(); ++j) {
          if (i != j) off_diagonal = std::max(off_diagonal, std::abs(e(i, j)));
        }
      }
      if (p.config.antennas_per_ms == 1) {
        const HermitianEigen eig = hermitian_eigen(s.covariances[uk]);
        const Eigen::Index n = eig.values.size();
        const double top = std::max(1.0, eig.values(n - 1));
        miso_second_eigenvalue = std::max(miso_second_eigenvalue, eig.values(n - 2) / top);
      }
      if (p.config.scheme == ConstraintScheme::kSumPower) {
        ComplexMatrix gram = s.precoders[uk].adjoint() * s.precoders[uk];
        gram.diagonal().setZero();
        sum_power_orthogonality = std::max(sum_power_orthogonality, gram.norm());
      }
    }
    if (s.method == "optimal-A1" && count_positive(s.mu) < positive_price_bound(p)) {
      ++price_count_violations;
    }
  }

  void record_pair(const Solution& opt, const Solution& sub, const ProblemInstance& p) {
    record(opt, p);
    record(sub, p);
    if (p.config.scheme == ConstraintScheme::kSumPower) {
      ++sum_power_pairs;
      sum_power_opt_vs_sub =
          std::max(sum_power_opt_vs_sub, std::abs(opt.primal_value - sub.primal_value));
    }
  }
};

struct Report {
  int failures = 0;

  void line(bool pass, const std::string& name, const std::string& detail) {
    if (!pass) ++failures;
    std::printf("%s  %-28s %s\n", pass ? "PASS" : "FAIL", name.c_str(), detail.c_str());
    std::fflush(stdout);
  }
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), format, args...);
  return buf;
}

void fig1(Report& report, InvariantLog& log) {
  const auto start = Clock::now();
  const ProblemInstance p = make_problem(config(2, 4, 4, 2, 10.0), 1);
  SolveOptions options;
  options.initial_mu = 0.2;
  const Solution s = solve_optimal(p, options);
  const double elapsed = seconds_since(start);
  log.record(s, p);
  int settled = 0;
  for (std::size_t i = 1; i < s.history.size(); ++i) {
    if (std::abs(s.history[i].weighted_rate - s.history[i - 1].weighted_rate) >= 1e-4) {
      settled = s.history[i].iteration;
    }
  }
  const double err = std::max(std::abs(s.group_powers(0) - 10.0), std::abs(s.group_powers(1) - 10.0));
  const bool pass = s.converged && err <= 1e-3 && settled <= 100 && elapsed < 10.0;
  report.line(pass, "fig1_convergence",
              fmt("powers=(%.6f, %.6f) max_err=%.2e sum_rate=%.6f stable_from_iter=%d "
                  "iterations=%d time=%.2fs",
                  s.group_powers(0), s.group_powers(1), err, s.primal_value, settled, s.iterations,
                  elapsed));
}

void fig3(Report& report, InvariantLog& log) {
  const auto start = Clock::now();
  int opt_ok = 0, sub_ok = 0, opt_min = 1 << 30, sub_max = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const ProblemInstance p = make_problem(config(8, 1, 2, 1, 10.0), seed);
    const Solution opt = solve_optimal(p);
    const Solution sub = solve_suboptimal(p);
    log.record_pair(opt, sub, p);
    const int a = count_active_groups(opt.group_powers, p);
    const int b = count_active_groups(sub.group_powers, p);
    opt_ok += a >= 7;
    sub_ok += b <= 2;
    opt_min = std::min(opt_min, a);
    sub_max = std::max(sub_max, b);
  }
  const double elapsed = seconds_since(start);
  report.line(opt_ok == 100 && sub_ok == 100 && elapsed < 120.0, "fig3_active_constraints",
              fmt("optimal>=7 on %d/100 (min %d), suboptimal<=2 on %d/100 (max %d) time=%.1fs",
                  opt_ok, opt_min, sub_ok, sub_max, elapsed));
}

double fig2(Report& report, InvariantLog& log) {
  const auto start = Clock::now();
  std::vector<double> gaps;
  double rel_gap_m8 = 0.0;
  double gap_m2 = 0.0;
  std::string detail;
  for (int m = 2; m <= 10; ++m) {
    double opt_sum = 0.0, sub_sum = 0.0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
      const ProblemInstance p = make_problem(config(m, 1, 2, 1, 10.0), seed);
      const Solution opt = solve_optimal(p);
      const Solution sub = solve_suboptimal(p);
      log.record_pair(opt, sub, p);
      opt_sum += opt.primal_value;
      sub_sum += sub.primal_value;
    }
    const double gap = (opt_sum - sub_sum) / 50.0;
    gaps.push_back(gap);
    if (m == 2) gap_m2 = std::abs(gap);
    if (m == 8) rel_gap_m8 = (opt_sum - sub_sum) / opt_sum;
    detail += fmt("%sM=%d:%.4f/%.4f", detail.empty() ? "" : " ", m, opt_sum / 50.0, sub_sum / 50.0);
  }
  bool structure = gap_m2 <= 1e-6;
  for (std::size_t i = 2; i < gaps.size(); ++i) {  // M >= 4
    structure = structure && gaps[i] > 0.0;
    if (i > 2) structure = structure && gaps[i] >= gaps[i - 1];
  }
  const double elapsed = seconds_since(start);
  report.line(structure && elapsed < 180.0, "fig2_structure",
              fmt("|gap(M=2)|=%.2e gap(M=4..10) positive, non-decreasing; ", gap_m2) + detail +
                  fmt(" time=%.1fs", elapsed));
  return rel_gap_m8;
}

void fig4(Report& report, InvariantLog& log, double fig2_rel_gap_m8) {
  const auto start = Clock::now();
  bool ordered = true;
  double rel_gap_p10 = 0.0;
  std::string detail;
  for (double power : {0.1, 1.0, 10.0, 100.0}) {
    double opt_sum = 0.0, sub_sum = 0.0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      const ProblemInstance p = make_problem(config(4, 1, 2, 2, power), seed);
      const Solution opt = solve_optimal(p);
      const Solution sub = solve_suboptimal(p);
      log.record_pair(opt, sub, p);
      ordered = ordered && opt.primal_value >= sub.primal_value - 1e-8;
      opt_sum += opt.primal_value;
      sub_sum += sub.primal_value;
    }
    ordered = ordered && opt_sum >= sub_sum;
    if (power == 10.0) rel_gap_p10 = (opt_sum - sub_sum) / opt_sum;
    detail += fmt(" P=%g:%.4f/%.4f", power, opt_sum / 100.0, sub_sum / 100.0);
  }
  const double elapsed = seconds_since(start);
  report.line(ordered && rel_gap_p10 < fig2_rel_gap_m8 && elapsed < 180.0, "fig4_structure",
              fmt("optimal>=suboptimal everywhere=%s rel_gap(P=10)=%.4f < fig2 rel_gap(M=8)=%.4f;",
                  ordered ? "yes" : "no", rel_gap_p10, fig2_rel_gap_m8) +
                  detail + fmt(" time=%.1fs", elapsed));
}

void oracle_equivalence(Report& report, InvariantLog& log) {
  const auto start = Clock::now();
  std::mt19937_64 rng(2026);
  const ConstraintScheme schemes[] = {ConstraintScheme::kPerBs, ConstraintScheme::kPerAntenna,
                                      ConstraintScheme::kSumPower};
  double worst = 0.0;
  int done = 0, unconverged = 0;
  for (int i = 0; done < 25; ++i) {
    const int a = std::uniform_int_distribution<int>(1, 3)(rng);
    const int mb = std::uniform_int_distribution<int>(1, 6 / a)(rng);
    const int m = a * mb;
    const int k = std::uniform_int_distribution<int>(1, std::min(3, m))(rng);
    const int n = std::uniform_int_distribution<int>(1, std::max(1, std::min(2, m / k)))(rng);
    const double power = std::uniform_real_distribution<double>(1.0, 20.0)(rng);
    const ConstraintScheme scheme = schemes[i % 3];
    const ProblemInstance p = make_problem(config(a, mb, k, n, power, scheme), 1000 + i);
    const Solution opt = solve_optimal(p);
    const Solution sub = solve_suboptimal(p);
    log.record_pair(opt, sub, p);
    const OracleResult o = oracle_solve(p);
    if (!o.converged) ++unconverged;
    worst = std::max(worst, std::abs(opt.primal_value - o.primal_value) / o.primal_value);
    ++done;
  }
  const double elapsed = seconds_since(start);
  report.line(worst <= 1e-4 && unconverged == 0 && elapsed < 300.0, "oracle_equivalence",
              fmt("25 instances (M<=6, K<=3, mixed schemes) max rel diff=%.2e oracle "
                  "unconverged=%d time=%.1fs",
                  worst, unconverged, elapsed));
}

void zf_dpc(Report& report, InvariantLog& log) {
  std::mt19937_64 rng(77);
  double worst_residual = 0.0, worst_deficit = -1e300;
  for (int i = 0; i < 25; ++i) {
    const int k = std::uniform_int_distribution<int>(2, 3)(rng);
    const int n = std::uniform_int_distribution<int>(1, 2)(rng);
    const int a = std::uniform_int_distribution<int>(n * k, n * k + 2)(rng);
    const ConstraintScheme scheme = i % 2 ? ConstraintScheme::kPerAntenna : ConstraintScheme::kPerBs;
    const SystemConfig bd_cfg = config(a, 1, k, n, 10.0, scheme);
    SystemConfig dpc_cfg = bd_cfg;
    dpc_cfg.mode = PrecodingMode::kZfDpc;
    const ProblemInstance bd = make_problem(bd_cfg, 500 + i);
    const ProblemInstance dpc = make_problem(dpc_cfg, 500 + i);
    const Solution sb = solve_optimal(bd);
    const Solution sd = solve_optimal(dpc);
    log.record(sb, bd);
    log.record(sd, dpc);
    for (int u = 0; u < k; ++u) {
      for (int j = u + 1; j < k; ++j) {
        const ComplexMatrix& h = dpc.channels.h[static_cast<std::size_t>(j)];
        worst_residual = std::max(
            worst_residual, (h * sd.covariances[static_cast<std::size_t>(u)] * h.adjoint()).norm());
      }
    }
    worst_deficit = std::max(worst_deficit, sb.primal_value - sd.primal_value);
  }
  report.line(worst_residual <= 1e-8 && worst_deficit <= 1e-8, "zf_dpc_invariants",
              fmt("25 instances max upper-triangular residual=%.2e max(BD - ZF-DPC)=%.2e",
                  worst_residual, worst_deficit));
}

void invariants(Report& report, const InvariantLog& log) {
  const bool pass = log.not_converged == 0 && log.duality_gap <= 1e-4 && log.zf_residual <= 1e-8 &&
                    log.power_excess <= 1e-6 && log.min_eigenvalue >= -1e-9 &&
                    log.off_diagonal <= 1e-8 && log.miso_second_eigenvalue <= 1e-8 &&
                    log.sum_power_orthogonality <= 1e-8 && log.sum_power_opt_vs_sub <= 1e-6 &&
                    log.sum_power_pairs > 0 && log.price_count_violations == 0;
  report.line(pass, "invariant_suite",
              fmt("%d solutions: unconverged=%d rel_gap=%.2e zf=%.2e power_excess=%.2e "
                  "min_eig=%.2e offdiag=%.2e miso_rank1=%.2e sum_orth=%.2e "
                  "sum_opt_vs_sub=%.2e (%d pairs) price_count_violations=%d",
                  log.solutions, log.not_converged, log.duality_gap, log.zf_residual,
                  log.power_excess, log.min_eigenvalue, log.off_diagonal,
                  log.miso_second_eigenvalue, log.sum_power_orthogonality,
                  log.sum_power_opt_vs_sub, log.sum_power_pairs, log.price_count_violations));
}

}  // namespace

int main() {
  Report report;
  InvariantLog log;
  fig1(report, log);
  fig3(report, log);
  const double rel_gap_m8 = fig2(report, log);
  fig4(report, log, rel_gap_m8);
  oracle_equivalence(report, log);
  zf_dpc(report, log);
  invariants(report, log);
  std::printf("%d criteria failed\n", report.failures);
  return report.failures == 0 ? 0 : 1;
}
