// Copyright 2026 The ifipm Authors
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

// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "ifipm/experiments.hpp"
#include "ifipm/generator.hpp"
#include "ifipm/ipm.hpp"
#include "ifipm/newton.hpp"
#include "ifipm/solvers.hpp"
#include "oracles.hpp"

using namespace ifipm;
using fixtures::MaxAbs;

namespace {

int g_failed = 0;

void Report(int id, bool pass, const std::string& what, const std::string& detail) {
  std::printf("%s criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", id, what.c_str(),
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failed;
}

std::string Fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c);
  return buf;
}

double Median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

// Iterates visited by one run, start and final included, with the step
// records of the run.
struct Run {
  std::vector<Iterate> iterates;
  IpmTrace trace;
};

Run RunRecorded(const PreprocessedProgram& prep, const Iterate& start, const IpmParams& p) {
  Run run;
  const IpmResult res = IfIpm(prep, start, p, [&](int, const Iterate& it, const AssembledSystem&) {
    run.iterates.push_back(it);
  });
  run.iterates.push_back(res.iterate);
  run.trace = res.trace;
  return run;
}

GeneratorSpec SpecFor(Index m, Index n, double kappa, bool degenerate, std::uint64_t seed) {
  GeneratorSpec spec;
  spec.m = m;
  spec.n = n;
  spec.kappa_target = kappa;
  spec.degenerate = degenerate;
  spec.mode = degenerate ? GeneratorMode::kKnownOptimal : GeneratorMode::kCentralStart;
  spec.seed = seed;
  return spec;
}

// Criteria 1, 3 and 4 share the same 20 runs.
void FeasibilityOrthogonalityNeighborhood() {
  const IpmParams base = [] {
    IpmParams p = IpmParams::Validated();
    // The fixed-basis MNES matrix grows like 1/mu^2 on degenerate instances
    // and reaches 1/eps near mu = 1e-8.
    p.zeta = 1e-6;
    p.system = SystemKind::kMNES;
    p.solver.method = SolveMethod::kOracle;
    p.solver.oracle_mode = OracleMode::kAdversarial;
    return p;
  }();
  double worst_primal = 0.0;
  double worst_dual = 0.0;
  double worst_orth = -1e300;
  double worst_ratio_low = 1e300;
  double worst_ratio_high = -1e300;
  double worst_centrality = 0.0;
  int exits = 0;
  int steps = 0;
  int iterates = 0;
  bool ratio_ok = true;
  bool orth_ok = true;
  bool ran = true;
  std::string error;
  double band = 0.0;
  for (int i = 0; i < 20; ++i) {
    const Index m = 10 + (i * 7) % 21;
    const Index n = std::min<Index>(60, 2 * m + (i % 3) * 4);
    const double kappa = i % 2 ? 1e6 : 10.0;
    const bool degenerate = (i / 2) % 2 == 1;
    const GeneratedInstance inst = Generate(SpecFor(m, n, kappa, degenerate, 100 + i));
    const PreprocessedProgram prep = Preprocess(inst.lp);
    IpmParams p = base;
    p.solver.seed = 7 + i;
    Run run;
    try {
      run = RunRecorded(prep, inst.start, p);
    } catch (const Error& e) {
      ran = false;
      error = e.what();
      continue;
    }
    const LinearProgram& lp = inst.lp;
    const double b_scale = 1.0 + MaxAbs(lp.b());
    const double c_scale = 1.0 + MaxAbs(lp.c());
    for (const Iterate& it : run.iterates) {
      ++iterates;
      worst_primal = std::max(worst_primal, MaxAbs(lp.A() * it.x - lp.b()) / b_scale);
      worst_dual =
          std::max(worst_dual, MaxAbs(lp.A().transpose() * it.y + it.s - lp.c()) / c_scale);
      const double mu = it.x.dot(it.s) / static_cast<double>(n);
      const bool positive = it.x.minCoeff() > 0.0 && it.s.minCoeff() > 0.0;
      const double dev = (it.x.cwiseProduct(it.s) - Vector::Constant(n, mu)).norm() / mu;
      worst_centrality = std::max(worst_centrality, dev);
      if (!positive || dev > p.theta) ++exits;
    }
    const double beta = run.trace.beta;
    band = p.eta / std::sqrt(1 + p.theta);
    for (std::size_t k = 0; k + 1 < run.iterates.size(); ++k) {
      const IpmRecord& rec = run.trace.records[k];
      ++steps;
      const double mu0 = run.iterates[k].x.dot(run.iterates[k].s);
      const double mu1 = run.iterates[k + 1].x.dot(run.iterates[k + 1].s);
      const double ratio = mu1 / mu0;
      worst_ratio_low = std::min(worst_ratio_low, ratio - beta);
      worst_ratio_high = std::max(worst_ratio_high, ratio - beta);
      if (ratio < beta - band - 1e-10 || ratio > beta + band + 1e-10) ratio_ok = false;
      const double scale = rec.dx_norm * rec.ds_norm;
      if (scale > 0.0) worst_orth = std::max(worst_orth, rec.dx_dot_ds / scale);
      if (rec.dx_dot_ds > 1e-10 * scale) orth_ok = false;
    }
  }
  const std::string fail_note = ran ? "" : "; run failed: " + error;
  Report(1, ran && worst_primal <= 1e-8 && worst_dual <= 1e-8,
         "feasibility along 20 MNES runs with a worst-case inexact solver",
         Fmt("max relative primal %.2e, dual %.2e over ", worst_primal, worst_dual) +
             std::to_string(iterates) + " iterates; tolerance 1e-8" + fail_note);
  Report(3, ran && orth_ok && ratio_ok, "step orthogonality and mu contraction",
         Fmt("max dx.ds/(|dx||ds|) %.2e (limit 1e-10); mu ratio - beta in [%.4f, %.4f]",
             worst_orth, worst_ratio_low, worst_ratio_high) +
             Fmt(", allowed +-%.4f; ", band) + std::to_string(steps) + " steps" + fail_note);
  Report(4, ran && exits == 0, "no neighborhood exits in the criterion-1 runs",
         std::to_string(exits) + " exits" +
             Fmt(", max ||XSe - mu e||/mu %.4f, theta %.1f", worst_centrality, base.theta) +
             fail_note);
}

void CorrectionBound() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_int_distribution<int> size(2, 6);
  const double theta = 0.7;
  const double eta = 0.1;
  int violations = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Index m = size(rng);
    const Index n = m + size(rng);
    const double mu = std::pow(10.0, -8.0 * unit(rng) * unit(rng));
    auto [lp, it] = fixtures::RandomFeasiblePoint(rng, m, n, mu, theta, 0.999);
    const PreprocessedProgram prep = Preprocess(lp);
    const double beta = 1.0 - 0.2 / std::sqrt(static_cast<double>(n));
    const AssembledSystem sys =
        Assemble(trial % 2 ? SystemKind::kMNES : SystemKind::kPNES, it, prep, beta);
    Vector r_hat(m);
    for (Index i = 0; i < m; ++i) r_hat(i) = unit(rng);
    r_hat *= eta / std::sqrt(1 + theta) * std::sqrt(mu) / MaxAbs(r_hat);
    const Vector z = sys.matrix.fullPivLu().solve(sys.rhs + r_hat);
    const Direction dir = RecoverDirectionMnes(sys, z, sys.matrix * z - sys.rhs, it, lp);
    const double sv = MaxAbs(it.s.cwiseProduct(dir.correction_v));
    worst = std::max(worst, sv / (eta * mu));
    if (sv > eta * mu + 1e-12 * mu) ++violations;
  }
  Report(2, violations == 0, "correction bound ||Sv|| <= eta mu over 1000 trials",
         std::to_string(violations) + " violations" +
             Fmt(", max ||Sv||_inf/(eta mu) %.6f", worst));
}

void IterationScaling() {
  std::vector<double> medians;
  std::string detail = "median iterations";
  for (Index n : {16, 32, 64, 128}) {
    std::vector<double> counts;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const GeneratedInstance inst = Generate(SpecFor(n / 2, n, 10.0, false, 300 + seed));
      IpmParams p = IpmParams::Validated();
      p.zeta = inst.start.mu() * 1e-4;
      const IpmResult res = IfIpm(Preprocess(inst.lp), inst.start, p);
      counts.push_back(static_cast<double>(res.trace.records.size()));
    }
    medians.push_back(Median(counts));
    detail += " n=" + std::to_string(n) + ":" + std::to_string(static_cast<int>(medians.back()));
  }
  double worst = 0.0;
  for (std::size_t i = 1; i < medians.size(); ++i) {
    worst = std::max(worst, medians[i] / medians[i - 1]);
  }
  Report(5, worst <= 1.6, "iteration growth per doubling of n",
         detail + Fmt("; max ratio %.3f, limit 1.6", worst));
}

void ConditionRates() {
  IpmParams p = IpmParams::Validated();
  const std::vector<SystemKind> cols = {SystemKind::kNES, SystemKind::kOSS};

  const GeneratedInstance deg = Generate(SpecFor(10, 20, 10.0, true, 41));
  p.zeta = 1e-7;
  const ConditionTrace dt = RunConditionTrace(Preprocess(deg.lp), deg.start, p, cols);
  const double nes_slope = SlopeFit(dt, SystemKind::kNES, 1e-6, 1e-2);
  const double oss_slope = SlopeFit(dt, SystemKind::kOSS, 1e-6, 1e-2);

  const GeneratedInstance nondeg = Generate(SpecFor(10, 20, 10.0, false, 42));
  p.zeta = 1e-9;
  const ConditionTrace nt = RunConditionTrace(Preprocess(nondeg.lp), nondeg.start, p, cols);
  const double nes_spread = TailSpread(nt, SystemKind::kNES);
  const double oss_spread = TailSpread(nt, SystemKind::kOSS);

  const bool pass = nes_slope >= 1.7 && nes_slope <= 2.3 && oss_slope >= 0.7 &&
                    oss_slope <= 1.3 && nes_spread <= 0.1 && oss_spread <= 0.1;
  Report(6, pass, "condition-number growth rates",
         Fmt("degenerate slopes NES %.3f in [1.7,2.3], OSS %.3f in [0.7,1.3]", nes_slope,
             oss_slope) +
             Fmt("; nondegenerate tail spread NES %.4f, OSS %.4f, limit 0.1", nes_spread,
                 oss_spread));
}

void Preconditioning() {
  IpmParams p = IpmParams::Validated();
  p.zeta = 1e-8;
  const GeneratedInstance inst = Generate(SpecFor(10, 20, 1e6, false, 51));
  const ConditionTrace trace = RunConditionTrace(Preprocess(inst.lp), inst.start, p,
                                                 {SystemKind::kNES, SystemKind::kPNES});
  double max_nes = 0.0;
  double max_pnes = 0.0;
  for (std::size_t r = 0; r < trace.rows.size(); ++r) {
    max_nes = std::max(max_nes, trace.kappa(r, SystemKind::kNES));
    max_pnes = std::max(max_pnes, trace.kappa(r, SystemKind::kPNES));
  }

  int tiny_checked = 0;
  int tiny_violations = 0;
  double worst_excess = -1e300;
  std::uint64_t seed = 500;
  for (Index m = 1; m <= 4; ++m) {
    for (Index n = m + 1; n <= 8; ++n) {
      for (int rep = 0; rep < 2; ++rep) {
        const GeneratedInstance tiny =
            Generate(SpecFor(m, n, rep ? 100.0 : 10.0, false, seed++));
        const PreprocessedProgram prep = Preprocess(tiny.lp);
        const double chi = oracle::ChiBar(prep.base.A());
        IpmParams q = IpmParams::Validated();
        q.zeta = 1e-6;
        const IpmResult res = IfIpm(prep, tiny.start, q, [&](int, const Iterate& it,
                                                              const AssembledSystem&) {
          const AssembledSystem pnes = Assemble(SystemKind::kPNES, it, prep, 0.9);
          const double kappa = oracle::Kappa(pnes.matrix);
          ++tiny_checked;
          worst_excess = std::max(worst_excess, kappa - chi * chi);
          if (kappa > chi * chi + 1e-6) ++tiny_violations;
        });
        (void)res;
      }
    }
  }
  const bool pass = max_pnes <= max_nes / 10.0 && tiny_violations == 0;
  Report(7, pass, "basis preconditioning",
         Fmt("kappa_A 1e6: max kappa PNES %.3e vs NES/10 %.3e", max_pnes, max_nes / 10.0) +
             "; tiny instances: " + std::to_string(tiny_violations) + " of " +
             std::to_string(tiny_checked) + Fmt(" iterates above chi-bar^2 + 1e-6 (max excess %.3e)",
                                                worst_excess));
}

void Refinement() {
  int loops_worst = 0;
  double worst_contraction = 0.0;
  bool reached = true;
  for (int i = 0; i < 8; ++i) {
    const bool degenerate = i % 4 >= 2;
    const GeneratedInstance inst =
        Generate(SpecFor(6 + i, 14 + 2 * i, i % 2 ? 1e4 : 10.0, degenerate, 600 + i));
    IpmParams p = IpmParams::Validated();
    p.system = SystemKind::kPNES;
    const RefinementResult res = IrIfIpm(Preprocess(inst.lp), inst.start, 1e-8, 1e-2, p);
    const double gap = res.iterate.x.dot(res.iterate.s) / static_cast<double>(inst.lp.cols());
    if (gap > 1e-8) reached = false;
    loops_worst = std::max(loops_worst, static_cast<int>(res.loops.size()));
    for (const RefinementLoop& loop : res.loops) {
      worst_contraction = std::max(worst_contraction, loop.gap_after / loop.gap_before);
    }
  }

  BatchConfig batch;
  batch.spec = SpecFor(10, 20, 10.0, false, 0);
  batch.first_seed = 700;
  batch.count = 20;
  batch.params = IpmParams::Validated();
  batch.params.zeta = 1e-4;
  batch.params.solver.method = SolveMethod::kOracle;
  batch.zeta_hat = 1e-1;
  batch.workers = 4;
  const BatchSummary summary = RunBatch(batch);
  const int solved = summary.solved_count();

  const bool pass = reached && loops_worst <= 5 && worst_contraction <= 2e-2 && solved >= 19;
  Report(8, pass, "outer iterative refinement",
         Fmt("PNES, zeta-hat 1e-2: max gap contraction %.4f (limit 0.02), max loops %.0f (limit 5)",
             worst_contraction, loops_worst) +
             (reached ? "" : ", target 1e-8 missed") + "; MNES batch with oracle, zeta-hat 1e-1 to 1e-4: " +
             std::to_string(solved) + "/20 solved (need 19)");
}

void OracleEquivalence() {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> size(2, 8);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const Index m = size(rng);
    const Index n = m + size(rng);
    const double mu = std::pow(10.0, -(trial % 6));
    auto [lp, it] = fixtures::RandomFeasiblePoint(rng, m, n, mu, 0.5, 0.9);
    const double beta = 1.0 - 0.2 / std::sqrt(static_cast<double>(n));
    const PreprocessedProgram prep = Preprocess(lp);
    const AssembledSystem sys = Assemble(SystemKind::kMNES, it, prep, beta);
    const Direction dir =
        RecoverDirection(sys, SolveExact(sys.matrix, sys.rhs).solution, it, prep);
    const oracle::Step ref = oracle::FullNewton(lp.A(), lp.b(), lp.c(), it.x, it.y, it.s, beta);
    auto rel = [](const Vector& a, const Vector& b) {
      return MaxAbs(a - b) / (1.0 + std::max(MaxAbs(a), MaxAbs(b)));
    };
    worst = std::max({worst, rel(dir.dx, ref.dx), rel(dir.dy, ref.dy), rel(dir.ds, ref.ds)});
  }
  Report(9, worst <= 1e-8, "exact MNES directions match the dense full Newton system",
         Fmt("max relative difference %.2e over 50 iterates, tolerance 1e-8", worst));
}

template <typename Fn>
void Guarded(int id, const char* what, Fn fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    Report(id, false, what, std::string("exception: ") + e.what());
  }
}

}  // namespace

int main() {
  Guarded(1, "criteria 1, 3, 4", FeasibilityOrthogonalityNeighborhood);
  Guarded(2, "correction bound", CorrectionBound);
  Guarded(5, "iteration scaling", IterationScaling);
  Guarded(6, "condition-number growth rates", ConditionRates);
  Guarded(7, "basis preconditioning", Preconditioning);
  Guarded(8, "outer iterative refinement", Refinement);
  Guarded(9, "oracle equivalence", OracleEquivalence);
  std::printf("%d criteria failed\n", g_failed);
  return g_failed == 0 ? 0 : 1;
}
