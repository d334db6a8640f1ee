// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
// failure. Criteria 3, 7, 8, 9 and 10 share one trained model, built on
// first use, so criterion 3 carries the training time.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "lstmopt/bilstm.hpp"
#include "lstmopt/errors.hpp"
#include "lstmopt/generator.hpp"
#include "lstmopt/logistic.hpp"
#include "lstmopt/parallel.hpp"
#include "lstmopt/pipeline.hpp"
#include "lstmopt/random.hpp"
#include "lstmopt/solvers.hpp"
#include "lstmopt/trainer.hpp"

using namespace lstmopt;

namespace {

using Clock = std::chrono::steady_clock;

const std::vector<double> kLevels{0, 25, 50, 75, 85, 90, 95, 100};
const std::size_t kJobs = std::max(1u, std::thread::hardware_concurrency());

struct Outcome {
  bool pass = false;
  std::string detail;
};

int g_failures = 0;

void report(int id, const std::string& name, const std::function<Outcome()>& body) {
  const auto start = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  std::printf("%s  criterion %2d  %-34s %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", id, name.c_str(),
              o.detail.c_str(), secs);
  std::fflush(stdout);
  g_failures += !o.pass;
}

bool rel_close(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max(1.0, std::abs(b));
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// ---------------------------------------------------------------- 1

Outcome oracle_triangle() {
  std::size_t mismatches = 0, optimal = 0, infeasible = 0;
  const int ratios[] = {3, 5, 8};
  for (std::uint64_t k = 0; k < 500; ++k) {
    GenParams p = desk_preset(ratios[k % 3], 100, 2 + (k / 3) % 11, 1001);
    p.demand = {0, 10};
    Instance inst = generate_instance(p, k);
    // Every fifth instance gets shrunken capacities so infeasible statuses
    // are exercised too.
    if (k % 5 == 4) {
      for (auto& c : inst.capacity) c = c / 3;
    }
    const Solution bf = brute_force(inst);
    const Solution dp = solve_dp(inst);
    const Solution bb = branch_and_bound(inst, FixPlan{});
    const bool same_status = bf.status == dp.status && dp.status == bb.status;
    bool same_obj = true;
    if (same_status && bf.status == SolveStatus::Optimal) {
      same_obj = rel_close(dp.objective, bf.objective, 1e-6) &&
                 rel_close(bb.objective, bf.objective, 1e-6);
      ++optimal;
    } else if (same_status) {
      ++infeasible;
    }
    mismatches += !(same_status && same_obj);
  }
  return {mismatches == 0, "500 instances, " + std::to_string(optimal) + " optimal, " +
                               std::to_string(infeasible) + " infeasible, " +
                               std::to_string(mismatches) + " disagreements"};
}

// ---------------------------------------------------------------- 2

Outcome optimal_fix_zero_gap() {
  const GenParams p = desk_preset(3, 100, 20, 2002);
  std::vector<double> worst(100, 0.0);
  std::vector<int> ok(100, 0);
  parallel_for(100, kJobs, [&](std::size_t k) {
    const Instance inst = generate_instance(p, k);
    const Solution opt = solve_dp(inst);
    const Solution plain = solve_plain(inst);
    PredictionVector pred{std::vector<double>(opt.y.begin(), opt.y.end()), "oracle", 0.0};
    const EvalRecord r = solve_with_hard_fix(inst, pred, 100, plain);
    if (r.z_tilde) {
      worst[k] = std::abs(*r.z_tilde - r.z_star) / std::abs(r.z_star);
      ok[k] = worst[k] <= 1e-9 && r.k_fixed == 20;
    }
  });
  const std::size_t good = static_cast<std::size_t>(std::count(ok.begin(), ok.end(), 1));
  return {good == 100, std::to_string(good) + "/100 zero gap, max relative gap " +
                           fmt("%.2e", *std::max_element(worst.begin(), worst.end()))};
}

// ---------------------------------------------------------------- shared model

struct Shared {
  Dataset data;
  TrainResult trained;
  std::vector<PredictionVector> test_preds;
  std::vector<Solution> plain;                    // per test instance
  std::vector<std::vector<EvalRecord>> hard;      // [instance][level]
};

Shared& shared() {
  static Shared s = [] {
    Shared out;
    const GenParams p = desk_preset(3, 100, 20, 7007);
    out.data = generate_dataset(p, 3000, [](const Instance& i) { return solve_dp(i); }, "dp",
                                kJobs, SplitCounts{2000, 500, 500});
    const Standardizer st = fit_standardizer(out.data.train);
    const auto train_ex = make_examples(out.data.train, st);
    const auto val_ex = make_examples(out.data.validation, st);
    BiLstmModel model(BiLstmConfig{kNumFeatures, 3, 40, 0.3});
    model.initialize(7);
    model.standardizer = st;
    TrainConfig cfg;
    cfg.seed = 7;
    cfg.jobs = kJobs;
    cfg.max_seconds = 1000;
    out.trained = train(std::move(model), train_ex, val_ex, cfg);

    const auto& test = out.data.test;
    out.test_preds.resize(test.size());
    out.plain.resize(test.size());
    out.hard.resize(test.size());
    parallel_for(test.size(), kJobs, [&](std::size_t i) {
      const auto start = Clock::now();
      PredictionVector pred{predict_instance(out.trained.model, test[i].instance), "bilstm", 0.0};
      pred.seconds = std::chrono::duration<double>(Clock::now() - start).count();
      out.test_preds[i] = pred;
      out.plain[i] = solve_plain(test[i].instance);
      for (double level : kLevels) {
        out.hard[i].push_back(solve_with_hard_fix(test[i].instance, pred, level, out.plain[i]));
      }
    });
    return out;
  }();
  return s;
}

// ---------------------------------------------------------------- 3

Outcome fixing_monotonicity() {
  Shared& s = shared();
  std::size_t nest = 0, feas = 0, obj = 0, gap = 0;
  for (std::size_t i = 0; i < 100; ++i) {
    const auto& probs = s.test_preds[i].probs;
    for (std::size_t l = 0; l < kLevels.size(); ++l) {
      const EvalRecord& r = s.hard[i][l];
      if (r.optgap_pct && *r.optgap_pct < -1e-7) ++gap;
      if (l == 0) continue;
      const EvalRecord& prev = s.hard[i][l - 1];
      if (!select_predictions(probs, kLevels[l - 1]).subset_of(select_predictions(probs, kLevels[l]))) {
        ++nest;
      }
      if (!prev.z_tilde && r.z_tilde) ++feas;
      if (prev.z_tilde && r.z_tilde && *r.z_tilde < *prev.z_tilde - 1e-9 * std::abs(*prev.z_tilde)) {
        ++obj;
      }
    }
  }
  const bool pass = nest + feas + obj + gap == 0;
  return {pass, "100 instances x 8 levels: " + std::to_string(nest) + " nesting, " +
                    std::to_string(feas) + " feasibility, " + std::to_string(obj) +
                    " objective, " + std::to_string(gap) + " negative-gap violations"};
}

// ---------------------------------------------------------------- 4

Outcome ls_cut_validity() {
  const GenParams p = desk_preset(3, 100, 10, 4004);
  std::size_t violated = 0, weaker = 0, stronger = 0, cuts = 0;
  for (std::uint64_t k = 0; k < 100; ++k) {
    const Instance inst = generate_instance(p, k);
    const Solution opt = solve_dp(inst);
    const std::vector<double> y(opt.y.begin(), opt.y.end());
    const RootCutLoop loop = ls_cut_rounds(inst, 5);
    cuts += loop.cuts.size();
    for (const auto& cut : loop.cuts) violated += cut.violation(opt.x, y, opt.s) > 1e-6;
    const double plain = loop.bounds.front(), after = loop.bounds.back();
    const double eps = 1e-9 * std::max(1.0, std::abs(plain));
    weaker += after < plain - eps;
    stronger += after > plain + eps;
  }
  return {violated == 0 && weaker == 0 && stronger >= 1,
          std::to_string(cuts) + " cuts, " + std::to_string(violated) +
              " violated at the optimum; bound raised on " + std::to_string(stronger) +
              "/100, lowered on " + std::to_string(weaker)};
}

// ---------------------------------------------------------------- 5

Outcome gradient_check() {
  // Relative error |a - n| / max(|a|, |n|, 1e-6); the floor keeps
  // parameters with vanishing gradient from dividing by round-off.
  double worst = 0.0;
  std::size_t checked = 0;
  for (std::uint64_t m = 0; m < 20; ++m) {
    CounterRng rng({5005, m});
    const std::size_t layers = 1 + m % 2;
    const std::size_t width = 1 + static_cast<std::size_t>(rng.uniform_int(0, 4));
    const std::size_t T = 1 + static_cast<std::size_t>(rng.uniform_int(0, 5));
    BiLstmModel model(BiLstmConfig{4, layers, width, 0.3});
    for (double& v : model.params()) v = rng.uniform(-1.0, 1.0);
    std::vector<Example> batch;
    for (int e = 0; e < 2; ++e) {
      Example ex{Eigen::MatrixXd(static_cast<Eigen::Index>(T), 4), std::vector<double>(T)};
      for (Eigen::Index i = 0; i < ex.features.size(); ++i) ex.features.data()[i] = rng.uniform(-2, 2);
      for (auto& y : ex.labels) y = static_cast<double>(rng.uniform_int(0, 1));
      batch.push_back(std::move(ex));
    }
    std::vector<double> grad;
    backprop(model, batch, grad);
    constexpr double h = 1e-5;
    for (std::size_t k = 0; k < model.num_params(); ++k) {
      const double keep = model.params()[k];
      model.params()[k] = keep + h;
      const double up = batch_loss(model, batch);
      model.params()[k] = keep - h;
      const double down = batch_loss(model, batch);
      model.params()[k] = keep;
      const double numeric = (up - down) / (2 * h);
      const double denom = std::max({std::abs(numeric), std::abs(grad[k]), 1e-6});
      worst = std::max(worst, std::abs(numeric - grad[k]) / denom);
      ++checked;
    }
  }
  return {worst < 1e-4, "20 models, " + std::to_string(checked) + " parameters, max relative error " +
                            fmt("%.2e", worst)};
}

// ---------------------------------------------------------------- 6

Outcome metric_arithmetic() {
  EvalRecord timed;
  timed.z_star = 1;
  timed.z_tilde = 1;
  timed.optgap_pct = 0.0;
  timed.time_plain = 22.6;
  timed.time_ml = 1.7;
  const MetricsReport t = compute_metrics(std::vector<EvalRecord>{timed});
  const double timeimp = std::round(*t.timeimp * 10) / 10;

  std::vector<EvalRecord> many(20000, timed);
  for (std::size_t i = 0; i < 290; ++i) {
    many[i].z_tilde.reset();
    many[i].optgap_pct.reset();
  }
  const MetricsReport m = compute_metrics(many);
  const bool pass = timeimp == 13.3 && m.inf_pct == 1.45 && m.m_hat == 290;
  return {pass, "timeimp " + fmt("%.4f", *t.timeimp) + " -> " + fmt("%.1f", timeimp) +
                    ", inf " + fmt("%.17g", m.inf_pct) + "%"};
}

// ---------------------------------------------------------------- 7

MetricsReport level_metrics(std::size_t level_index) {
  std::vector<EvalRecord> recs;
  for (const auto& per : shared().hard) recs.push_back(per[level_index]);
  return compute_metrics(recs);
}

std::size_t decreasing_pairs(const std::vector<double>& v) {
  std::size_t n = 0;
  for (std::size_t i = 1; i < v.size(); ++i) n += v[i] < v[i - 1] - 1e-12;
  return n;
}

Outcome learning_sanity() {
  Shared& s = shared();
  const double acc = s.trained.best_val_accuracy;
  const double cpu = s.trained.cpu_seconds;
  const MetricsReport at50 = level_metrics(2);
  std::vector<double> gaps, infs;
  std::ostringstream trend;
  for (std::size_t l = 1; l < kLevels.size(); ++l) {
    const MetricsReport m = level_metrics(l);
    gaps.push_back(m.optgap_pct.value_or(0.0));
    infs.push_back(m.inf_pct);
    trend << ' ' << kLevels[l] << ':' << fmt("%.2f", gaps.back()) << '/' << fmt("%.1f", infs.back());
  }
  const bool pass = acc >= 0.85 && cpu <= 1200 && at50.inf_pct <= 5 &&
                    at50.optgap_pct.value_or(0.0) <= 2 && decreasing_pairs(gaps) <= 1 &&
                    decreasing_pairs(infs) <= 1;
  return {pass, "val acc " + fmt("%.4f", acc) + " (epoch " + std::to_string(s.trained.best_epoch) +
                    ", " + fmt("%.0f", cpu) + " CPU s); 50%: inf " + fmt("%.1f", at50.inf_pct) +
                    "%, optgap " + fmt("%.3f", at50.optgap_pct.value_or(0.0)) +
                    "%; level:optgap/inf" + trend.str()};
}

// ---------------------------------------------------------------- 8

Outcome generalization() {
  Shared& s = shared();
  const BiLstmModel& model = s.trained.model;
  const GenParams p = desk_preset(3, 100, 80, 8008);
  const std::size_t n = 100;
  std::vector<int> exact(n, 0), infeasible(n, 0), consistent(n, 0);
  BnbOptions opts;
  opts.time_limit_seconds = 1.0;
  parallel_for(n, kJobs, [&](std::size_t k) {
    const Instance inst = generate_instance(p, k);
    const PredictionVector pred = concat_predictions(model, inst, 20);
    bool same = pred.probs.size() == 80;
    for (std::size_t c = 0; same && c < 4; ++c) {
      const auto part = predict_instance(model, slice_instance(inst, 20 * c, 20));
      same = std::equal(part.begin(), part.end(), pred.probs.begin() + 20 * static_cast<long>(c));
    }
    exact[k] = same;
    Solution no_plain;  // only feasibility is measured at this horizon
    const EvalRecord r = solve_with_hard_fix(inst, pred, 25, no_plain, opts);
    infeasible[k] = !r.z_tilde;
    consistent[k] = infeasible[k] == !flow_feasible(inst, select_predictions(pred.probs, 25));
  });
  const auto count = [](const std::vector<int>& v) {
    return static_cast<std::size_t>(std::count(v.begin(), v.end(), 1));
  };
  const double inf = infeasibility_pct(count(infeasible), n);
  return {count(exact) == n && count(consistent) == n && inf <= 10,
          "T=80 from T=20 model: " + std::to_string(count(exact)) + "/100 exact chunk blocks, " +
              "25% inf " + fmt("%.1f", inf) + "%"};
}

// ---------------------------------------------------------------- 9

Outcome baseline_ordering() {
  Shared& s = shared();
  const LogisticModel lr = logistic_fit(s.data.train, s.trained.model.standardizer);
  const auto& test = s.data.test;
  std::vector<int> lr_inf(test.size(), 0);
  parallel_for(test.size(), kJobs, [&](std::size_t i) {
    const PredictionVector pred{logistic_predict(lr, test[i].instance), "logistic", 0.0};
    lr_inf[i] = !solve_with_hard_fix(test[i].instance, pred, 50, s.plain[i]).z_tilde;
  });
  const double lr_pct =
      infeasibility_pct(static_cast<std::size_t>(std::count(lr_inf.begin(), lr_inf.end(), 1)), test.size());
  const double lstm_pct = level_metrics(2).inf_pct;
  return {lstm_pct <= lr_pct, "50% inf: LSTM " + fmt("%.1f", lstm_pct) + "%, logistic " +
                                  fmt("%.1f", lr_pct) + "%"};
}

// ---------------------------------------------------------------- 10

Outcome soft_warm_safety() {
  Shared& s = shared();
  const std::size_t n = 200;
  std::vector<int> soft_inf(n, 0), warm_inf(n, 0), warm_gap(n, 0);
  parallel_for(n, kJobs, [&](std::size_t i) {
    const Instance& inst = s.data.test[i].instance;
    const EvalRecord soft = solve_with_soft_fix(inst, s.test_preds[i], s.plain[i]);
    const EvalRecord warm = solve_with_warm_start(inst, s.test_preds[i], s.plain[i]);
    soft_inf[i] = !soft.z_tilde;
    warm_inf[i] = !warm.z_tilde;
    warm_gap[i] = warm.optgap_pct && std::abs(*warm.optgap_pct) > 1e-7;
  });
  const auto count = [](const std::vector<int>& v) { return std::count(v.begin(), v.end(), 1); };
  return {count(soft_inf) + count(warm_inf) + count(warm_gap) == 0,
          "200 instances: soft infeasible " + std::to_string(count(soft_inf)) +
              ", warm infeasible " + std::to_string(count(warm_inf)) + ", warm nonzero gap " +
              std::to_string(count(warm_gap))};
}

}  // namespace

int main() {
  std::printf("acceptance suite, %zu worker thread(s)\n", kJobs);
  report(1, "oracle triangle", oracle_triangle);
  report(2, "optimal-fix zero gap", optimal_fix_zero_gap);
  report(3, "fixing monotonicity", fixing_monotonicity);
  report(4, "(l,S) cut validity and bound", ls_cut_validity);
  report(5, "BPTT gradient check", gradient_check);
  report(6, "metric arithmetic", metric_arithmetic);
  report(7, "desk-scale learning sanity", learning_sanity);
  report(8, "long-horizon generalization", generalization);
  report(9, "baseline ordering", baseline_ordering);
  report(10, "soft-fix and warm-start safety", soft_warm_safety);
  std::printf("%d criterion(s) failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
