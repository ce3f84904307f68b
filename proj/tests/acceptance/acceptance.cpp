// Acceptance checks. Prints one PASS/FAIL line per criterion; exits
// nonzero when any selected criterion fails.
//
//   wstat_acceptance                 run all criteria
//   wstat_acceptance --criterion 7   run one

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <nlohmann/json.hpp>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "oracles.hpp"
#include "wstat/wstat.hpp"

namespace {

using nlohmann::json;

struct Verdict {
  bool pass;
  std::string detail;
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

json cli(std::vector<std::string> args, int expected_code = 0) {
  args.insert(args.begin(), "wstat");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = wstat::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  if (code != expected_code) {
    throw std::runtime_error("wstat exited with " + std::to_string(code) + ": " + err.str());
  }
  return json::parse(out.str());
}

constexpr const char* kSeed = "20240607";

json simulate_n1000(const std::string& family, const std::string& sigma) {
  return cli({"simulate", "--family", family, "--n", "1000", "--trials", "20000", "--sigma", sigma,
              "--seed", kSeed, "--estimators", "w", "--threads", "0"});
}

Verdict scale_variance(const std::string& family, const std::string& sigma, double lo, double hi) {
  const json r = simulate_n1000(family, sigma);
  const auto& s = r["estimators"]["w"]["sigma"];
  const double v = s["scaled_variance"];
  std::string detail = "n*V[sigma_hat]/sigma^2 = " + fmt(v) + " +- " +
                       fmt(s["scaled_variance_se"].get<double>()) + ", required [" + fmt(lo) +
                       ", " + fmt(hi) + "]";
  return {lo <= v && v <= hi, detail};
}

Verdict criterion_1() { return scale_variance("gaussian", "2", 2.85, 3.15); }
Verdict criterion_2() { return scale_variance("uniform", "1", 1.71, 1.89); }

Verdict criterion_3() {
  const auto d = wstat::make_standard("laplace");
  const double analytic = d.fourth_moment();
  const double oracle_m4 = oracle::moment(oracle::laplace(), 4);
  if (std::abs(analytic - 6.0) > 1e-12 || std::abs(oracle_m4 - 6.0) > 1e-10) {
    return {false, "fourth moment check failed: analytic " + fmt(analytic) + ", quadrature " +
                       fmt(oracle_m4)};
  }
  auto v = scale_variance("laplace", "1", 5.7, 6.3);
  v.detail = "fourth moment 6 confirmed by quadrature (" + fmt(oracle_m4) + "); " + v.detail;
  return v;
}

Verdict criterion_4() {
  bool ok = true;
  std::string detail;
  for (const std::string fam : {"gaussian", "uniform", "laplace"}) {
    const json r = simulate_n1000(fam, "1");
    const double v = r["estimators"]["w"]["mu"]["scaled_variance"];
    ok = ok && 0.95 <= v && v <= 1.05;
    detail += fam + " " + fmt(v) + "; ";
  }
  return {ok, detail + "required [0.95, 1.05]"};
}

Verdict criterion_5() {
  std::vector<std::pair<double, double>> grid;
  for (double mu : {-3.0, 0.0, 5.0}) {
    for (double sigma : {0.1, 1.0, 10.0}) grid.emplace_back(mu, sigma);
  }
  double worst = 0.0;
  std::string detail;
  for (const std::string fam : {"gaussian", "uniform", "laplace"}) {
    for (auto method : {wstat::PsiMethod::analytic, wstat::PsiMethod::finite_difference}) {
      const auto rep = wstat::verify_euclidean(wstat::make_standard(fam), grid, method);
      worst = std::max(worst, rep.max_deviation);
    }
  }
  return {worst <= 1e-6, "max |G - I| = " + fmt(worst) + " over 9 points x 3 families, bound 1e-6"};
}

Verdict criterion_6() {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> mu(-10.0, 10.0), sigma(0.05, 10.0);
  std::uniform_int_distribution<int> pick(0, 2);
  const char* fams[] = {"gaussian", "uniform", "laplace"};
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto d = wstat::make_standard(fams[pick(rng)]);
    const wstat::LocationScaleModel a{d, mu(rng), sigma(rng)}, b{d, mu(rng), sigma(rng)};
    const double expected =
        (a.mu - b.mu) * (a.mu - b.mu) + (a.sigma - b.sigma) * (a.sigma - b.sigma);
    worst = std::max(worst, std::abs(wstat::w2_squared_models(a, b) - expected) / expected);
  }
  return {worst <= 1e-6, "max relative error " + fmt(worst) + " over 100 pairs, bound 1e-6"};
}

Verdict criterion_7() {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> pick(0, 2), size(1, 200);
  std::uniform_real_distribution<double> mu(-5.0, 5.0), sigma(0.1, 5.0);
  std::normal_distribution<double> data(0.0, 3.0);
  const char* fams[] = {"gaussian", "uniform", "laplace"};
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    std::vector<double> x(size(rng));
    for (auto& v : x) v = data(rng);
    const wstat::OrderedSample s(x);
    const wstat::LocationScaleModel m{wstat::make_standard(fams[pick(rng)]), mu(rng), sigma(rng)};
    const double closed = wstat::cost_empirical_to_model(s, m);
    const double cells = wstat::cost_interval_sum(s, m);
    worst = std::max(worst, std::abs(closed - cells) / std::max(1.0, std::abs(cells)));
  }
  return {worst <= 1e-8,
          "max |closed - interval sum| / max(1, cost) = " + fmt(worst) + ", bound 1e-8"};
}

Verdict criterion_8() {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> pick(0, 2), size(2, 300);
  std::uniform_real_distribution<double> mu(-5.0, 5.0), sigma(0.2, 5.0);
  const char* fams[] = {"gaussian", "uniform", "laplace"};
  double worst = 0.0;
  for (std::uint64_t i = 0; i < 50; ++i) {
    const auto d = wstat::make_standard(fams[pick(rng)]);
    wstat::RngStream stream(8, i);
    const auto s = wstat::sample({d, mu(rng), sigma(rng)}, size(rng), stream);
    const auto closed = wstat::fit_w_location_scale(s, d);
    const auto numeric = wstat::fit_w_general(s, wstat::LocationScaleFamily(d), {0.0, 1.0});
    worst = std::max({worst, std::abs(closed.mu() - numeric.mu()),
                      std::abs(closed.sigma() - numeric.sigma())});
  }
  return {worst <= 1e-6, "max |theta_numeric - theta_closed| = " + fmt(worst) + ", bound 1e-6"};
}

const std::vector<std::string> kSweep{"--n-values", "100,400,1600,6400"};

Verdict criterion_9() {
  const json big = cli({"simulate", "--family", "gaussian", "--n", "10000", "--trials", "5000",
                        "--seed", kSeed, "--estimators", "w", "--threads", "0"});
  const double bias = big["estimators"]["w"]["sigma"]["bias"];
  std::vector<std::string> args{"sweep", "--family", "gaussian", "--trials", "2000", "--seed",
                                kSeed, "--estimators", "w", "--threads", "0"};
  args.insert(args.end(), kSweep.begin(), kSweep.end());
  const json sweep = cli(args);
  const double slope = sweep["slopes"]["w"]["sigma"];
  const bool ok = std::abs(bias) <= 0.01 && std::abs(slope + 1.0) <= 0.1;
  return {ok, "bias(sigma_hat) at n=1e4 = " + fmt(bias) + " (bound 0.01 sigma); W slope " +
                  fmt(slope) + " (required -1 +- 0.1)"};
}

Verdict criterion_10() {
  std::vector<std::string> args{"sweep", "--family", "uniform", "--trials", "2000", "--seed",
                                kSeed, "--threads", "0"};
  args.insert(args.end(), kSweep.begin(), kSweep.end());
  const json sweep = cli(args);
  const double mle = sweep["slopes"]["mle"]["sigma"];
  const double w = sweep["slopes"]["w"]["sigma"];
  const bool ok = mle <= -1.5 && std::abs(w + 1.0) <= 0.1;
  return {ok, "uniform MLE slope " + fmt(mle) + " (required <= -1.5); W slope " + fmt(w) +
                  " (required -1 +- 0.1)"};
}

Verdict criterion_11() {
  bool ok = true;
  std::string detail;
  for (const std::string fam : {"gaussian", "uniform", "laplace"}) {
    const json r = simulate_n1000(fam, "1");
    const double cov = r["estimators"]["w"]["n_covariance"];
    const double se = r["estimators"]["w"]["n_covariance_se"];
    ok = ok && std::abs(cov) <= 4.0 * se;
    detail += fam + " " + fmt(cov) + " (4 SE = " + fmt(4.0 * se) + "); ";
  }
  return {ok, detail};
}

Verdict criterion_12() {
  auto run_text = [](const std::string& threads) {
    std::vector<std::string> args{"wstat",    "simulate", "--family", "laplace", "--n",
                                  "200",      "--trials", "3000",     "--seed",  kSeed,
                                  "--threads", threads};
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    wstat::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return out.str();
  };
  const std::string reference = run_text("1");
  bool ok = !reference.empty();
  for (const std::string t : {"1", "2", "3", "8", "0"}) ok = ok && run_text(t) == reference;
  return {ok, "simulate output compared across --threads 1, 2, 3, 8, 0"};
}

const std::map<int, std::pair<std::string, std::function<Verdict()>>> kCriteria{
    {1, {"gaussian scale variance", criterion_1}},
    {2, {"uniform scale variance", criterion_2}},
    {3, {"laplace scale variance", criterion_3}},
    {4, {"location variance", criterion_4}},
    {5, {"euclidean metric", criterion_5}},
    {6, {"model-to-model cost", criterion_6}},
    {7, {"cost-form identity", criterion_7}},
    {8, {"closed vs numeric fit", criterion_8}},
    {9, {"consistency", criterion_9}},
    {10, {"uniform MLE contrast", criterion_10}},
    {11, {"non-correlation", criterion_11}},
    {12, {"determinism", criterion_12}},
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::string(argv[i]) == "--criterion" && i + 1 < argc) only = std::atoi(argv[++i]);
  }
  if (only != 0 && !kCriteria.count(only)) {
    std::fprintf(stderr, "unknown criterion %d\n", only);
    return 2;
  }
  int failures = 0;
  for (const auto& [id, entry] : kCriteria) {
    if (only != 0 && id != only) continue;
    const auto start = std::chrono::steady_clock::now();
    Verdict v{false, ""};
    try {
      v = entry.second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %2d %s  %s: %s [%.1fs]\n", id, v.pass ? "PASS" : "FAIL",
                entry.first.c_str(), v.detail.c_str(), secs);
    std::fflush(stdout);
    failures += v.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
