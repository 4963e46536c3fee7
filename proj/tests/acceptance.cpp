// Copyright 2026 The qgad Authors
//
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


// Acceptance run: one [PASS]/[FAIL] line per criterion, nonzero exit on any
// failure. Reference values come from the oracles in oracles.hpp or from
// closed forms evaluated here, never from the code under test.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <unistd.h>

#include "oracles.hpp"
#include "qgad/artifact.hpp"
#include "qgad/circuits.hpp"
#include "qgad/commands.hpp"
#include "qgad/estimators.hpp"
#include "qgad/gad.hpp"
#include "qgad/signtest.hpp"
#include "qgad/statevector.hpp"
#include "qgad/synthetic.hpp"

namespace {

using namespace qgad;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool ok = false;
  std::string detail;
};

int failures = 0;

void run(int id, const std::string& name, double limit_s,
         const std::function<Outcome()>& body) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  const bool ok = o.ok && secs < limit_s;
  if (!ok) ++failures;
  std::printf("[%s] criterion %d (%s): %s; %.2f s (limit %.0f s)\n",
              ok ? "PASS" : "FAIL", id, name.c_str(), o.detail.c_str(), secs,
              limit_s);
  std::fflush(stdout);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

std::vector<std::vector<std::int64_t>> signed_mags(const QuantizedDataset& ds) {
  std::vector<std::vector<std::int64_t>> out(ds.rows(),
                                             std::vector<std::int64_t>(ds.cols()));
  for (std::size_t i = 0; i < ds.rows(); ++i)
    for (std::size_t j = 0; j < ds.cols(); ++j)
      out[i][j] = (ds.at(i, j).negative ? -1 : 1) *
                  static_cast<std::int64_t>(ds.at(i, j).magnitude);
  return out;
}

void normalize_prefix(StateVector& s, std::size_t count, StreamRng& rng,
                      bool complex_amps) {
  std::normal_distribution<double> g(0.0, 1.0);
  s[0] = 0.0;
  double norm = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    s[i] = complex_amps ? Amplitude(g(rng), g(rng)) : Amplitude(g(rng));
    norm += std::norm(s[i]);
  }
  for (std::size_t i = 0; i < count; ++i) s[i] /= std::sqrt(norm);
}

// 1. Functional comparator flips the flag exactly when a > b; the gate ladder
// reproduces functional mode.
Outcome comparator_exactness() {
  std::size_t cases = 0, bad = 0;
  for (unsigned n = 1; n <= 4; ++n) {
    const Register a{0, n}, b{n, n};
    for (std::uint64_t x = 0; x < (1u << n); ++x) {
      for (std::uint64_t y = 0; y < (1u << n); ++y) {
        for (std::uint64_t f = 0; f < 2; ++f) {
          StateVector s(2 * n + 1);
          s[0] = 0.0;
          const BasisLabel in = (f << (2 * n)) | b.write(a.write(0, x), y);
          s[in] = 1.0;
          comparator_apply(s, a, b, 2 * n);
          const BasisLabel want = in ^ (x > y ? BasisLabel{1} << (2 * n) : 0);
          ++cases;
          if (s[want] != Amplitude(1.0)) ++bad;
        }
      }
    }
  }
  double worst = 0.0;
  StreamRng rng(101);
  for (unsigned n = 1; n <= 3; ++n) {
    const unsigned q = 2 * n + 2;
    const BasisLabel carry = BasisLabel{1} << (2 * n);
    for (int t = 0; t < 40; ++t) {
      StateVector f(q);
      f[0] = 0.0;
      if (t < (1 << (2 * n + 1)) && t < 32) {
        // Basis inputs with carry clear.
        const BasisLabel l = static_cast<BasisLabel>(t);
        const BasisLabel label = (l & (carry - 1)) | ((l >> (2 * n)) << (2 * n + 1));
        f[label] = 1.0;
      } else {
        std::normal_distribution<double> g(0.0, 1.0);
        double norm = 0.0;
        for (BasisLabel l = 0; l < f.size(); ++l) {
          if (l & carry) continue;
          f[l] = Amplitude(g(rng), g(rng));
          norm += std::norm(f[l]);
        }
        for (BasisLabel l = 0; l < f.size(); ++l) f[l] /= std::sqrt(norm);
      }
      StateVector h = f;
      comparator_apply(f, Register{0, n}, Register{n, n}, 2 * n + 1);
      comparator_apply(h, Register{0, n}, Register{n, n}, 2 * n + 1,
                       ComparatorMode::kGateLevel, 2 * n);
      for (BasisLabel l = 0; l < f.size(); ++l) worst = std::max(worst, std::abs(f[l] - h[l]));
    }
  }
  return {bad == 0 && worst < 1e-12,
          std::to_string(cases) + " functional cases, " + std::to_string(bad) +
              " wrong; gate-level max deviation " + fmt(worst)};
}

// 2. Flag-1, reference-0 amplitude after U_AT = prior amplitude * mag / 2^n.
Outcome transduction_identity() {
  StreamRng rng(202);
  double worst = 0.0;
  std::size_t checked = 0;
  for (int t = 0; t < 20; ++t) {
    const std::size_t m = 2 + rng() % 31;
    const unsigned n = 1 + rng() % 4;
    const auto ds = random_quantized_dataset(m, 1, n, rng);
    const auto layout = RegisterLayout::make(ds.index_bits(), n);
    StateVector s = StateVector::zero(layout);
    normalize_prefix(s, m, rng, t % 2 == 1);
    const StateVector prior = s;
    amplitude_transduction(s, layout, DataOracle(ds, 0, OracleKind::kMagnitude));
    const double scale = 1.0 / static_cast<double>(1u << n);
    for (std::size_t i = 0; i < m; ++i) {
      const BasisLabel one = BasisLabel{1} << layout.flag.offset | i;
      const double want_frac = ds.at(i, 0).magnitude * scale;
      worst = std::max(worst, std::abs(s[one] - prior[i] * want_frac));
      ++checked;
    }
  }
  return {worst <= 1e-12, "20 datasets, " + std::to_string(checked) +
                              " basis states, max deviation " + fmt(worst)};
}

// 3. Exact backend reproduces the sample mean and covariance.
Outcome exact_equivalence() {
  StreamRng rng(303);
  double worst_mu = 0.0, worst_c = 0.0, worst_pmu = 0.0, worst_cp = 0.0;
  std::size_t sign_errors = 0;
  for (int t = 0; t < 20; ++t) {
    // First dataset pinned at the largest size.
    const std::size_t m = t == 0 ? 64 : 2 + rng() % 63;
    const std::size_t d = t == 0 ? 4 : 1 + rng() % 4;
    const unsigned n = t == 0 ? 6 : 1 + rng() % 6;
    const auto ds = random_quantized_dataset(m, d, n, rng);
    const auto want = testing::rational_moments(signed_mags(ds), n);
    const auto rep = fit(ds, EstimationBudget{});
    const double md = static_cast<double>(m);
    for (std::size_t j = 0; j < d; ++j) {
      const double mu = want.mu[j].to_double();
      worst_mu = std::max(worst_mu, std::abs(rep.mu_hat(j) - mu));
      worst_pmu = std::max(worst_pmu, std::abs(rep.means[j].p_magnitude - mu * mu));
      if (mu != 0.0 && (rep.mu_hat(j) > 0) != (mu > 0)) ++sign_errors;
      for (std::size_t k = 0; k < d; ++k) {
        const double c = want.cov[j][k].to_double();
        worst_c = std::max(worst_c, std::abs(rep.cov_hat(j, k) - c));
        if (std::abs(c) > 1e-9 && (rep.cov_hat(j, k) > 0) != (c > 0)) ++sign_errors;
      }
    }
    for (const auto& e : rep.covariances) {
      // C'_jk = C_jk + M mu_j mu_k / (M - 1), exactly.
      const auto cp = want.cov[e.j][e.k] +
                      testing::Rational(static_cast<testing::Rational::Int>(m),
                                        static_cast<testing::Rational::Int>(m - 1)) *
                          want.mu[e.j] * want.mu[e.k];
      const double viap = e.degenerate ? 0.0
                                       : md * std::sqrt(e.p_first_stage * e.p_magnitude) /
                                             (md - 1.0);
      worst_cp = std::max(worst_cp, std::abs(viap - std::abs(cp.to_double())));
    }
  }
  const double worst = std::max({worst_mu, worst_c, worst_pmu, worst_cp});
  return {worst <= 1e-10 && sign_errors == 0,
          "20 datasets (up to M=64, D=4, n=6): max |dmu| " + fmt(worst_mu) + ", |dC| " +
              fmt(worst_c) + ", |P_mu - mu^2| " + fmt(worst_pmu) + ", |C' via P21,P22| " +
              fmt(worst_cp) + ", sign errors " + std::to_string(sign_errors)};
}

// 4. Hadamard sign test: exact identity and wrong-sign rate at N_s.
Outcome sign_test() {
  double worst_exact = 0.0, worst_rate = 0.0;
  const double delta = 0.1;
  const int trials = 500;
  const double band = delta + 2.0 * std::sqrt(0.09 / 500.0);
  std::size_t points = 0;
  for (int ia = -19; ia <= 19; ++ia) {
    const double alpha = ia / 20.0;
    for (const double sb : {1.0, -1.0}) {
      const double beta = sb * std::sqrt(1.0 - alpha * alpha);
      const auto exact = exact_sign_test([&] { return single_qubit_flag(alpha, beta); });
      worst_exact = std::max(worst_exact, std::abs(exact.p_hat - (0.5 - alpha * beta)));
      if (std::abs(alpha * beta) < 0.05) continue;
      const auto shots = required_shots(std::abs(alpha), std::abs(beta), delta);
      const bool positive = alpha * beta > 0;
      int wrong = 0;
      for (int k = 0; k < trials; ++k) {
        StreamRng rng(404, points, static_cast<std::uint64_t>(k));
        const auto v = run_sign_test([&] { return single_qubit_flag(alpha, beta); }, shots, rng);
        if ((v.sign == Sign::kNonNegative) != positive) ++wrong;
      }
      worst_rate = std::max(worst_rate, wrong / static_cast<double>(trials));
      ++points;
    }
  }
  return {worst_exact <= 1e-12 && worst_rate <= band,
          "exact |P_s - (1/2 - ab)| max " + fmt(worst_exact) + "; " + std::to_string(points) +
              " grid points x 500 trials, worst wrong-sign rate " + fmt(worst_rate) +
              " (bound " + fmt(band) + ")"};
}

double slope_of(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log10(x[i]), ly = std::log10(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// 5. RMSE of the mean magnitude falls as shots^(-1/2).
Outcome shot_scaling() {
  Eigen::VectorXd mean(2);
  mean << 0.35, -0.2;
  Eigen::MatrixXd factor(2, 2);
  factor << 0.15, 0.0, 0.04, 0.12;
  StreamRng data_rng(505);
  const auto ds = quantize_dataset(gaussian_rows(32, mean, factor, data_rng), 5);
  const auto want = testing::rational_moments(signed_mags(ds), 5);
  const std::vector<std::uint64_t> grid{100, 1000, 10000, 100000, 1000000};
  std::string detail;
  bool ok = true;
  for (std::size_t j = 0; j < 2; ++j) {
    const double truth = std::abs(want.mu[j].to_double());
    std::vector<double> xs, ys;
    for (const auto shots : grid) {
      double sq = 0.0;
      for (std::uint64_t seed = 0; seed < 50; ++seed) {
        EstimationBudget b;
        b.mode = Backend::kShots;
        b.shots_magnitude = shots;
        b.epsilon_mu = kDefaultEpsilonMuShots;
        b.seed = 5000 + seed;
        const double est = estimate_mean_magnitude(ds, j, b).magnitude;
        sq += (est - truth) * (est - truth);
      }
      xs.push_back(static_cast<double>(shots));
      ys.push_back(std::sqrt(sq / 50.0));
    }
    const double s = slope_of(xs, ys);
    ok = ok && std::abs(s + 0.5) <= 0.1;
    detail += (j ? ", " : "") + std::string("slope(mu_") + std::to_string(j) + ") " + fmt(s);
  }
  return {ok, "M=32, D=2, 50 seeds, shots 1e2..1e6: " + detail};
}

Eigen::MatrixXd conditioned_cov(Eigen::Index d, double kappa, StreamRng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd a(d, d);
  for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = g(rng);
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  const Eigen::MatrixXd q = qr.householderQ();
  const double lo = static_cast<double>(d) / kappa, hi = static_cast<double>(d);
  Eigen::VectorXd ev(d);
  ev(0) = lo;
  if (d > 1) ev(d - 1) = hi;
  for (Eigen::Index i = 1; i + 1 < d; ++i) ev(i) = lo + (hi - lo) * u(rng);
  Eigen::MatrixXd c = q * ev.asDiagonal() * q.transpose();
  return 0.5 * (c + c.transpose());
}

// 6. Density perturbation stays within the slacked bound.
Outcome error_bound() {
  StreamRng rng(606);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst_ratio = 0.0;
  std::size_t trials = 0, violations = 0;
  for (const Eigen::Index d : {2, 3}) {
    const double kappa = 4.0;
    const Eigen::MatrixXd c = conditioned_cov(d, kappa, rng);
    Eigen::VectorXd mu(d);
    for (Eigen::Index i = 0; i < d; ++i) mu(i) = 0.5 * u(rng);
    const GaussianModel truth(mu, c);
    // ||C^-1|| from the eigenvalues we planted.
    const double inv_norm = kappa / static_cast<double>(d);
    for (const double eps_mu : {1e-4, 1e-3}) {
      ErrorBudget b;
      b.epsilon_mu = eps_mu;
      b.epsilon_c = 3.0 * eps_mu;
      b.inv_norm = inv_norm;
      const double dd = static_cast<double>(d);
      if (!(dd * inv_norm * dd * b.epsilon_c <= 0.5)) {
        return {false, "proviso fails for the chosen test budget"};
      }
      const double bound = 7 * dd * dd * inv_norm * eps_mu + 12 * dd * dd * inv_norm * inv_norm * eps_mu;
      for (int t = 0; t < 500; ++t) {
        Eigen::VectorXd pm = mu;
        Eigen::MatrixXd pc = c;
        for (Eigen::Index i = 0; i < d; ++i) pm(i) += eps_mu * u(rng);
        for (Eigen::Index i = 0; i < d; ++i) {
          for (Eigen::Index k = i; k < d; ++k) {
            const double e = b.epsilon_c * u(rng);
            pc(i, k) += e;
            if (k != i) pc(k, i) += e;
          }
        }
        const GaussianModel pert(pm, pc);
        Eigen::VectorXd x(d);
        for (Eigen::Index i = 0; i < d; ++i) x(i) = 0.99 * u(rng);
        const auto r = check_bound_empirically(truth, pert, x, b);
        if (std::abs(r.bound - bound) > 1e-12 * bound) {
          return {false, "bound disagrees with closed form"};
        }
        const double ratio = r.delta_p / (1.5 * bound);
        worst_ratio = std::max(worst_ratio, ratio);
        if (!r.holds || ratio > 1.0) ++violations;
        ++trials;
      }
    }
  }
  return {violations == 0 && trials >= 1000,
          std::to_string(trials) + " perturbations (D=2,3; kappa=4; eps_mu 1e-4, 1e-3), " +
              std::to_string(violations) + " violations, max |dp| / (1.5 bound) " +
              fmt(worst_ratio)};
}

// 7. Cholesky density against cofactor expansion; 1-D normalization.
Outcome density_correctness() {
  StreamRng rng(707);
  std::normal_distribution<double> g(0.0, 1.0);
  double worst = 0.0;
  for (Eigen::Index d = 1; d <= 4; ++d) {
    for (int t = 0; t < 50; ++t) {
      Eigen::MatrixXd a(d, d);
      for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = g(rng);
      Eigen::MatrixXd c = a * a.transpose() + 0.05 * Eigen::MatrixXd::Identity(d, d);
      c = 0.5 * (c + c.transpose());
      Eigen::VectorXd mu(d), x(d);
      for (Eigen::Index i = 0; i < d; ++i) {
        mu(i) = g(rng);
        x(i) = mu(i) + g(rng);
      }
      testing::Mat cm(d, std::vector<double>(d));
      for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index k = 0; k < d; ++k) cm[i][k] = c(i, k);
      const double want = testing::cofactor_density(
          std::vector<double>(mu.data(), mu.data() + d), cm,
          std::vector<double>(x.data(), x.data() + d));
      const double got = GaussianModel(mu, c).density(x);
      worst = std::max(worst, std::abs(got - want) / want);
    }
  }
  const double mu = -0.3, var = 0.2;
  const GaussianModel one(Eigen::VectorXd::Constant(1, mu), Eigen::MatrixXd::Constant(1, 1, var));
  const double sd = std::sqrt(var), lo = mu - 10 * sd, hi = mu + 10 * sd;
  const int panels = 20000;
  const double h = (hi - lo) / panels;
  double s = 0.0;
  for (int i = 0; i <= panels; ++i) {
    const double w = (i == 0 || i == panels) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    s += w * one.density(Eigen::VectorXd::Constant(1, lo + i * h));
  }
  const double integral = s * h / 3.0;
  return {worst <= 1e-9 && std::abs(integral - 1.0) <= 1e-6,
          "200 models (D=1..4), max relative error " + fmt(worst) +
              "; 1-D integral - 1 = " + fmt(integral - 1.0)};
}

// 8. Exact-backend detection agrees with classical GAD away from the
// threshold.
Outcome detection_agreement() {
  Eigen::VectorXd mean(2);
  mean << 0.1, -0.05;
  Eigen::MatrixXd factor(2, 2);
  factor << 0.08, 0.0, 0.03, 0.06;
  StreamRng rng(808);
  auto rows = gaussian_rows(59, mean, factor, rng, 0.99);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> radius(6.5, 8.0);
  for (int o = 0; o < 5; ++o) {
    const double a = angle(rng), r = radius(rng);
    Eigen::Vector2d z(r * std::cos(a), r * std::sin(a));
    const Eigen::Vector2d x = mean + factor * z;  // Mahalanobis distance r
    if (std::abs(x(0)) >= 0.99 || std::abs(x(1)) >= 0.99) {
      return {false, "planted outlier left the unit box"};
    }
    rows.push_back({x(0), x(1)});
  }
  const auto dir = std::filesystem::temp_directory_path() /
                   ("qgad_acceptance_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  const std::string csv = (dir / "train.csv").string();
  {
    std::ofstream out(csv);
    out.precision(17);
    for (const auto& r : rows) out << r[0] << "," << r[1] << "\n";
  }
  RunConfig config;
  config.input = csv;
  config.bits = 6;
  const FitArtifact artifact = run_fit(config);
  std::filesystem::remove_all(dir);

  const double q = 0.1;
  const DetectResult quantum = run_detect(artifact, rows, ThresholdPolicy::kQuantile, 0.0, q);

  // Classical reference on the same quantized rows.
  const auto ds = quantize_dataset(rows, 6);
  const GaussianModel classical = classical_fit(ds);
  std::vector<double> dens;
  std::vector<std::vector<double>> qrows(ds.rows(), std::vector<double>(2));
  for (std::size_t i = 0; i < ds.rows(); ++i) {
    for (std::size_t j = 0; j < 2; ++j) qrows[i][j] = ds.value(i, j);
    dens.push_back(classical.density(Eigen::Vector2d(qrows[i][0], qrows[i][1])));
  }
  const double sigma = quantile_threshold(dens, q);
  std::size_t compared = 0, disagreements = 0, outliers_flagged = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double p = classical.density(Eigen::Vector2d(rows[i][0], rows[i][1]));
    const bool classical_anomaly = p < sigma;
    if (i >= 59 && quantum.rows[i].anomaly) ++outliers_flagged;
    if (std::abs(p - sigma) < 0.1 * sigma) continue;
    ++compared;
    if (classical_anomaly != quantum.rows[i].anomaly) ++disagreements;
  }
  return {disagreements == 0 && compared > 0 && outliers_flagged == 5,
          "M=64, D=2, n=6: " + std::to_string(compared) + " rows compared, " +
              std::to_string(disagreements) + " disagreements, " +
              std::to_string(outliers_flagged) + "/5 planted outliers flagged"};
}

}  // namespace

int main() {
  run(1, "comparator exactness", 10, comparator_exactness);
  run(2, "transduction identity", 30, transduction_identity);
  run(3, "exact pipeline equals classical GAD", 300, exact_equivalence);
  run(4, "Hadamard sign test", 120, sign_test);
  run(5, "shot-noise scaling", 900, shot_scaling);
  run(6, "error-propagation bound", 60, error_bound);
  run(7, "density correctness", 30, density_correctness);
  run(8, "end-to-end detection agreement", 60, detection_agreement);
  std::printf("%d of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
