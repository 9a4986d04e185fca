// Copyright 2026 The qnnmi Authors
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
//
// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
// Usage: qnnmi_acceptance [output-dir]
#include "qnnmi/circuit.hpp"
#include "qnnmi/infodyn.hpp"
#include "qnnmi/qcore.hpp"
#include "qnnmi/random.hpp"
#include "qnnmi/runner.hpp"
#include "qnnmi/training.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>

namespace {

using namespace qnnmi;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

int g_failures = 0;

void report(const std::string &id, bool pass, const std::string &detail) {
    std::cout << (pass ? "PASS " : "FAIL ") << std::left << std::setw(34) << id << " " << detail << std::endl;
    if (!pass) {
        ++g_failures;
    }
}

void info(const std::string &id, const std::string &detail) {
    std::cout << "INFO " << std::left << std::setw(34) << id << " " << detail << std::endl;
}

std::string fmt(double v) {
    std::ostringstream s;
    s << std::setprecision(6) << v;
    return s.str();
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

StateVector random_state(int m, Rng &rng) {
    std::vector<cplx> a(std::size_t{1} << m);
    double n2 = 0.0;
    for (auto &z : a) {
        const double r = std::sqrt(-2.0 * std::log(std::max(rng.uniform(), 1e-300)));
        const double phi = 2.0 * std::numbers::pi * rng.uniform();
        z = {r * std::cos(phi), r * std::sin(phi)};
        n2 += std::norm(z);
    }
    for (auto &z : a) {
        z /= std::sqrt(n2);
    }
    return StateVector(m, std::move(a));
}

std::vector<double> random_theta(std::size_t p, Rng &rng) {
    std::vector<double> t(p);
    for (auto &x : t) {
        x = rng.uniform(-std::numbers::pi, std::numbers::pi);
    }
    return t;
}

double entropy_of(const StateVector &psi, std::span<const int> set) {
    return von_neumann_entropy(reduced_density(psi, set));
}

void analytic_fixtures() {
    const auto t0 = Clock::now();

    const auto id = choi_state(UnitaryMatrix(4, Matrix::identity(16)));
    const SubsystemPartition p(4, {0});
    const double mimo = mutual_information(id, p.mi(), p.mo());
    const double dimo = mutual_information(id, p.di(), p.mo());
    report("1a choi-identity-mi", std::abs(mimo - 2.0) <= 1e-9 && std::abs(dimo) <= 1e-9,
           "I(Mi:Mo)=" + fmt(mimo) + " I(Di:Mo)=" + fmt(dimo) + " tol 1e-9");

    Rng rng(101, Rng::kTest);
    const auto c = build_brickwall({4, 4, 0});
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
        const auto psi = choi_state(circuit_unitary(c, random_theta(20, rng)));
        worst = std::max({worst, std::abs(entropy_of(psi.state(), p.di()) - 3.0),
                          std::abs(entropy_of(psi.state(), p.mi()) - 1.0),
                          std::abs(entropy_of(psi.state(), p.mo()) - 1.0)});
    }
    report("1b forced-marginals", worst <= 1e-8, "max |S - expected| over 100 draws = " + fmt(worst) + " tol 1e-8");

    Matrix half(2);
    half(0, 0) = 0.5;
    half(1, 1) = 0.5;
    Matrix d(4);
    d(0, 0) = 0.5;
    d(1, 1) = 0.25;
    d(2, 2) = 0.25;
    const double s_half = von_neumann_entropy(DensityMatrix(1, half));
    const double s_pure = von_neumann_entropy(DensityMatrix::from_pure(random_state(3, rng)));
    const double s_diag = von_neumann_entropy(DensityMatrix(2, d));
    report("1c entropy-fixtures",
           std::abs(s_half - 1.0) <= 1e-10 && std::abs(s_pure) <= 1e-10 && std::abs(s_diag - 1.5) <= 1e-10,
           "S(I/2)=" + fmt(s_half) + " S(pure)=" + fmt(s_pure) + " S(diag)=" + fmt(s_diag) + " tol 1e-10");

    const double elapsed = seconds_since(t0);
    report("1  analytic-runtime", elapsed < 1.0, fmt(elapsed) + " s < 1 s");
}

void oracle_equivalences() {
    const auto t0 = Clock::now();
    Rng rng(202, Rng::kTest);

    double worst_rho = 0.0;
    for (int k = 0; k < 200; ++k) {
        const int m = 4 + static_cast<int>(rng.below(5));
        const auto psi = random_state(m, rng);
        QubitSet keep;
        while (keep.empty()) {
            for (int q = 0; q < m; ++q) {
                if (rng.uniform() < 0.5) {
                    keep.push_back(q);
                }
            }
        }
        worst_rho = std::max(worst_rho, max_abs_diff(reduced_density(psi, keep).matrix(),
                                                     partial_trace(DensityMatrix::from_pure(psi), keep).matrix()));
    }
    report("2a reduced-vs-partial-trace", worst_rho <= 1e-9, "max dev over 200 cases = " + fmt(worst_rho) + " tol 1e-9");

    const auto c = build_brickwall({4, 4, 0});
    double worst_grad = 0.0;
    for (int k = 0; k < 50; ++k) {
        const auto theta = random_theta(20, rng);
        const auto x = random_state(4, rng);
        const auto y = one_hot(static_cast<int>(rng.below(2)));
        const std::vector<OneHot> labels{y};
        const HypothesisBatchFn hyps = [&](std::span<const double> t) {
            return std::vector<Hypothesis>{forward(x, c, t, 0)};
        };
        const LossFn loss = [&](std::span<const double> t) { return cross_entropy(forward(x, c, t, 0), y); };
        const auto gs = grad_parameter_shift(hyps, labels, c, theta);
        const auto gc = grad_central_difference(loss, theta, 1e-3);
        for (std::size_t j = 0; j < gs.size(); ++j) {
            worst_grad = std::max(worst_grad, std::abs(gs[j] - gc[j]));
        }
    }
    report("2b shift-vs-central-difference", worst_grad <= 1e-5,
           "max dev over 50 draws = " + fmt(worst_grad) + " tol 1e-5");

    double worst_sv = 0.0;
    for (int k = 0; k < 100; ++k) {
        const int n = 2 + static_cast<int>(rng.below(4));
        const int l = 1 + static_cast<int>(rng.below(5));
        const auto circ = build_brickwall({n, l, 0});
        const auto theta = random_theta(static_cast<std::size_t>(circ.num_params()), rng);
        const auto psi = random_state(n, rng);
        const auto out = run_statevector(circ, theta, psi);
        const auto via_u = circuit_unitary(circ, theta).matrix().apply(psi.amplitudes());
        worst_sv = std::max(worst_sv, max_abs_diff(out.amplitudes(), via_u));
    }
    report("2c statevector-vs-unitary", worst_sv <= 1e-9, "max dev over 100 cases = " + fmt(worst_sv) + " tol 1e-9");

    const double elapsed = seconds_since(t0);
    report("2  oracle-runtime", elapsed < 30.0, fmt(elapsed) + " s < 30 s");
}

struct DatasetRun {
    RunConfig config;
    ExperimentResult result;
    TrendReport trend;
};

DatasetRun run_dataset(const std::string &name, const fs::path &out_root) {
    auto cfg = load_config(fs::path(QNNMI_CONFIG_DIR) / (name + ".toml"));
    cfg.out_dir = (out_root / name).string();
    cfg.workers = std::max(1, kernels::max_threads());
    const auto t0 = Clock::now();
    auto result = run_experiment(cfg);
    info(name + " experiment", std::to_string(cfg.runs) + " runs x " + std::to_string(cfg.training.epochs) +
                                   " epochs, measured qubit " + std::to_string(cfg.ansatz.measured_qubit) + ", lr " +
                                   fmt(cfg.training.learning_rate) + ", " + fmt(seconds_since(t0)) + " s");
    auto trend = summarize(result.aggregate);
    return {std::move(cfg), std::move(result), trend};
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

int main(int argc, char **argv) {
    const fs::path out_root = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "qnnmi_acceptance";
    try {
        analytic_fixtures();
        oracle_equivalences();

        const std::map<std::string, double> reference_peak{{"iris2", 8}, {"diabetes", 12}, {"bcw", 22}};
        std::map<std::string, DatasetRun> runs;
        for (const auto *name : {"iris2", "diabetes", "bcw"}) {
            runs.emplace(name, run_dataset(name, out_root));
        }

        const auto &iris = runs.at("iris2");
        const auto &agg = iris.result.aggregate;
        const double loss0 = agg.mean.front()[agg.column("loss")];
        const double loss_end = agg.mean.back()[agg.column("loss")];
        const double acc_end = agg.mean.back()[agg.column("accuracy")];
        report("3  iris-training-sanity", loss_end < 0.5 * loss0 && acc_end >= 0.90,
               "runs=" + std::to_string(agg.runs) + " loss " + fmt(loss0) + " -> " + fmt(loss_end) +
                   " (need < " + fmt(0.5 * loss0) + "), accuracy " + fmt(acc_end) + " (need >= 0.9)");

        for (const auto &[name, run] : runs) {
            const auto &t = run.trend;
            report("4a I(Di:Mo)-rises " + name, t.delta_i_di_mo > 0.0,
                   fmt(t.initial_i_di_mo) + " -> " + fmt(t.final_i_di_mo) + " (delta " + fmt(t.delta_i_di_mo) +
                       ", runs=" + std::to_string(run.result.aggregate.runs) + ")");
        }
        report("4b I(Di:Mo)-spearman iris2", iris.trend.spearman_i_di_mo >= 0.8,
               "rho = " + fmt(iris.trend.spearman_i_di_mo) + " (need >= 0.8)");
        {
            const auto &t = iris.trend;
            const bool interior = t.peak_epoch_i_mi_mo >= 1 && t.peak_epoch_i_mi_mo <= 60;
            report("4c I(Mi:Mo)-two-phase iris2", interior && t.drop_i_mi_mo >= 0.02,
                   "peak epoch " + std::to_string(t.peak_epoch_i_mi_mo) + " (need 1..60), peak " +
                       fmt(t.peak_i_mi_mo) + " final " + fmt(t.final_i_mi_mo) + " drop " + fmt(t.drop_i_mi_mo) +
                       " (need >= 0.02)");
        }
        for (const auto &[name, run] : runs) {
            info("4c I(Mi:Mo)-peak " + name, "epoch " + std::to_string(run.trend.peak_epoch_i_mi_mo) + " (reference ~" +
                                                 fmt(reference_peak.at(name)) + "), drop " +
                                                 fmt(run.trend.drop_i_mi_mo) +
                                                 (run.trend.two_phase ? ", two-phase" : ", not two-phase"));
        }
        for (const auto &[name, run] : runs) {
            report("4d loss-monotone-smoothed " + name, run.trend.loss_monotone_smoothed,
                   "window " + std::to_string(kLossSmoothingWindow) + ", loss " + fmt(run.trend.initial_loss) +
                       " -> " + fmt(run.trend.final_loss));
        }

        report("5  per-qubit-sum-below-joint iris2", iris.trend.per_qubit_sum_final < iris.trend.final_i_di_mo,
               "sum_k I(Di_k:Mo) = " + fmt(iris.trend.per_qubit_sum_final) +
                   " vs I(Di:Mo) = " + fmt(iris.trend.final_i_di_mo));

        auto again = iris.config;
        again.out_dir = (out_root / "iris2_repeat").string();
        run_experiment(again);
        const auto a = slurp(fs::path(iris.config.out_dir) / "aggregate.csv");
        const auto b = slurp(fs::path(again.out_dir) / "aggregate.csv");
        report("6  determinism aggregate.csv", !a.empty() && a == b,
               std::to_string(a.size()) + " bytes, " + (a == b ? "identical" : "different"));
    } catch (const std::exception &e) {
        std::cout << "FAIL acceptance-harness " << e.what() << std::endl;
        return 1;
    }
    std::cout << (g_failures == 0 ? "ALL CRITERIA PASSED" : std::to_string(g_failures) + " CRITERIA FAILED")
              << std::endl;
    return g_failures == 0 ? 0 : 1;
}
