// Acceptance suite: runs every gate criterion end to end and prints one
// pass/fail line each. Expects the CLI binary path as argv[1] (used by the
// determinism criterion). Exit code 0 only when every criterion passes.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>
#include <vector>

#include "koop/errors.hpp"
#include "koop/experiment.hpp"
#include "koop/koopman.hpp"
#include "koop/numerics.hpp"
#include "koop/predictor.hpp"
#include "koop/random.hpp"
#include "koop/systems.hpp"

using namespace koop;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;
std::string g_cli_path;

struct Check {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
    void note(const std::string& what) {
        if (!detail.empty()) detail += "; ";
        detail += what;
    }
};

void criterion(int id, const std::string& name, double budget_seconds,
               const std::function<void(Check&)>& body) {
    Check check;
    const auto start = std::chrono::steady_clock::now();
    try {
        body(check);
    } catch (const std::exception& e) {
        check.require(false, std::string("exception: ") + e.what());
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    check.require(elapsed < budget_seconds,
                  "runtime " + std::to_string(elapsed) + " s exceeds budget");
    if (!check.pass) ++g_failures;
    std::ostringstream line;
    line << (check.pass ? "[PASS]" : "[FAIL]") << " criterion " << id << ": " << name << " ("
         << std::fixed;
    line.precision(2);
    line << elapsed << " s)";
    if (!check.detail.empty()) line << " -- " << check.detail;
    std::cout << line.str() << "\n" << std::flush;
}

CMatrix random_complex(Rng& rng, int rows, int cols) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    CMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = Complex(gauss(rng), gauss(rng));
    return m;
}

RVector random_vector(Rng& rng, int dim) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    RVector v(dim);
    for (int i = 0; i < dim; ++i) v(i) = gauss(rng);
    return v;
}

double set_distance(const Complex& value, const std::vector<Complex>& set) {
    double best = std::numeric_limits<double>::infinity();
    for (const Complex& s : set) best = std::min(best, std::abs(value - s));
    return best;
}

double mean_dominant_distance(const CMatrix& K, const std::vector<Complex>& truth, int count) {
    const EigResult decomposition = eig(K);
    double total = 0.0;
    for (int j = 0; j < count; ++j)
        total += set_distance(decomposition.values[static_cast<std::size_t>(j)], truth);
    return total / count;
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("koop_acceptance_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::map<std::string, std::string> parse_summary(const fs::path& path) {
    std::map<std::string, std::string> out;
    std::ifstream in(path);
    std::string line;
    while (std::getline(in, line)) {
        const auto colon = line.find(": ");
        if (colon != std::string::npos) out[line.substr(0, colon)] = line.substr(colon + 2);
    }
    return out;
}

// last-row |truth_col - pred_col| from a prediction CSV written with truth
double final_component_error(const fs::path& csv, int component, int state_dim) {
    std::ifstream in(csv);
    std::string line, last;
    std::getline(in, line);  // header
    while (std::getline(in, line))
        if (!line.empty()) last = line;
    std::vector<double> fields;
    std::stringstream ss(last);
    std::string tok;
    while (std::getline(ss, tok, ',')) fields.push_back(std::strtod(tok.c_str(), nullptr));
    const double truth = fields.at(1 + static_cast<std::size_t>(component));
    const double pred = fields.at(1 + static_cast<std::size_t>(state_dim + component));
    return std::abs(truth - pred);
}

std::vector<std::pair<int, double>> mse_grid_row_sums(const fs::path& csv, Check& check) {
    std::vector<std::pair<int, double>> sums;
    std::ifstream in(csv);
    std::string line;
    std::getline(in, line);
    check.require(line.rfind("training_size,mse_s0,", 0) == 0, csv.string() + ": schema");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string tok;
        std::getline(ss, tok, ',');
        const int size = std::atoi(tok.c_str());
        double total = 0.0;
        int cols = 0;
        while (std::getline(ss, tok, ',')) {
            total += std::strtod(tok.c_str(), nullptr);
            ++cols;
        }
        check.require(cols == 100, csv.string() + ": expected 100 state columns");
        sums.emplace_back(size, total);
    }
    return sums;
}

bool directories_byte_identical(const fs::path& a, const fs::path& b, std::string& why) {
    std::vector<fs::path> rel_a, rel_b;
    for (const auto& entry : fs::recursive_directory_iterator(a))
        if (entry.is_regular_file()) rel_a.push_back(fs::relative(entry.path(), a));
    for (const auto& entry : fs::recursive_directory_iterator(b))
        if (entry.is_regular_file()) rel_b.push_back(fs::relative(entry.path(), b));
    std::sort(rel_a.begin(), rel_a.end());
    std::sort(rel_b.begin(), rel_b.end());
    if (rel_a != rel_b) {
        why = "file sets differ";
        return false;
    }
    for (const auto& rel : rel_a) {
        std::ifstream fa(a / rel, std::ios::binary), fb(b / rel, std::ios::binary);
        const std::string ca{std::istreambuf_iterator<char>(fa), {}};
        const std::string cb{std::istreambuf_iterator<char>(fb), {}};
        if (ca != cb) {
            why = rel.string() + " differs";
            return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------

void criterion_exact_recovery(Check& check) {
    Rng rng(5);
    RMatrix M(6, 6);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) M((i), (j)) = gauss(rng);
    M *= 0.9 / spectral_radius(M.cast<Complex>());

    const Dictionary dict = Dictionary::linear(6);
    SnapshotPairs pairs;
    for (int i = 0; i < 50; ++i) {
        const RVector x = random_vector(rng, 6);
        pairs.append(x, M * x, PairOrigin::Observed);
    }
    const KoopmanModel model = fit_edmd(build_gram(pairs, dict), dict);
    const double recovery = (model.K.real() - M.transpose()).norm();
    check.require(recovery <= 1e-8, "operator recovery " + format_double(recovery));

    const EigResult truth = eig(M.cast<Complex>());
    double worst = 0.0;
    for (const auto& pair : spectrum(model))
        worst = std::max(worst, set_distance(pair.value, truth.values));
    check.require(worst <= 1e-8, "spectrum deviation " + format_double(worst));
    check.note("recovery " + format_double(recovery) + ", spectrum " + format_double(worst));
}

void criterion_residual_bound(Check& check) {
    int checked = 0;
    for (int instance = 0; instance < 100; ++instance) {
        Rng rng(static_cast<std::uint64_t>(instance) + 1000);
        std::uniform_int_distribution<int> dim_dist(2, 8);
        std::uniform_real_distribution<double> lambda_dist(0.0, 2.0);
        const int n = dim_dist(rng);
        const double lambda = lambda_dist(rng);
        GramMatrices gram;
        gram.G = random_complex(rng, n, n);
        gram.A = random_complex(rng, n, n);
        gram.sample_count = 1;
        const CMatrix K = random_complex(rng, n, n);

        const double nominal = (gram.G * K - gram.A).norm();
        const double sampled =
            worst_case_residual_sample(gram, K, lambda, 200, static_cast<std::uint64_t>(instance));
        const double bound = nominal + lambda * K.norm() + lambda * n;
        if (sampled < nominal) {
            check.require(false, "sampled max below nominal on instance " +
                                     std::to_string(instance));
            return;
        }
        if (sampled > bound + 1e-9) {
            check.require(false, "bound violated on instance " + std::to_string(instance) +
                                     " by " + format_double(sampled - bound));
            return;
        }
        ++checked;
    }
    check.note(std::to_string(checked) + " instances x 200 draws within the bound");
}

void criterion_regularization_path(Check& check) {
    double worst_ridge = 0.0, worst_frobenius = 0.0;
    for (const std::uint64_t seed : {1ull, 2ull, 3ull, 4ull, 5ull}) {
        Rng rng(seed);
        const CMatrix G = random_complex(rng, 4, 4);
        const CMatrix A = random_complex(rng, 4, 4);
        double prev = std::numeric_limits<double>::infinity();
        for (int i = 0; i < 20; ++i) {
            const double lambda = std::pow(10.0, -6.0 + 8.0 * i / 19.0);
            const double norm = solve_ridge(G, A, lambda).first.norm();
            if (norm > prev) worst_ridge = std::max(worst_ridge, norm - prev);
            prev = norm;
        }
    }
    check.require(worst_ridge <= 1e-12, "ridge path increase " + format_double(worst_ridge));

    for (const std::uint64_t seed : {6ull, 7ull}) {
        Rng rng(seed);
        const CMatrix G = random_complex(rng, 3, 3);
        const CMatrix A = random_complex(rng, 3, 3);
        double prev = std::numeric_limits<double>::infinity();
        for (int i = 0; i < 20; ++i) {
            const double lambda = std::pow(10.0, -6.0 + 8.0 * i / 19.0);
            const double norm =
                solve_frobenius_regularized(G, A, lambda, 1e-12, 20000).first.norm();
            if (norm > prev + 1e-6 * std::max(prev, 1.0))
                worst_frobenius = std::max(worst_frobenius, norm - prev);
            prev = norm;
        }
    }
    check.require(worst_frobenius == 0.0,
                  "frobenius path increase " + format_double(worst_frobenius));
}

void criterion_oscillator_reproduction(Check& check) {
    OscillatorRingConfig sys;
    const RMatrix step = oscillator_step_matrix(sys);
    const EigResult truth = eig(step.cast<Complex>());
    const Dictionary dict = Dictionary::linear(40);
    const LambdaGrid grid{1e-6, 1.0, 20};
    const RobustSolveOptions opts;
    constexpr int kDominant = 6;

    int wins = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        Rng rng(seed);
        const RVector theta0 = random_vector(rng, 20);
        const Trajectory traj = simulate_oscillators(sys, theta0, RVector::Zero(20), 100);
        const std::vector<RVector> train(traj.states.begin(), traj.states.begin() + 16);

        const KoopmanModel plain =
            fit_edmd(build_gram(SnapshotPairs::from_trajectory(train), dict), dict);

        EnrichmentConfig enrich;
        enrich.radius = 0.1;
        enrich.multiplier = 2;  // 30 artificial points
        enrich.seed = seed;
        const GramMatrices gram = build_gram(enrich_trajectory(train, enrich), dict);
        const KoopmanModel robust = fit_robust(gram, dict, select_lambda(gram, dict, grid, opts), opts);

        const bool spectra_closer =
            mean_dominant_distance(robust.K, truth.values, kDominant) <
            mean_dominant_distance(plain.K, truth.values, kDominant);

        const CMatrix C = fit_output_map(train, dict).C;
        KoopmanModel robust_p = robust, plain_p = plain;
        robust_p.C = C;
        plain_p.C = C;
        const PredictionResult pr = predict(robust_p, traj.states[15], 45);
        const PredictionResult pp = predict(plain_p, traj.states[15], 45);
        const RVector& final_truth = traj.states[60];
        bool errors_below = true;
        for (const int osc : {2, 3}) {  // oscillators 3 and 4
            const double robust_err =
                std::abs(pr.predicted.states.back()(osc) - final_truth(osc));
            const double plain_err =
                std::abs(pp.predicted.states.back()(osc) - final_truth(osc));
            errors_below = errors_below && robust_err < plain_err;
        }
        if (spectra_closer && errors_below) ++wins;
    }
    check.require(wins >= 8, "robust beat plain on " + std::to_string(wins) + "/10 seeds");
    check.note(std::to_string(wins) + "/10 seeds");
}

void criterion_stuart_landau_reproduction(Check& check) {
    const fs::path dir = fresh_dir("stuart_landau");
    run_experiment("stuart-landau", dir, 0);

    const KoopmanModel robust = load_model(dir / "robust_model.json");
    const KoopmanModel plain = load_model(dir / "plain_model.json");
    const double rho_robust = spectral_radius(robust.K);
    const double rho_plain = spectral_radius(plain.K);
    check.require(rho_plain > rho_robust,
                  "spectral radii: plain " + format_double(rho_plain) + " vs robust " +
                      format_double(rho_robust));

    const double robust_theta = final_component_error(dir / "robust_prediction.csv", 1, 2);
    const double plain_theta = final_component_error(dir / "plain_prediction.csv", 1, 2);
    check.require(robust_theta < plain_theta,
                  "final theta errors: robust " + format_double(robust_theta) + " vs plain " +
                      format_double(plain_theta));
    check.note("rho " + format_double(rho_robust) + " < " + format_double(rho_plain) +
               ", theta err " + format_double(robust_theta) + " vs " +
               format_double(plain_theta));
}

void criterion_burgers_reproduction(Check& check) {
    const fs::path dir = fresh_dir("burgers");
    run_experiment("burgers", dir, 0);
    const auto summary = parse_summary(dir / "summary.txt");
    const double robust_mse = std::strtod(summary.at("robust_total_mse").c_str(), nullptr);
    const double plain_mse = std::strtod(summary.at("plain_total_mse").c_str(), nullptr);
    check.require(robust_mse <= plain_mse, "size 8: robust " + format_double(robust_mse) +
                                               " vs plain " + format_double(plain_mse));

    const fs::path sweep_dir = fresh_dir("burgers_sweep");
    run_experiment("burgers-sweep", sweep_dir, 0);
    const auto robust_rows = mse_grid_row_sums(sweep_dir / "robust_mse_grid.csv", check);
    const auto plain_rows = mse_grid_row_sums(sweep_dir / "plain_mse_grid.csv", check);
    const std::vector<int> expected_sizes{5, 10, 15, 20, 25, 30, 35};
    check.require(robust_rows.size() == 7 && plain_rows.size() == 7, "expected 7 sweep rows");
    for (std::size_t i = 0; i < robust_rows.size() && i < plain_rows.size(); ++i) {
        check.require(robust_rows[i].first == expected_sizes[i], "row sizes");
        if (robust_rows[i].second > plain_rows[i].second) {
            check.require(false, "size " + std::to_string(robust_rows[i].first) + ": robust " +
                                     format_double(robust_rows[i].second) + " > plain " +
                                     format_double(plain_rows[i].second));
        }
    }
}

void criterion_simulator_oracles(Check& check) {
    // exponential integrator vs RK4 substepping, per step along a trajectory
    OscillatorRingConfig osc;
    const RMatrix B = oscillator_continuous_matrix(osc);
    Rng rng(77);
    const RVector theta0 = random_vector(rng, 20);
    const RVector omega0 = random_vector(rng, 20);
    const Trajectory ring = simulate_oscillators(osc, theta0, omega0, 20);
    const double h = osc.dt / 100.0;
    double rk4_gap = 0.0;
    for (std::size_t step = 0; step + 1 < ring.size(); ++step) {
        RVector y = ring.states[step];
        for (int s = 0; s < 100; ++s) {
            const RVector k1 = B * y;
            const RVector k2 = B * (y + 0.5 * h * k1);
            const RVector k3 = B * (y + 0.5 * h * k2);
            const RVector k4 = B * (y + h * k3);
            y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        rk4_gap = std::max(rk4_gap, (ring.states[step + 1] - y).norm());
    }
    check.require(rk4_gap <= 1e-9, "RK4 gap " + format_double(rk4_gap));

    // Burgers boundaries and maximum principle
    BurgersConfig burgers;
    const Trajectory field = simulate_burgers(burgers, burgers_sine_initial(burgers));
    double prev = std::numeric_limits<double>::infinity();
    for (const auto& state : field.states) {
        if (state(0) != 0.0 || state(burgers.nx - 1) != 0.0) {
            check.require(false, "nonzero boundary");
            break;
        }
        const double peak = state.cwiseAbs().maxCoeff();
        if (peak > prev) {
            check.require(false, "max-norm increased by " + format_double(peak - prev));
            break;
        }
        prev = peak;
    }

    // Stuart-Landau fixed point
    StuartLandauConfig sl;
    const Trajectory cycle = simulate_stuart_landau(sl, 1.0, std::numbers::pi, 150);
    for (const auto& state : cycle.states) {
        if (state(0) != 1.0) {
            check.require(false, "limit-cycle radius drifted");
            break;
        }
    }
}

void criterion_determinism(Check& check) {
    if (g_cli_path.empty()) {
        check.require(false, "CLI path not provided (argv[1])");
        return;
    }
    const fs::path dir_a = fresh_dir("determinism_a");
    const fs::path dir_b = fresh_dir("determinism_b");
    const std::string base = g_cli_path + " experiment --preset oscillators --seed 42";
    const std::string run_a = base + " --output-dir " + dir_a.string() + " >/dev/null 2>&1";
    const std::string run_b = base + " --output-dir " + dir_b.string() + " >/dev/null 2>&1";
    check.require(std::system(run_a.c_str()) == 0, "first run failed");
    check.require(std::system(run_b.c_str()) == 0, "second run failed");

    std::string why;
    check.require(directories_byte_identical(dir_a, dir_b, why), why);
    int files = 0;
    for (const auto& entry : fs::recursive_directory_iterator(dir_a))
        if (entry.is_regular_file()) ++files;
    check.note(std::to_string(files) + " files byte-identical");
}

}  // namespace

int main(int argc, char** argv) {
    if (argc > 1) g_cli_path = argv[1];

    criterion(1, "exact recovery of a 6-d linear map", 1.0, criterion_exact_recovery);
    criterion(2, "worst-case residual bound chain", 10.0, criterion_residual_bound);
    criterion(3, "regularization path monotonicity", 5.0, criterion_regularization_path);
    criterion(4, "oscillator-ring reproduction (spectra and prediction)", 30.0,
              criterion_oscillator_reproduction);
    criterion(5, "stuart-landau reproduction (stability and theta error)", 20.0,
              criterion_stuart_landau_reproduction);
    criterion(6, "burgers reproduction (MSE ordering and sweep grid)", 60.0,
              criterion_burgers_reproduction);
    criterion(7, "simulator oracles", 10.0, criterion_simulator_oracles);
    criterion(8, "experiment determinism under a fixed seed", 120.0, criterion_determinism);

    if (g_failures > 0) {
        std::cout << g_failures << " criterion(s) failed\n";
        return 1;
    }
    std::cout << "all criteria passed\n";
    return 0;
}
