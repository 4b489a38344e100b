// Command-line front end: simulate the benchmark systems, train operators
// from trajectory CSVs, predict, and run the self-contained experiment
// presets. Exit codes: 0 ok, 2 usage/config, 3 numerical failure, 4 I/O.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "koop/errors.hpp"
#include "koop/experiment.hpp"

namespace {

using koop::ExperimentConfig;
using koop::json;

json load_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw koop::IoError("cannot open '" + path.string() + "' for reading");
    try {
        json j;
        in >> j;
        return j;
    } catch (const json::exception& e) {
        throw koop::ConfigError(path.string() + ": " + e.what());
    }
}

struct CommonFlags {
    std::string config_file;
    std::string output_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

// Flag-driven overrides applied on top of an optional config file.
struct TrainFlags {
    std::string data;
    int training_steps = -1;
    double lambda = -1.0;
    double lambda_start = 0.0, lambda_stop = 0.0;
    int lambda_points = 0;
    int multiplier = -1;
    double radius = -1.0;
    std::string enrichment_mode;
    double output_radius = -1.0;
    double lipschitz = -1.0;
    std::string dictionary;
    int n_max = 10;
    int coord_index = 0;
    int max_degree = 2;
    std::string solver;
};

ExperimentConfig assemble_config(const CommonFlags& common) {
    ExperimentConfig cfg;
    if (!common.config_file.empty())
        cfg = ExperimentConfig::from_json(load_json_file(common.config_file));
    if (!common.output_dir.empty())
        cfg.output_dir = common.output_dir;
    else if (cfg.output_dir.empty())
        cfg.output_dir = koop::default_output_dir();
    if (common.seed_set) {
        cfg.seed = common.seed;
        cfg.enrichment.seed = common.seed;
    }
    return cfg;
}

void apply_train_flags(ExperimentConfig& cfg, const TrainFlags& flags, const CLI::App* cmd) {
    if (flags.training_steps >= 0) cfg.training_steps = flags.training_steps;
    if (flags.lambda >= 0.0) cfg.lambda = flags.lambda;
    if (cmd->count("--lambda-start") || cmd->count("--lambda-stop") ||
        cmd->count("--lambda-points")) {
        koop::LambdaGrid grid;
        if (flags.lambda_start > 0.0) grid.start = flags.lambda_start;
        if (flags.lambda_stop > 0.0) grid.stop = flags.lambda_stop;
        if (flags.lambda_points > 0) grid.points = flags.lambda_points;
        cfg.lambda = grid;
    }
    if (flags.multiplier >= 0) cfg.enrichment.multiplier = flags.multiplier;
    if (flags.radius > 0.0) cfg.enrichment.radius = flags.radius;
    if (!flags.enrichment_mode.empty())
        cfg.enrichment.mode = koop::enrichment_mode_from_string(flags.enrichment_mode);
    if (flags.output_radius >= 0.0) cfg.enrichment.output_radius = flags.output_radius;
    if (flags.lipschitz > 0.0 && !cfg.enrichment.output_radius.has_value())
        cfg.enrichment.output_radius = cfg.enrichment.radius * flags.lipschitz;
    if (!flags.solver.empty()) cfg.solver_mode = koop::solver_mode_from_string(flags.solver);
    if (!flags.dictionary.empty()) {
        json params = json::object();
        if (flags.dictionary == "fourier") {
            params["n_max"] = flags.n_max;
            params["coord_index"] = flags.coord_index;
        } else if (flags.dictionary == "monomial") {
            params["max_degree"] = flags.max_degree;
        } else if (flags.dictionary != "linear") {
            throw koop::ConfigError("dictionary: unknown kind '" + flags.dictionary + "'");
        }
        cfg.dictionary = json{{"kind", flags.dictionary}, {"parameters", params}};
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Koopman operator approximation from sparse time-series data"};
    app.require_subcommand(1);

    CommonFlags common;
    app.add_option("--output-dir", common.output_dir,
                   "Output directory (default: $KOOP_OUTPUT_DIR or the current directory)");
    auto* seed_opt = app.add_option("--seed", common.seed, "Seed for all randomized stages");
    app.fallthrough();

    // --- simulate ---
    auto* simulate = app.add_subcommand("simulate", "Run a benchmark simulator, write a CSV");
    std::string sim_system;
    int sim_steps = -1;
    double sim_dt = -1.0;
    std::string sim_out;
    int sim_n_osc = -1;
    double sim_damping = -1.0;
    double sim_mu = -1.0, sim_gamma = 0.0, sim_beta = 0.0, sim_r0 = -1.0, sim_theta0 = 0.0;
    double sim_viscosity = -1.0;
    int sim_nx = -1;
    simulate->add_option("--config", common.config_file, "Experiment config JSON");
    simulate->add_option("--system", sim_system, "oscillators | stuart-landau | burgers");
    simulate->add_option("--steps", sim_steps, "Number of time steps to simulate");
    simulate->add_option("--dt", sim_dt, "Sampling interval");
    simulate->add_option("--n-oscillators", sim_n_osc, "Ring size (oscillators)");
    simulate->add_option("--damping", sim_damping, "Damping coefficient (oscillators)");
    simulate->add_option("--mu", sim_mu, "Limit-cycle parameter (stuart-landau)");
    simulate->add_option("--gamma", sim_gamma, "Angular drift (stuart-landau)");
    simulate->add_option("--beta", sim_beta, "Amplitude-phase coupling (stuart-landau)");
    simulate->add_option("--r0", sim_r0, "Initial radius (stuart-landau)");
    simulate->add_option("--theta0", sim_theta0, "Initial angle (stuart-landau)");
    simulate->add_option("--viscosity", sim_viscosity, "Kinematic viscosity (burgers)");
    simulate->add_option("--nx", sim_nx, "Grid size including boundaries (burgers)");
    simulate->add_option("--out", sim_out, "Trajectory CSV path");

    // --- train ---
    auto* train = app.add_subcommand("train", "Fit an operator from a trajectory CSV");
    TrainFlags train_flags;
    train->add_option("--config", common.config_file, "Experiment config JSON");
    train->add_option("--data", train_flags.data, "Trajectory CSV")->required();
    train->add_option("--training-steps", train_flags.training_steps,
                      "Transitions to train on (rows used: training-steps + 1)");
    train->add_option("--lambda", train_flags.lambda, "Fixed regularization weight");
    train->add_option("--lambda-start", train_flags.lambda_start, "Sweep grid start");
    train->add_option("--lambda-stop", train_flags.lambda_stop, "Sweep grid stop");
    train->add_option("--lambda-points", train_flags.lambda_points, "Sweep grid size");
    train->add_option("--multiplier", train_flags.multiplier,
                      "Artificial replicates per observed point");
    train->add_option("--radius", train_flags.radius, "Perturbation radius");
    train->add_option("--enrichment-mode", train_flags.enrichment_mode, "trajectory | pairs");
    train->add_option("--output-radius", train_flags.output_radius,
                      "Output perturbation bound (pairs mode)");
    train->add_option("--lipschitz", train_flags.lipschitz,
                      "Lipschitz estimate scaling the default output radius");
    train->add_option("--dictionary", train_flags.dictionary, "linear | fourier | monomial");
    train->add_option("--n-max", train_flags.n_max, "Fourier harmonic count");
    train->add_option("--coord-index", train_flags.coord_index, "Fourier lifted coordinate");
    train->add_option("--max-degree", train_flags.max_degree, "Monomial total degree bound");
    train->add_option("--solver", train_flags.solver, "ridge | exact-frobenius");

    // --- sweep ---
    auto* sweep = app.add_subcommand("sweep", "Lambda sweep: per-point models plus a summary CSV");
    sweep->add_option("--config", common.config_file, "Experiment config JSON");
    sweep->add_option("--data", train_flags.data, "Trajectory CSV")->required();
    sweep->add_option("--training-steps", train_flags.training_steps);
    sweep->add_option("--lambda-start", train_flags.lambda_start)->required();
    sweep->add_option("--lambda-stop", train_flags.lambda_stop)->required();
    sweep->add_option("--lambda-points", train_flags.lambda_points)->required();
    sweep->add_option("--multiplier", train_flags.multiplier);
    sweep->add_option("--radius", train_flags.radius);
    sweep->add_option("--enrichment-mode", train_flags.enrichment_mode, "trajectory | pairs");
    sweep->add_option("--output-radius", train_flags.output_radius);
    sweep->add_option("--lipschitz", train_flags.lipschitz);
    sweep->add_option("--dictionary", train_flags.dictionary, "linear | fourier | monomial");
    sweep->add_option("--n-max", train_flags.n_max);
    sweep->add_option("--coord-index", train_flags.coord_index);
    sweep->add_option("--max-degree", train_flags.max_degree);
    sweep->add_option("--solver", train_flags.solver, "ridge | exact-frobenius");

    // --- predict ---
    auto* predict = app.add_subcommand("predict", "Propagate a model from a data row");
    std::string pred_model, pred_data, pred_truth, pred_out;
    int pred_start_row = 0, pred_horizon = 1;
    predict->add_option("--model", pred_model, "Model file")->required();
    predict->add_option("--data", pred_data, "Trajectory CSV supplying the initial row")
        ->required();
    predict->add_option("--start-row", pred_start_row, "Row index of the initial condition");
    predict->add_option("--horizon", pred_horizon, "Steps to predict")->required();
    predict->add_option("--truth", pred_truth, "Ground-truth CSV (defaults to --data)");
    predict->add_option("--out", pred_out, "Prediction CSV path");

    // --- experiment ---
    auto* experiment = app.add_subcommand("experiment", "Run a self-contained preset");
    std::string preset;
    experiment
        ->add_option("--preset", preset,
                     "oscillators | stuart-landau | burgers | burgers-sweep")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return static_cast<int>(koop::ExitCode::Usage);
    }

    common.seed_set = seed_opt->count() > 0;

    try {
        if (simulate->parsed()) {
            ExperimentConfig cfg = assemble_config(common);
            if (!sim_system.empty()) cfg.system = sim_system;
            if (cfg.system.empty()) throw koop::ConfigError("simulate: --system is required");
            if (sim_steps > 0) cfg.simulate_steps = sim_steps;
            json& sc = cfg.system_config;
            if (sim_dt > 0.0) sc["dt"] = sim_dt;
            if (simulate->count("--n-oscillators")) sc["n_oscillators"] = sim_n_osc;
            if (simulate->count("--damping")) sc["damping"] = sim_damping;
            if (simulate->count("--mu")) sc["mu"] = sim_mu;
            if (simulate->count("--gamma")) sc["gamma"] = sim_gamma;
            if (simulate->count("--beta")) sc["beta"] = sim_beta;
            if (simulate->count("--r0")) sc["r0"] = sim_r0;
            if (simulate->count("--theta0")) sc["theta0"] = sim_theta0;
            if (simulate->count("--viscosity")) sc["viscosity"] = sim_viscosity;
            if (simulate->count("--nx")) {
                sc["nx"] = sim_nx;
                sc["dx"] = 1.0 / (sim_nx - 1);
            }
            std::optional<std::filesystem::path> out;
            if (!sim_out.empty()) out = sim_out;
            const koop::SimulateOutcome outcome = koop::run_simulate(cfg, out);
            std::cout << "wrote " << outcome.csv.string() << " (" << outcome.rows << " rows x "
                      << outcome.cols << " columns)\n";
        } else if (train->parsed() || sweep->parsed()) {
            ExperimentConfig cfg = assemble_config(common);
            apply_train_flags(cfg, train_flags, train->parsed() ? train : sweep);
            const koop::TrainOutcome outcome = koop::run_train(cfg, train_flags.data);
            std::cout << "wrote " << outcome.model_file.string() << " (lambda "
                      << koop::format_double(outcome.lambda) << ", solver "
                      << to_string(outcome.model.solver_mode) << ")\n";
            std::cout << "wrote " << outcome.spectrum_csv.string() << "\n";
            if (outcome.sweep_csv) std::cout << "wrote " << outcome.sweep_csv->string() << "\n";
        } else if (predict->parsed()) {
            ExperimentConfig cfg = assemble_config(common);
            const std::filesystem::path out =
                pred_out.empty() ? cfg.output_dir / "prediction.csv"
                                 : std::filesystem::path(pred_out);
            std::optional<std::filesystem::path> truth;
            if (!pred_truth.empty()) truth = pred_truth;
            const koop::PredictOutcome outcome =
                koop::run_predict(pred_model, pred_data, pred_start_row, pred_horizon, truth, out);
            std::cout << "wrote " << outcome.csv.string() << "\n";
            if (outcome.final_step_error) {
                std::cout << "final-step error: " << koop::format_double(*outcome.final_step_error)
                          << "\n";
                std::cout << "mse per state:";
                for (Eigen::Index j = 0; j < outcome.mse_per_state->size(); ++j)
                    std::cout << " " << koop::format_double((*outcome.mse_per_state)(j));
                std::cout << "\n";
            }
        } else if (experiment->parsed()) {
            ExperimentConfig cfg = assemble_config(common);
            koop::run_experiment(preset, cfg.output_dir, cfg.seed);
            std::cout << "wrote " << (cfg.output_dir / "summary.txt").string() << "\n";
        }
    } catch (const koop::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(e.exit_code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
