#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "koop/io.hpp"

namespace koop {

/// Log-spaced lambda grid for sweeps and automatic selection.
struct LambdaGrid {
    double start = 1e-6;
    double stop = 1.0;
    int points = 20;

    void validate() const;
    std::vector<double> values() const;
};

/// One experiment, end to end: which system to simulate, how much of the
/// trajectory to train on, how to enrich it, which dictionary and lambda
/// to fit with, and how far to predict.
struct ExperimentConfig {
    std::string system;  // oscillators | stuart-landau | burgers
    json system_config = json::object();
    int simulate_steps = 100;
    int training_steps = 15;
    EnrichmentConfig enrichment;
    json dictionary;  // same descriptor schema as model files
    std::variant<double, LambdaGrid> lambda = 0.0;
    int horizon = 45;
    std::filesystem::path output_dir;
    std::uint64_t seed = 0;
    SolverMode solver_mode = SolverMode::Ridge;

    RobustSolveOptions solver_options() const;
    void validate() const;
    static ExperimentConfig from_json(const json& j);
    json to_json() const;
};

// ---------------------------------------------------------------------------
// Single-stage runners shared by the CLI subcommands.
// ---------------------------------------------------------------------------

struct SimulateOutcome {
    std::filesystem::path csv;
    int rows = 0;
    int cols = 0;
};

/// Runs the configured simulator and writes the trajectory CSV
/// (default name trajectory.csv under the output directory).
SimulateOutcome run_simulate(const ExperimentConfig& cfg,
                             const std::optional<std::filesystem::path>& out = {});

struct TrainOutcome {
    std::filesystem::path model_file;
    std::filesystem::path spectrum_csv;
    std::optional<std::filesystem::path> sweep_csv;  // grid mode only
    double lambda = 0.0;
    KoopmanModel model;
};

/// Truncates the trajectory to training_steps transitions, trains, fits the
/// output map on the training states, writes the model file and spectrum
/// CSV. Grid mode sweeps lambda, optionally writing one model per grid
/// point plus a sweep CSV, and keeps the selected lambda's model.
TrainOutcome run_train(const ExperimentConfig& cfg,
                       const std::filesystem::path& trajectory_csv,
                       const std::string& prefix = "",
                       bool write_sweep_models = true);

struct PredictOutcome {
    std::filesystem::path csv;
    std::optional<double> final_step_error;
    std::optional<RVector> mse_per_state;
    PredictionResult result;
};

/// Predicts from the given row of the data CSV. Ground truth comes from the
/// explicit truth file when given, otherwise from the data file itself when
/// it extends far enough past the start row.
PredictOutcome run_predict(const std::filesystem::path& model_file,
                           const std::filesystem::path& data_csv,
                           int start_row, int horizon,
                           const std::optional<std::filesystem::path>& truth_csv,
                           const std::filesystem::path& out_csv);

// ---------------------------------------------------------------------------
// Lambda selection.
// ---------------------------------------------------------------------------

struct LambdaSweepRow {
    double lambda = 0.0;
    double spectral_radius = 0.0;
    double training_residual = 0.0;  // ||G K - A||_F at this lambda
};

struct LambdaSelection {
    double lambda = 0.0;
    std::vector<LambdaSweepRow> rows;
};

/// Fits the grid and picks the smallest lambda whose operator has spectral
/// radius <= 1, falling back to the grid argmin of the radius.
LambdaSelection sweep_lambda(const GramMatrices& gram, const Dictionary& dict,
                             const LambdaGrid& grid, const RobustSolveOptions& opts);

double select_lambda(const GramMatrices& gram, const Dictionary& dict,
                     const LambdaGrid& grid, const RobustSolveOptions& opts);

/// Schema: lambda,spectral_radius,training_residual
void write_lambda_sweep_csv(const std::vector<LambdaSweepRow>& rows,
                            const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Presets and full experiments.
// ---------------------------------------------------------------------------

/// Enrichment padded to an exact total pair count: full replicates plus a
/// partial replicate truncated to the remainder.
SnapshotPairs enrich_to_total(const std::vector<RVector>& trajectory,
                              int total_pairs, const EnrichmentConfig& cfg);

ExperimentConfig preset_config(const std::string& preset,
                               const std::filesystem::path& output_dir,
                               std::uint64_t seed);

/// Runs a preset end to end: simulate, train robust and plain baseline,
/// predict with both, write side-by-side spectra, error CSVs and a summary.
/// Presets: oscillators, stuart-landau, burgers, burgers-sweep.
void run_experiment(const std::string& preset,
                    const std::filesystem::path& output_dir,
                    std::uint64_t seed);

/// Default output directory: the KOOP_OUTPUT_DIR environment variable when
/// set, otherwise the current directory.
std::filesystem::path default_output_dir();

}  // namespace koop
