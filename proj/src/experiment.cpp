#include "koop/experiment.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <random>
#include <set>

#include "koop/errors.hpp"
#include "koop/random.hpp"

namespace koop {

namespace {

void reject_unknown_keys(const json& j, const std::set<std::string>& known,
                         const std::string& context) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!known.contains(it.key()))
            throw ConfigError(context + ": unknown field '" + it.key() + "'");
    }
}

OscillatorRingConfig oscillator_config_from_json(const json& j) {
    reject_unknown_keys(j, {"n_oscillators", "damping", "dt", "theta0", "omega0"},
                        "system_config (oscillators)");
    OscillatorRingConfig cfg;
    cfg.n_oscillators = j.value("n_oscillators", cfg.n_oscillators);
    cfg.damping = j.value("damping", cfg.damping);
    cfg.dt = j.value("dt", cfg.dt);
    cfg.validate();
    return cfg;
}

StuartLandauConfig stuart_config_from_json(const json& j) {
    reject_unknown_keys(j, {"mu", "gamma", "beta", "dt", "r0", "theta0"},
                        "system_config (stuart-landau)");
    StuartLandauConfig cfg;
    cfg.mu = j.value("mu", cfg.mu);
    cfg.gamma = j.value("gamma", cfg.gamma);
    cfg.beta = j.value("beta", cfg.beta);
    cfg.dt = j.value("dt", cfg.dt);
    cfg.validate();
    return cfg;
}

BurgersConfig burgers_config_from_json(const json& j) {
    reject_unknown_keys(j, {"viscosity", "dx", "dt", "nx", "nt"}, "system_config (burgers)");
    BurgersConfig cfg;
    cfg.viscosity = j.value("viscosity", cfg.viscosity);
    cfg.nx = j.value("nx", cfg.nx);
    cfg.dx = j.value("dx", 1.0 / (cfg.nx - 1));
    cfg.dt = j.value("dt", cfg.dt);
    cfg.nt = j.value("nt", cfg.nt);
    cfg.validate();
    return cfg;
}

RVector json_vector(const json& j, const std::string& field) {
    RVector v(static_cast<Eigen::Index>(j.size()));
    Eigen::Index i = 0;
    for (const auto& item : j) {
        if (!item.is_number()) throw ConfigError(field + ": expected an array of numbers");
        v(i++) = item.get<double>();
    }
    return v;
}

int state_dimension(const std::string& system, const json& system_config) {
    if (system == "oscillators")
        return 2 * oscillator_config_from_json(system_config).n_oscillators;
    if (system == "stuart-landau") return 2;
    if (system == "burgers") return burgers_config_from_json(system_config).nx;
    throw ConfigError("system: unknown '" + system + "'");
}

}  // namespace

void LambdaGrid::validate() const {
    if (start <= 0.0 || stop < start) throw ConfigError("lambda grid: need 0 < start <= stop");
    if (points < 2) throw ConfigError("lambda grid: need at least 2 points");
}

std::vector<double> LambdaGrid::values() const {
    validate();
    std::vector<double> vals(static_cast<std::size_t>(points));
    const double log_start = std::log(start);
    const double log_step = (std::log(stop) - log_start) / (points - 1);
    for (int i = 0; i < points; ++i) vals[static_cast<std::size_t>(i)] = std::exp(log_start + i * log_step);
    return vals;
}

RobustSolveOptions ExperimentConfig::solver_options() const {
    RobustSolveOptions opts;
    opts.mode = solver_mode;
    return opts;
}

void ExperimentConfig::validate() const {
    // train/predict configs may omit the system; simulate requires it
    if (!system.empty()) state_dimension(system, system_config);
    if (simulate_steps < 1) throw ConfigError("simulate_steps: must be >= 1");
    if (training_steps < 2) throw ConfigError("training_steps: must be >= 2");
    if (horizon < 1) throw ConfigError("horizon: must be >= 1");
    enrichment.validate();
    if (const auto* grid = std::get_if<LambdaGrid>(&lambda)) grid->validate();
    else if (std::get<double>(lambda) < 0.0) throw ConfigError("lambda: must be >= 0");
    if (solver_mode == SolverMode::Pseudoinverse)
        throw ConfigError("solver_mode: must be ridge or exact-frobenius");
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
    reject_unknown_keys(j,
                        {"system", "system_config", "simulate_steps", "training_steps",
                         "enrichment", "dictionary", "lambda", "horizon", "output_dir", "seed",
                         "solver_mode"},
                        "experiment config");
    ExperimentConfig cfg;
    try {
        cfg.system = j.value("system", std::string{});  // optional for train/predict configs
        cfg.system_config = j.value("system_config", json::object());
        cfg.simulate_steps = j.value("simulate_steps", cfg.simulate_steps);
        cfg.training_steps = j.value("training_steps", cfg.training_steps);
        cfg.seed = j.value("seed", cfg.seed);
        if (j.contains("enrichment")) {
            cfg.enrichment = enrichment_from_json(j.at("enrichment"));
            if (!j.at("enrichment").contains("seed")) cfg.enrichment.seed = cfg.seed;
        }
        if (j.contains("dictionary")) cfg.dictionary = j.at("dictionary");
        if (j.contains("lambda")) {
            const json& lam = j.at("lambda");
            if (lam.is_number()) {
                cfg.lambda = lam.get<double>();
            } else if (lam.is_object()) {
                reject_unknown_keys(lam, {"start", "stop", "points"}, "lambda");
                LambdaGrid grid;
                grid.start = lam.at("start").get<double>();
                grid.stop = lam.at("stop").get<double>();
                grid.points = lam.at("points").get<int>();
                cfg.lambda = grid;
            } else {
                throw ConfigError("lambda: expected a number or {start, stop, points}");
            }
        }
        cfg.horizon = j.value("horizon", cfg.horizon);
        if (j.contains("output_dir"))
            cfg.output_dir = j.at("output_dir").get<std::string>();
        if (j.contains("solver_mode"))
            cfg.solver_mode = solver_mode_from_string(j.at("solver_mode").get<std::string>());
    } catch (const json::exception& e) {
        throw ConfigError(std::string("experiment config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

json ExperimentConfig::to_json() const {
    json j;
    j["system"] = system;
    j["system_config"] = system_config;
    j["simulate_steps"] = simulate_steps;
    j["training_steps"] = training_steps;
    j["enrichment"] = enrichment_to_json(enrichment);
    j["dictionary"] = dictionary;
    if (const auto* grid = std::get_if<LambdaGrid>(&lambda)) {
        j["lambda"] = json{{"start", grid->start}, {"stop", grid->stop}, {"points", grid->points}};
    } else {
        j["lambda"] = std::get<double>(lambda);
    }
    j["horizon"] = horizon;
    j["output_dir"] = output_dir.string();
    j["seed"] = seed;
    j["solver_mode"] = to_string(solver_mode);
    return j;
}

SimulateOutcome run_simulate(const ExperimentConfig& cfg,
                             const std::optional<std::filesystem::path>& out) {
    cfg.validate();
    const std::filesystem::path path = out.value_or(cfg.output_dir / "trajectory.csv");

    Trajectory traj;
    if (cfg.system == "oscillators") {
        const OscillatorRingConfig sys = oscillator_config_from_json(cfg.system_config);
        RVector theta0, omega0;
        if (cfg.system_config.contains("theta0")) {
            theta0 = json_vector(cfg.system_config.at("theta0"), "theta0");
        } else {
            // seeded standard-normal positions
            Rng rng(cfg.seed);
            std::normal_distribution<double> gauss(0.0, 1.0);
            theta0.resize(sys.n_oscillators);
            for (int i = 0; i < sys.n_oscillators; ++i) theta0(i) = gauss(rng);
        }
        omega0 = cfg.system_config.contains("omega0")
                     ? json_vector(cfg.system_config.at("omega0"), "omega0")
                     : RVector(RVector::Zero(sys.n_oscillators));
        traj = simulate_oscillators(sys, theta0, omega0, cfg.simulate_steps);
    } else if (cfg.system == "stuart-landau") {
        const StuartLandauConfig sys = stuart_config_from_json(cfg.system_config);
        const double r0 = cfg.system_config.value("r0", 1.0);
        const double theta0 = cfg.system_config.value("theta0", std::numbers::pi);
        traj = simulate_stuart_landau(sys, r0, theta0, cfg.simulate_steps);
    } else if (cfg.system == "burgers") {
        BurgersConfig sys = burgers_config_from_json(cfg.system_config);
        sys.nt = cfg.simulate_steps;
        traj = simulate_burgers(sys, burgers_sine_initial(sys));
    } else {
        throw ConfigError("system: unknown '" + cfg.system + "'");
    }

    write_trajectory_csv(traj, path);
    return {path, static_cast<int>(traj.size()), traj.state_dim() + 1};
}

namespace {

std::vector<RVector> training_states(const Trajectory& traj, int training_steps,
                                     const std::filesystem::path& source) {
    if (static_cast<int>(traj.size()) < training_steps + 1)
        throw InsufficientDataError(source.string() + ": need " +
                                    std::to_string(training_steps + 1) + " rows for " +
                                    std::to_string(training_steps) + " training steps, got " +
                                    std::to_string(traj.size()));
    return {traj.states.begin(), traj.states.begin() + training_steps + 1};
}

Dictionary dictionary_for(const ExperimentConfig& cfg, int data_dim) {
    json descriptor = cfg.dictionary.is_null() || cfg.dictionary.empty()
                          ? json{{"kind", "linear"}, {"parameters", json::object()}}
                          : cfg.dictionary;
    if (!descriptor.contains("parameters")) descriptor["parameters"] = json::object();
    if (!descriptor.at("parameters").contains("state_dim"))
        descriptor["parameters"]["state_dim"] = data_dim;
    Dictionary dict = dictionary_from_json(descriptor);
    if (dict.state_dim() != data_dim)
        throw DimensionError("dictionary state_dim " + std::to_string(dict.state_dim()) +
                             " does not match data dimension " + std::to_string(data_dim));
    return dict;
}

}  // namespace

TrainOutcome run_train(const ExperimentConfig& cfg, const std::filesystem::path& trajectory_csv,
                       const std::string& prefix, bool write_sweep_models) {
    cfg.validate();
    const Trajectory traj = read_trajectory_csv(trajectory_csv);
    const std::vector<RVector> states = training_states(traj, cfg.training_steps, trajectory_csv);
    const Dictionary dict = dictionary_for(cfg, traj.state_dim());

    const EnrichmentConfig& enrich = cfg.enrichment;
    const SnapshotPairs pairs =
        enrich.mode == EnrichmentMode::Trajectory
            ? enrich_trajectory(states, enrich)
            : enrich_pairs(SnapshotPairs::from_trajectory(states), enrich);
    const GramMatrices gram = build_gram(pairs, dict);
    const RobustSolveOptions opts = cfg.solver_options();

    TrainOutcome outcome;
    outcome.model_file = cfg.output_dir / (prefix + "model.json");
    outcome.spectrum_csv = cfg.output_dir / (prefix + "spectrum.csv");

    if (const auto* grid = std::get_if<LambdaGrid>(&cfg.lambda)) {
        const LambdaSelection selection = sweep_lambda(gram, dict, *grid, opts);
        outcome.lambda = selection.lambda;
        outcome.sweep_csv = cfg.output_dir / (prefix + "sweep.csv");
        write_lambda_sweep_csv(selection.rows, *outcome.sweep_csv);
        if (write_sweep_models) {
            const std::vector<double> lambdas = grid->values();
            for (std::size_t i = 0; i < lambdas.size(); ++i) {
                KoopmanModel point = fit_robust(gram, dict, lambdas[i], opts);
                if (enrich.multiplier > 0) point.provenance = enrich;
                char name[64];
                std::snprintf(name, sizeof(name), "%smodel_sweep_%02zu.json", prefix.c_str(), i);
                save_model(point, cfg.output_dir / name);
            }
        }
    } else {
        outcome.lambda = std::get<double>(cfg.lambda);
    }

    KoopmanModel model = outcome.lambda > 0.0 ? fit_robust(gram, dict, outcome.lambda, opts)
                                              : fit_edmd(gram, dict);
    if (enrich.multiplier > 0) model.provenance = enrich;
    model.C = fit_output_map(states, dict).C;

    const EigResult decomposition = eig(model.K);
    write_spectrum_csv(decomposition.values,
                       discrete_to_continuous(decomposition.values, traj.dt),
                       outcome.spectrum_csv);
    save_model(model, outcome.model_file);
    outcome.model = std::move(model);
    return outcome;
}

PredictOutcome run_predict(const std::filesystem::path& model_file,
                           const std::filesystem::path& data_csv, int start_row, int horizon,
                           const std::optional<std::filesystem::path>& truth_csv,
                           const std::filesystem::path& out_csv) {
    if (horizon < 0) throw ConfigError("predict: horizon must be >= 0");
    const KoopmanModel model = load_model(model_file);
    const Trajectory data = read_trajectory_csv(data_csv);

    if (start_row < 0 || start_row >= static_cast<int>(data.size()))
        throw ConfigError("predict: start row " + std::to_string(start_row) +
                          " outside data with " + std::to_string(data.size()) + " rows");
    if (data.state_dim() != model.dictionary.state_dim())
        throw DimensionError("predict: data dimension " + std::to_string(data.state_dim()) +
                             " does not match model state_dim " +
                             std::to_string(model.dictionary.state_dim()));

    PredictOutcome outcome;
    outcome.result = predict(model, data.states[static_cast<std::size_t>(start_row)], horizon);
    outcome.result.predicted.dt = data.dt;
    outcome.csv = out_csv;

    std::optional<Trajectory> truth;
    const Trajectory& source = truth_csv.has_value() ? read_trajectory_csv(*truth_csv) : data;
    if (truth_csv.has_value() && source.state_dim() != data.state_dim())
        throw DimensionError("predict: truth dimension does not match data");
    if (static_cast<int>(source.size()) >= start_row + horizon + 1) {
        Trajectory t;
        t.dt = source.dt;
        t.states.assign(source.states.begin() + start_row,
                        source.states.begin() + start_row + horizon + 1);
        truth = std::move(t);
        attach_truth(outcome.result, *truth);
        outcome.final_step_error = outcome.result.per_step_error->back();
        outcome.mse_per_state = outcome.result.mse_per_state;
    } else if (truth_csv.has_value()) {
        throw InsufficientDataError(truth_csv->string() + ": truth has " +
                                    std::to_string(source.size()) + " rows, need " +
                                    std::to_string(start_row + horizon + 1));
    }

    write_prediction_csv(outcome.result, truth, out_csv);
    return outcome;
}

LambdaSelection sweep_lambda(const GramMatrices& gram, const Dictionary& dict,
                             const LambdaGrid& grid, const RobustSolveOptions& opts) {
    LambdaSelection selection;
    double best_radius = std::numeric_limits<double>::infinity();
    double best_lambda = 0.0;
    bool found_stable = false;

    for (const double lambda : grid.values()) {
        const KoopmanModel model = fit_robust(gram, dict, lambda, opts);
        LambdaSweepRow row;
        row.lambda = lambda;
        row.spectral_radius = spectral_radius(model.K);
        row.training_residual = (gram.G * model.K - gram.A).norm();
        selection.rows.push_back(row);

        if (!found_stable && row.spectral_radius <= 1.0 + 1e-12) {
            found_stable = true;
            selection.lambda = lambda;
        }
        if (row.spectral_radius < best_radius) {
            best_radius = row.spectral_radius;
            best_lambda = lambda;
        }
    }
    if (!found_stable) selection.lambda = best_lambda;
    return selection;
}

double select_lambda(const GramMatrices& gram, const Dictionary& dict, const LambdaGrid& grid,
                     const RobustSolveOptions& opts) {
    return sweep_lambda(gram, dict, grid, opts).lambda;
}

void write_lambda_sweep_csv(const std::vector<LambdaSweepRow>& rows,
                            const std::filesystem::path& path) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << "lambda,spectral_radius,training_residual\n";
    for (const auto& row : rows)
        out << format_double(row.lambda) << "," << format_double(row.spectral_radius) << ","
            << format_double(row.training_residual) << "\n";
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

SnapshotPairs enrich_to_total(const std::vector<RVector>& trajectory, int total_pairs,
                              const EnrichmentConfig& cfg) {
    if (trajectory.size() < 2)
        throw InsufficientDataError("enrich_to_total: trajectory must have >= 2 points");
    const int observed = static_cast<int>(trajectory.size()) - 1;
    if (total_pairs < observed)
        throw ConfigError("enrich_to_total: total " + std::to_string(total_pairs) +
                          " is below the " + std::to_string(observed) + " observed pairs");

    const int extra = total_pairs - observed;
    EnrichmentConfig padded = cfg;
    padded.mode = EnrichmentMode::Trajectory;
    padded.multiplier = (extra + observed - 1) / observed;  // ceil

    SnapshotPairs pairs = enrich_trajectory(trajectory, padded);
    pairs.inputs.resize(static_cast<std::size_t>(total_pairs));
    pairs.outputs.resize(static_cast<std::size_t>(total_pairs));
    pairs.origin.resize(static_cast<std::size_t>(total_pairs));
    pairs.source_pair.resize(static_cast<std::size_t>(total_pairs));
    return pairs;
}

ExperimentConfig preset_config(const std::string& preset,
                               const std::filesystem::path& output_dir, std::uint64_t seed) {
    ExperimentConfig cfg;
    cfg.output_dir = output_dir;
    cfg.seed = seed;
    cfg.enrichment.seed = seed;
    cfg.solver_mode = SolverMode::Ridge;

    if (preset == "oscillators") {
        cfg.system = "oscillators";
        cfg.system_config = json{{"n_oscillators", 20}, {"damping", 0.4}, {"dt", 0.01}};
        cfg.simulate_steps = 100;
        cfg.training_steps = 15;
        cfg.enrichment.multiplier = 2;  // 30 artificial pairs on top of 15 observed
        cfg.enrichment.radius = 0.1;
        cfg.dictionary = json{{"kind", "linear"}, {"parameters", {{"state_dim", 40}}}};
        cfg.lambda = LambdaGrid{1e-6, 1.0, 20};
        cfg.horizon = 45;
    } else if (preset == "stuart-landau") {
        cfg.system = "stuart-landau";
        cfg.system_config =
            json{{"mu", 1.0}, {"gamma", 1.0}, {"beta", 0.0}, {"dt", 0.01},
                 {"r0", 1.0},  {"theta0", std::numbers::pi}};
        cfg.simulate_steps = 150;
        cfg.training_steps = 30;
        cfg.enrichment.multiplier = 1;  // 30 artificial pairs on top of 30 observed
        // wide enough to stretch the sampled arc of the limit cycle, which
        // is what actually conditions the Fourier Gram matrix
        cfg.enrichment.radius = 0.3;
        cfg.dictionary = json{{"kind", "fourier"},
                              {"parameters", {{"state_dim", 2}, {"n_max", 10}, {"coord_index", 1}}}};
        cfg.lambda = LambdaGrid{1e-4, 1.0, 20};
        cfg.horizon = 70;
    } else if (preset == "burgers" || preset == "burgers-sweep") {
        cfg.system = "burgers";
        cfg.system_config =
            json{{"viscosity", 0.01}, {"nx", 100}, {"dx", 1.0 / 99.0}, {"dt", 0.02}};
        // the sweep predicts 35 steps past training sizes up to 35, so it
        // needs a longer reference run than the single-size preset
        cfg.simulate_steps = preset == "burgers-sweep" ? 100 : 50;
        cfg.training_steps = 8;
        cfg.enrichment.multiplier = 4;  // pads 8 observed pairs to 40 total
        cfg.enrichment.radius = 0.05;
        cfg.dictionary = json{{"kind", "linear"}, {"parameters", {{"state_dim", 100}}}};
        cfg.lambda = LambdaGrid{1e-6, 1.0, 20};
        cfg.horizon = 35;
    } else {
        throw ConfigError("preset: unknown '" + preset + "'");
    }
    return cfg;
}

namespace {

ExperimentConfig plain_variant(const ExperimentConfig& cfg) {
    ExperimentConfig plain = cfg;
    plain.enrichment.multiplier = 0;
    plain.lambda = 0.0;
    return plain;
}

void write_summary_line(std::ofstream& out, const std::string& key, const std::string& value) {
    out << key << ": " << value << "\n";
}

void run_standard_experiment(const ExperimentConfig& cfg) {
    const SimulateOutcome sim = run_simulate(cfg);

    const TrainOutcome robust = run_train(cfg, sim.csv, "robust_", /*write_sweep_models=*/false);
    const TrainOutcome plain =
        run_train(plain_variant(cfg), sim.csv, "plain_", /*write_sweep_models=*/false);

    const PredictOutcome robust_pred =
        run_predict(robust.model_file, sim.csv, cfg.training_steps, cfg.horizon, {},
                    cfg.output_dir / "robust_prediction.csv");
    const PredictOutcome plain_pred =
        run_predict(plain.model_file, sim.csv, cfg.training_steps, cfg.horizon, {},
                    cfg.output_dir / "plain_prediction.csv");

    std::ofstream out(cfg.output_dir / "summary.txt");
    if (!out) throw IoError("cannot write experiment summary");
    write_summary_line(out, "system", cfg.system);
    write_summary_line(out, "seed", std::to_string(cfg.seed));
    write_summary_line(out, "training_steps", std::to_string(cfg.training_steps));
    write_summary_line(out, "training_pairs",
                       std::to_string((cfg.enrichment.multiplier + 1) * cfg.training_steps));
    write_summary_line(out, "solver_mode", to_string(cfg.solver_mode));
    write_summary_line(out, "robust_lambda", format_double(robust.lambda));
    write_summary_line(out, "robust_spectral_radius",
                       format_double(spectral_radius(robust.model.K)));
    write_summary_line(out, "plain_spectral_radius",
                       format_double(spectral_radius(plain.model.K)));
    if (robust_pred.final_step_error.has_value())
        write_summary_line(out, "robust_final_step_error",
                           format_double(*robust_pred.final_step_error));
    if (plain_pred.final_step_error.has_value())
        write_summary_line(out, "plain_final_step_error",
                           format_double(*plain_pred.final_step_error));
    if (robust_pred.mse_per_state.has_value())
        write_summary_line(out, "robust_total_mse",
                           format_double(robust_pred.mse_per_state->sum()));
    if (plain_pred.mse_per_state.has_value())
        write_summary_line(out, "plain_total_mse",
                           format_double(plain_pred.mse_per_state->sum()));

    // oscillators 3 and 4 get individual lines for easy comparison
    if (cfg.system == "oscillators" && robust_pred.final_step_error.has_value()) {
        const Trajectory traj = read_trajectory_csv(sim.csv);
        const RVector& truth = traj.states[static_cast<std::size_t>(cfg.training_steps + cfg.horizon)];
        for (const int osc : {3, 4}) {
            const double robust_err =
                std::abs(robust_pred.result.predicted.states.back()(osc - 1) - truth(osc - 1));
            const double plain_err =
                std::abs(plain_pred.result.predicted.states.back()(osc - 1) - truth(osc - 1));
            write_summary_line(out, "robust_final_position_error_osc" + std::to_string(osc),
                               format_double(robust_err));
            write_summary_line(out, "plain_final_position_error_osc" + std::to_string(osc),
                               format_double(plain_err));
        }
    }
}

void write_mse_grid_csv(const std::vector<int>& sizes, const std::vector<RVector>& rows,
                        const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    const Eigen::Index dim = rows.empty() ? 0 : rows.front().size();
    out << "training_size";
    for (Eigen::Index j = 0; j < dim; ++j) out << ",mse_s" << j;
    out << "\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out << sizes[i];
        for (Eigen::Index j = 0; j < dim; ++j) out << "," << format_double(rows[i](j));
        out << "\n";
    }
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

void run_burgers_sweep(const ExperimentConfig& cfg) {
    const SimulateOutcome sim = run_simulate(cfg);
    const Trajectory traj = read_trajectory_csv(sim.csv);
    const Dictionary dict = dictionary_for(cfg, traj.state_dim());
    const RobustSolveOptions opts = cfg.solver_options();
    const LambdaGrid grid = std::get<LambdaGrid>(cfg.lambda);
    constexpr int kTotalPairs = 40;

    const std::vector<int> sizes{5, 10, 15, 20, 25, 30, 35};
    std::vector<RVector> robust_rows, plain_rows;
    std::vector<double> robust_lambdas;

    for (const int size : sizes) {
        const std::vector<RVector> states(traj.states.begin(),
                                          traj.states.begin() + size + 1);

        const SnapshotPairs padded = enrich_to_total(states, kTotalPairs, cfg.enrichment);
        const GramMatrices robust_gram = build_gram(padded, dict);
        const double lambda = select_lambda(robust_gram, dict, grid, opts);
        KoopmanModel robust = fit_robust(robust_gram, dict, lambda, opts);
        robust.provenance = cfg.enrichment;
        robust_lambdas.push_back(lambda);

        KoopmanModel plain = fit_edmd(build_gram(SnapshotPairs::from_trajectory(states), dict), dict);

        const CMatrix C = fit_output_map(states, dict).C;
        robust.C = C;
        plain.C = C;

        Trajectory truth;
        truth.dt = traj.dt;
        truth.states.assign(traj.states.begin() + size,
                            traj.states.begin() + size + cfg.horizon + 1);

        PredictionResult robust_pred = predict(robust, traj.states[static_cast<std::size_t>(size)],
                                               cfg.horizon);
        attach_truth(robust_pred, truth);
        robust_rows.push_back(*robust_pred.mse_per_state);

        PredictionResult plain_pred = predict(plain, traj.states[static_cast<std::size_t>(size)],
                                              cfg.horizon);
        attach_truth(plain_pred, truth);
        plain_rows.push_back(*plain_pred.mse_per_state);
    }

    write_mse_grid_csv(sizes, robust_rows, cfg.output_dir / "robust_mse_grid.csv");
    write_mse_grid_csv(sizes, plain_rows, cfg.output_dir / "plain_mse_grid.csv");

    std::ofstream out(cfg.output_dir / "summary.txt");
    if (!out) throw IoError("cannot write experiment summary");
    write_summary_line(out, "system", "burgers-sweep");
    write_summary_line(out, "seed", std::to_string(cfg.seed));
    write_summary_line(out, "total_pairs_per_size", std::to_string(kTotalPairs));
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        const std::string tag = "size_" + std::to_string(sizes[i]);
        write_summary_line(out, tag + "_robust_lambda", format_double(robust_lambdas[i]));
        write_summary_line(out, tag + "_robust_total_mse", format_double(robust_rows[i].sum()));
        write_summary_line(out, tag + "_plain_total_mse", format_double(plain_rows[i].sum()));
    }
}

}  // namespace

void run_experiment(const std::string& preset, const std::filesystem::path& output_dir,
                    std::uint64_t seed) {
    std::error_code ec;
    std::filesystem::create_directories(output_dir, ec);
    const ExperimentConfig cfg = preset_config(preset, output_dir, seed);
    if (preset == "burgers-sweep") {
        run_burgers_sweep(cfg);
    } else {
        run_standard_experiment(cfg);
    }
}

std::filesystem::path default_output_dir() {
    if (const char* env = std::getenv("KOOP_OUTPUT_DIR"); env && *env) return env;
    return std::filesystem::current_path();
}

}  // namespace koop
