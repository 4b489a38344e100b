#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "koop/koopman.hpp"
#include "koop/predictor.hpp"
#include "koop/systems.hpp"

namespace koop {

using json = nlohmann::json;

/// Shortest exact form capped at 17 significant digits (%.17g);
/// round-trips every double bit-exactly.
std::string format_double(double v);

/// JSON serializer that prints numbers with format_double so files carry
/// full double precision and re-serialize byte-identically.
std::string dump_json(const json& j, int indent = 2);

// ---------------------------------------------------------------------------
// CSV. Every file declares its column schema in row 1; readers reject
// unknown schemas.
// ---------------------------------------------------------------------------

/// Schema: t,s0,s1,...
void write_trajectory_csv(const Trajectory& traj, const std::filesystem::path& path);
Trajectory read_trajectory_csv(const std::filesystem::path& path);

/// Schema: re_discrete,im_discrete,re_continuous,im_continuous
void write_spectrum_csv(const std::vector<Complex>& discrete,
                        const std::vector<Complex>& continuous,
                        const std::filesystem::path& path);

/// Schema: step,truth_0..,pred_0..,err (truth and err columns only when
/// ground truth was attached).
void write_prediction_csv(const PredictionResult& result,
                          const std::optional<Trajectory>& truth,
                          const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Model persistence: one structured text file with the dictionary
// descriptor, lambda, solver mode, enrichment provenance and the K/C
// matrices as [re, im] pairs in row-major order.
// ---------------------------------------------------------------------------

void save_model(const KoopmanModel& model, const std::filesystem::path& path);
KoopmanModel load_model(const std::filesystem::path& path);

json dictionary_to_json(const Dictionary& dict);
Dictionary dictionary_from_json(const json& j);

json enrichment_to_json(const EnrichmentConfig& cfg);
EnrichmentConfig enrichment_from_json(const json& j);

json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const json& j);

}  // namespace koop
