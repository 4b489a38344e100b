#include "koop/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "koop/errors.hpp"

namespace koop {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

void dump_rec(const json& j, std::string& out, int indent, int depth) {
    const std::string pad(static_cast<std::size_t>(indent) * (depth + 1), ' ');
    const std::string close_pad(static_cast<std::size_t>(indent) * depth, ' ');
    switch (j.type()) {
        case json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ",\n";
                first = false;
                out += pad + json(it.key()).dump() + ": ";
                dump_rec(it.value(), out, indent, depth + 1);
            }
            out += "\n" + close_pad + "}";
            return;
        }
        case json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            out += "[\n";
            bool first = true;
            for (const auto& item : j) {
                if (!first) out += ",\n";
                first = false;
                out += pad;
                dump_rec(item, out, indent, depth + 1);
            }
            out += "\n" + close_pad + "]";
            return;
        }
        case json::value_t::number_float:
            out += format_double(j.get<double>());
            return;
        default:
            out += j.dump();
            return;
    }
}

double parse_double(const std::string& token, const std::filesystem::path& path, int line) {
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (end == token.c_str() || (end && *end != '\0'))
        throw ConfigError(path.string() + ":" + std::to_string(line) +
                          ": cannot parse number '" + token + "'");
    return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

std::ofstream open_for_write(const std::filesystem::path& path) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    return out;
}

}  // namespace

std::string dump_json(const json& j, int indent) {
    std::string out;
    dump_rec(j, out, indent, 0);
    out += "\n";
    return out;
}

void write_trajectory_csv(const Trajectory& traj, const std::filesystem::path& path) {
    traj.validate();
    std::ofstream out = open_for_write(path);
    out << "t";
    for (int j = 0; j < traj.state_dim(); ++j) out << ",s" << j;
    out << "\n";
    for (std::size_t i = 0; i < traj.size(); ++i) {
        out << format_double(static_cast<double>(i) * traj.dt);
        const RVector& s = traj.states[i];
        for (Eigen::Index j = 0; j < s.size(); ++j) out << "," << format_double(s(j));
        out << "\n";
    }
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

Trajectory read_trajectory_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");

    std::string line;
    if (!std::getline(in, line)) throw ConfigError(path.string() + ": empty file");
    const std::vector<std::string> header = split_csv_line(line);
    if (header.empty() || header[0] != "t")
        throw ConfigError(path.string() + ":1: unknown schema, expected leading 't' column");
    for (std::size_t j = 1; j < header.size(); ++j) {
        if (header[j] != "s" + std::to_string(j - 1))
            throw ConfigError(path.string() + ":1: unknown schema, expected column 's" +
                              std::to_string(j - 1) + "', got '" + header[j] + "'");
    }
    const int dim = static_cast<int>(header.size()) - 1;
    if (dim < 1) throw ConfigError(path.string() + ":1: no state columns");

    Trajectory traj;
    std::vector<double> times;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const std::vector<std::string> fields = split_csv_line(line);
        if (static_cast<int>(fields.size()) != dim + 1)
            throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                              std::to_string(dim + 1) + " fields, got " +
                              std::to_string(fields.size()));
        times.push_back(parse_double(fields[0], path, line_no));
        RVector s(dim);
        for (int j = 0; j < dim; ++j)
            s(j) = parse_double(fields[static_cast<std::size_t>(j) + 1], path, line_no);
        traj.states.push_back(std::move(s));
    }
    if (traj.states.empty()) throw InsufficientDataError(path.string() + ": no data rows");
    traj.dt = times.size() > 1 ? times[1] - times[0] : 1.0;
    if (traj.dt <= 0.0) traj.dt = 1.0;
    return traj;
}

void write_spectrum_csv(const std::vector<Complex>& discrete,
                        const std::vector<Complex>& continuous,
                        const std::filesystem::path& path) {
    if (discrete.size() != continuous.size())
        throw DimensionError("write_spectrum_csv: spectra lengths disagree");
    std::ofstream out = open_for_write(path);
    out << "re_discrete,im_discrete,re_continuous,im_continuous\n";
    for (std::size_t j = 0; j < discrete.size(); ++j) {
        out << format_double(discrete[j].real()) << "," << format_double(discrete[j].imag())
            << "," << format_double(continuous[j].real()) << ","
            << format_double(continuous[j].imag()) << "\n";
    }
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

void write_prediction_csv(const PredictionResult& result,
                          const std::optional<Trajectory>& truth,
                          const std::filesystem::path& path) {
    const Trajectory& pred = result.predicted;
    pred.validate();
    const int dim = pred.state_dim();
    const bool with_truth = truth.has_value() && result.per_step_error.has_value();

    std::ofstream out = open_for_write(path);
    out << "step";
    if (with_truth)
        for (int j = 0; j < dim; ++j) out << ",truth_" << j;
    for (int j = 0; j < dim; ++j) out << ",pred_" << j;
    if (with_truth) out << ",err";
    out << "\n";

    for (std::size_t n = 0; n < pred.size(); ++n) {
        out << n;
        if (with_truth) {
            const RVector& t = truth->states[n];
            for (Eigen::Index j = 0; j < t.size(); ++j) out << "," << format_double(t(j));
        }
        const RVector& p = pred.states[n];
        for (Eigen::Index j = 0; j < p.size(); ++j) out << "," << format_double(p(j));
        if (with_truth) out << "," << format_double((*result.per_step_error)[n]);
        out << "\n";
    }
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

json dictionary_to_json(const Dictionary& dict) {
    json params;
    params["state_dim"] = dict.state_dim();
    switch (dict.kind()) {
        case DictionaryKind::Linear: break;
        case DictionaryKind::Fourier:
            params["n_max"] = dict.n_max();
            params["coord_index"] = dict.coord_index();
            break;
        case DictionaryKind::Monomial:
            params["max_degree"] = dict.max_degree();
            break;
    }
    return json{{"name", dict.name()}, {"kind", to_string(dict.kind())}, {"parameters", params}};
}

Dictionary dictionary_from_json(const json& j) {
    try {
        const std::string kind = j.at("kind").get<std::string>();
        const json& params = j.at("parameters");
        const int state_dim = params.at("state_dim").get<int>();
        Dictionary dict = [&] {
            if (kind == "linear") return Dictionary::linear(state_dim);
            if (kind == "fourier")
                return Dictionary::fourier(state_dim, params.at("n_max").get<int>(),
                                           params.at("coord_index").get<int>());
            if (kind == "monomial")
                return Dictionary::monomial(state_dim, params.at("max_degree").get<int>());
            throw ConfigError("dictionary: unknown kind '" + kind + "'");
        }();
        if (j.contains("name")) dict = dict.with_name(j.at("name").get<std::string>());
        return dict;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("dictionary descriptor: ") + e.what());
    }
}

json enrichment_to_json(const EnrichmentConfig& cfg) {
    json j{{"radius", cfg.radius},
           {"multiplier", cfg.multiplier},
           {"seed", cfg.seed},
           {"mode", to_string(cfg.mode)}};
    if (cfg.output_radius.has_value()) j["output_radius"] = *cfg.output_radius;
    return j;
}

EnrichmentConfig enrichment_from_json(const json& j) {
    try {
        EnrichmentConfig cfg;
        cfg.radius = j.at("radius").get<double>();
        cfg.multiplier = j.at("multiplier").get<int>();
        cfg.seed = j.value("seed", std::uint64_t{0});
        cfg.mode = enrichment_mode_from_string(j.at("mode").get<std::string>());
        if (j.contains("output_radius")) cfg.output_radius = j.at("output_radius").get<double>();
        return cfg;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("enrichment config: ") + e.what());
    }
}

json matrix_to_json(const CMatrix& m) {
    json entries = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            entries.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries}};
}

CMatrix matrix_from_json(const json& j) {
    try {
        const Eigen::Index rows = j.at("rows").get<Eigen::Index>();
        const Eigen::Index cols = j.at("cols").get<Eigen::Index>();
        const json& entries = j.at("entries");
        if (static_cast<Eigen::Index>(entries.size()) != rows * cols)
            throw ConfigError("matrix: entry count does not match rows x cols");
        CMatrix m(rows, cols);
        Eigen::Index k = 0;
        for (Eigen::Index i = 0; i < rows; ++i) {
            for (Eigen::Index jj = 0; jj < cols; ++jj, ++k) {
                const json& pair = entries[static_cast<std::size_t>(k)];
                m(i, jj) = Complex(pair.at(0).get<double>(), pair.at(1).get<double>());
            }
        }
        require_finite(m, "matrix_from_json");
        return m;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("matrix block: ") + e.what());
    }
}

void save_model(const KoopmanModel& model, const std::filesystem::path& path) {
    json j;
    j["format"] = "koop-model-v1";
    j["dictionary"] = dictionary_to_json(model.dictionary);
    j["lambda"] = model.lambda;
    j["solver_mode"] = to_string(model.solver_mode);
    j["training_pairs"] = model.training_pairs;
    j["enrichment"] = model.provenance.has_value() ? enrichment_to_json(*model.provenance)
                                                   : json("none");
    j["report"] = json{{"objective_value", model.report.objective_value},
                       {"iterations", model.report.iterations},
                       {"converged", model.report.converged},
                       {"mode", to_string(model.report.mode)},
                       {"pseudoinverse_fallback", model.report.pseudoinverse_fallback}};
    j["K"] = matrix_to_json(model.K);
    j["C"] = model.C.has_value() ? matrix_to_json(*model.C) : json(nullptr);

    std::ofstream out = open_for_write(path);
    out << dump_json(j);
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

KoopmanModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    try {
        if (j.at("format").get<std::string>() != "koop-model-v1")
            throw ConfigError(path.string() + ": unknown model format");

        KoopmanModel model;
        model.K = matrix_from_json(j.at("K"));
        model.dictionary = dictionary_from_json(j.at("dictionary"));
        model.lambda = j.at("lambda").get<double>();
        model.solver_mode = solver_mode_from_string(j.at("solver_mode").get<std::string>());
        model.training_pairs = j.at("training_pairs").get<long>();
        const json& report = j.at("report");
        model.report.objective_value = report.at("objective_value").get<double>();
        model.report.iterations = report.at("iterations").get<int>();
        model.report.converged = report.at("converged").get<bool>();
        model.report.mode = solver_mode_from_string(report.at("mode").get<std::string>());
        model.report.pseudoinverse_fallback = report.at("pseudoinverse_fallback").get<bool>();

        if (!j.at("C").is_null()) model.C = matrix_from_json(j.at("C"));
        if (!j.at("enrichment").is_string())
            model.provenance = enrichment_from_json(j.at("enrichment"));

        if (model.K.rows() != model.dictionary.feature_dim() ||
            model.K.cols() != model.dictionary.feature_dim())
            throw ConfigError(path.string() + ": K dimension does not match the dictionary");
        if (model.C.has_value() && (model.C->rows() != model.dictionary.state_dim() ||
                                    model.C->cols() != model.dictionary.feature_dim()))
            throw ConfigError(path.string() + ": C dimension does not match the dictionary");
        return model;
    } catch (const json::exception& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

}  // namespace koop
