#pragma once

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "jumplab/ml/report.hpp"
#include "jumplab/pipeline/frames.hpp"
#include "jumplab/seqtest/detect.hpp"
#include "jumplab/study/study.hpp"

namespace jumplab {

/// Flat key=value view of the effective configuration; every artifact embeds
/// it so a run is reproducible from the artifact alone.
using ConfigEcho = std::vector<std::pair<std::string, std::string>>;

inline nlohmann::json config_to_json(const ConfigEcho& echo) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [k, v] : echo) j[k] = v;
    return j;
}

/// CSV artifacts carry the configuration as leading '#' comment lines, which
/// the ingest path skips.
inline void write_config_comments(std::ostream& os, const ConfigEcho& echo) {
    for (const auto& [k, v] : echo) os << "# " << k << "=" << v << "\n";
}

inline nlohmann::json to_json(const DetectionRecord& rec) {
    nlohmann::json j;
    j["period_start_index"] = rec.period_start_index;
    j["a_hat"] = rec.a_hat;
    j["sigma"] = rec.sigma;
    if (rec.coeffs) {
        j["beta"] = rec.coeffs->beta;
        j["gamma"] = rec.coeffs->gamma;
        j["C"] = rec.coeffs->C;
        j["M"] = rec.coeffs->M;
        j["B"] = rec.coeffs->B;
    } else {
        j["beta"] = nullptr;
        j["gamma"] = nullptr;
        j["C"] = nullptr;
        j["M"] = nullptr;
        j["B"] = nullptr;
    }
    if (rec.boundary) {
        j["r_f"] = rec.boundary->r_f;
        j["r_g"] = rec.boundary->r_g;
        j["r"] = rec.boundary->r;
    } else {
        j["r_f"] = nullptr;
        j["r_g"] = nullptr;
        j["r"] = nullptr;
    }
    j["right_exits"] = rec.right_exits;
    j["left_exits"] = rec.left_exits;
    j["no_exits"] = rec.no_exits;
    j["label"] = rec.label;
    return j;
}

inline nlohmann::json to_json(const StudyResult& result) {
    nlohmann::json rows = nlohmann::json::array();
    for (const ClassScore& s : result.scores) {
        rows.push_back({{"class", s.class_name},
                        {"method", "detector"},
                        {"correct", s.detector_correct},
                        {"total", s.total},
                        {"seed", result.seed}});
        rows.push_back({{"class", s.class_name},
                        {"method", "naive"},
                        {"correct", s.naive_correct},
                        {"total", s.total},
                        {"seed", result.seed}});
    }
    return rows;
}

inline nlohmann::json to_json(const ClassificationReport& rep) {
    nlohmann::json j;
    for (int c = 0; c < 2; ++c) {
        const std::string key = "theta=" + std::to_string(c);
        j[key] = {{"precision", rep.precision[c]},
                  {"recall", rep.recall[c]},
                  {"f1", rep.f1[c]},
                  {"support", rep.support[c]}};
    }
    j["confusion_matrix"] = {{rep.confusion[0][0], rep.confusion[0][1]},
                             {rep.confusion[1][0], rep.confusion[1][1]}};
    j["accuracy"] = rep.accuracy();
    return j;
}

/// Price path as CSV: one row per period, the start value lives in the
/// config comments. Period labels are zero-padded so lexicographic date
/// sorting preserves time order on re-ingest.
inline void write_path_csv(std::ostream& os, const std::vector<double>& prices,
                           const ConfigEcho& echo) {
    write_config_comments(os, echo);
    os << "period,close\n";
    os << std::setprecision(17);
    for (std::size_t i = 1; i < prices.size(); ++i) {
        std::ostringstream label;
        label << std::setw(6) << std::setfill('0') << i;
        os << label.str() << "," << prices[i] << "\n";
    }
}

inline void write_frame_csv(std::ostream& os, const WindowFrame& frame,
                            const ConfigEcho& echo) {
    write_config_comments(os, echo);
    for (std::size_t j = 0; j < frame.n; ++j) os << "f" << j << ",";
    os << "target,start_index\n";
    os << std::setprecision(17);
    for (const FrameRow& row : frame.rows) {
        for (double f : row.features) os << f << ",";
        os << row.target << "," << row.start_index << "\n";
    }
}

/// Two-column histogram CSV (bin, count), bins 0..n_bins inclusive.
inline void write_histogram_csv(std::ostream& os, const std::vector<std::size_t>& counts,
                                const ConfigEcho& echo) {
    write_config_comments(os, echo);
    os << "bin,count\n";
    for (std::size_t b = 0; b < counts.size(); ++b)
        os << b << "," << counts[b] << "\n";
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
    os << content;
}

}  // namespace jumplab
