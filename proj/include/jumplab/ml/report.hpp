#pragma once

#include <array>
#include <cstddef>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>

namespace jumplab {

/// Per-class precision/recall/F1/support plus the underlying confusion
/// counts. confusion[a][p] counts rows with actual class a predicted as p.
struct ClassificationReport {
    std::array<double, 2> precision{0.0, 0.0};
    std::array<double, 2> recall{0.0, 0.0};
    std::array<double, 2> f1{0.0, 0.0};
    std::array<std::size_t, 2> support{0, 0};
    std::array<std::array<std::size_t, 2>, 2> confusion{{{0, 0}, {0, 0}}};

    double accuracy() const {
        const std::size_t total = support[0] + support[1];
        if (total == 0) return 0.0;
        return static_cast<double>(confusion[0][0] + confusion[1][1]) /
               static_cast<double>(total);
    }
};

/// Builds the report from a filled confusion matrix; all metrics follow
/// exactly from the four counts, with 0 substituted where a denominator
/// vanishes.
inline ClassificationReport report_from_confusion(
    const std::array<std::array<std::size_t, 2>, 2>& confusion) {
    ClassificationReport rep;
    rep.confusion = confusion;
    for (int c = 0; c < 2; ++c) {
        const double tp = static_cast<double>(confusion[c][c]);
        const double predicted =
            static_cast<double>(confusion[0][c] + confusion[1][c]);
        const double actual = static_cast<double>(confusion[c][0] + confusion[c][1]);
        rep.support[c] = confusion[c][0] + confusion[c][1];
        rep.precision[c] = predicted > 0.0 ? tp / predicted : 0.0;
        rep.recall[c] = actual > 0.0 ? tp / actual : 0.0;
        const double denom = rep.precision[c] + rep.recall[c];
        rep.f1[c] = denom > 0.0 ? 2.0 * rep.precision[c] * rep.recall[c] / denom : 0.0;
    }
    return rep;
}

/// Aligned-text rendering of one report, one metric row per class.
inline std::string report_to_text(const ClassificationReport& rep,
                                  const std::string& heading = "") {
    std::ostringstream os;
    if (!heading.empty()) os << heading << "\n";
    os << "         precision    recall  f1-score   support\n";
    for (int c = 0; c < 2; ++c) {
        os << "theta=" << c << "   " << std::fixed << std::setprecision(4)
           << std::setw(9) << rep.precision[c] << std::setw(10) << rep.recall[c]
           << std::setw(10) << rep.f1[c] << std::setw(10) << rep.support[c] << "\n";
    }
    os << "accuracy " << std::fixed << std::setprecision(4) << rep.accuracy()
       << "  (" << rep.support[0] + rep.support[1] << " rows)\n";
    return os.str();
}

/// Maps a class-1 probability to the deterministic-component estimate: hard
/// mode rounds (ties go to 1), soft mode passes the probability through.
enum class ThetaMode { hard, soft };

inline double estimate_theta(double proba, ThetaMode mode) {
    if (!(proba >= 0.0 && proba <= 1.0))
        throw std::invalid_argument("estimate_theta: probability outside [0,1]");
    return mode == ThetaMode::hard ? (proba >= 0.5 ? 1.0 : 0.0) : proba;
}

}  // namespace jumplab
