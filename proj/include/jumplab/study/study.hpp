#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "jumplab/core/inverse_gaussian.hpp"
#include "jumplab/core/parallel.hpp"
#include "jumplab/core/rng.hpp"
#include "jumplab/seqtest/detect.hpp"

namespace jumplab {

/// One class of simulated processes: additive daily dynamics
///   dP = drift + diffusion * N(0,1) - (compound Poisson jump sum),
/// where the jump measure is the base density tilted by (1 + tilt * x).
/// The base density carries unit mass (one expected jump per period); tilting
/// raises the arrival rate to 1 + tilt * m1 and size-biases the marks.
struct StudySpec {
    double drift = 1.0;
    double diffusion = 0.5;
    InverseGaussianParams jump_params{1.0, 1.0};
    double tilt = 0.0;
    std::size_t n_processes = 100;
    std::size_t n_periods_each = 30;
    double start_value = 100.0;

    void validate() const {
        if (n_processes == 0 || n_periods_each == 0)
            throw std::invalid_argument("StudySpec: counts must be >= 1");
        if (!(diffusion > 0.0)) throw std::invalid_argument("StudySpec: diffusion must be > 0");
        if (tilt < 0.0) throw std::invalid_argument("StudySpec: tilt must be >= 0");
        jump_params.validate();
    }
};

/// One day's jump drain under the (possibly tilted) measure.
inline double draw_day_jumps(const StudySpec& spec, Rng& rng) {
    const double m1 = spec.jump_params.first_moment();
    const double rate = 1.0 + spec.tilt * m1;
    const std::uint64_t n_jumps = rng.poisson(rate);
    double total = 0.0;
    for (std::uint64_t j = 0; j < n_jumps; ++j) {
        // Normalized tilted density (1 + tilt x) nu / (1 + tilt m1): a mixture
        // of the base density and its size-biased companion.
        if (rng.uniform01() * rate < 1.0)
            total += ig_draw(spec.jump_params, rng);
        else
            total += ig_draw_size_biased(spec.jump_params, rng);
    }
    return total;
}

/// Price paths for one study class; path i has n_periods_each + 1 values
/// (the start value plus one jump-diffusion increment per period) and its own
/// derived seed, so any subset of processes reproduces independently.
inline std::vector<std::vector<double>> generate_class(const StudySpec& spec, Seed seed) {
    spec.validate();
    Rng master(seed);
    std::vector<std::vector<double>> paths(spec.n_processes);
    for (std::size_t i = 0; i < spec.n_processes; ++i) {
        Rng rng = master.derive(i);
        auto& path = paths[i];
        path.reserve(spec.n_periods_each + 1);
        path.push_back(spec.start_value);
        for (std::size_t d = 0; d < spec.n_periods_each; ++d) {
            const double incr = spec.drift + spec.diffusion * rng.normal() -
                                draw_day_jumps(spec, rng);
            path.push_back(path.back() + incr);
        }
    }
    return paths;
}

/// Per-class scores for the detector and the naive baseline.
struct ClassScore {
    std::string class_name;
    std::size_t detector_correct = 0;
    std::size_t naive_correct = 0;
    std::size_t total = 0;
};

struct StudyResult {
    std::uint64_t seed = 0;
    std::vector<ClassScore> scores;
    InverseGaussianParams fitted_nu;
};

/// Runs the four-class study for one master seed: generates the 500-period
/// training series, fits the base density to its negative percent jumps, then
/// scores the detector and the naive mean-comparison baseline on 100
/// processes per test class (control / obvious-large / subtle-large).
///
/// Stream layout under the master seed: stream 0 is training; class k uses
/// streams (k+1)*10^6 + i for process i, and detector sub-seeds derive from
/// the process stream, so every label is reproducible in isolation.
inline StudyResult run_study(Seed master_seed, const DetectorConfig& cfg = {},
                             std::size_t n_processes = 100) {
    Rng master(master_seed);

    StudySpec training;
    training.n_processes = 1;
    training.n_periods_each = 500;
    const auto training_path = generate_class(training, Seed{master.derive(0).next_u64()});

    const std::vector<double> train_pct = percent_changes(training_path[0]);
    std::vector<double> train_neg;
    for (double c : train_pct)
        if (c < 0.0) train_neg.push_back(-c);
    if (train_neg.size() < 2)
        throw std::runtime_error("run_study: training series produced no negative jumps");
    const InverseGaussianParams fitted = ig_fit(train_neg);

    struct ClassDef {
        const char* name;
        double drift;
        double tilt;
        int want;
    };
    const ClassDef classes[] = {
        {"control", 1.0, 0.0, 0},
        {"obvious_large", 1.0, 1.0, 1},
        {"subtle_large", 3.0, 1.0, 1},
    };

    StudyResult result;
    result.seed = master_seed.value;
    result.fitted_nu = fitted;

    for (std::size_t k = 0; k < 3; ++k) {
        StudySpec spec;
        spec.drift = classes[k].drift;
        spec.tilt = classes[k].tilt;
        spec.n_processes = n_processes;
        spec.n_periods_each = 30;

        ClassScore score;
        score.class_name = classes[k].name;
        score.total = n_processes;

        std::vector<unsigned char> det_ok(n_processes, 0), naive_ok(n_processes, 0);
        parallel_for(n_processes, [&](std::size_t i) {
            const std::uint64_t stream = (k + 1) * 1000000ull + i;
            StudySpec one = spec;
            one.n_processes = 1;
            Rng proc_rng = master.derive(stream);
            const auto path = generate_class(one, Seed{proc_rng.next_u64()});

            const Seed detect_seed{proc_rng.derive(1).next_u64()};
            const DetectionRecord rec = detect(path[0], fitted, cfg, detect_seed,
                                               static_cast<std::ptrdiff_t>(i));
            det_ok[i] = rec.label == classes[k].want;

            const std::vector<double> pct = percent_changes(path[0]);
            std::vector<double> neg;
            for (double c : pct)
                if (c < 0.0) neg.push_back(-c);
            const int naive =
                neg.empty() ? 0 : naive_classify(neg, train_neg);
            naive_ok[i] = naive == classes[k].want;
        });
        for (std::size_t i = 0; i < n_processes; ++i) {
            score.detector_correct += det_ok[i];
            score.naive_correct += naive_ok[i];
        }
        result.scores.push_back(score);
    }
    return result;
}

}  // namespace jumplab
