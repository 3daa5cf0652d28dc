#include <ostream>

#include "gpucb/experiment.hpp"
#include "gpucb/format.hpp"

namespace gpucb {

GammaReport gamma_report(const ExperimentConfig& config) {
    GammaReport report;
    report.pool = make_pool(config);
    report.noise_variance = config.model_noise_variance;
    const GramMatrix g = gram(config.kernel, report.pool);
    const std::size_t steps = std::min(config.horizon, report.pool.size());
    report.greedy = greedy_gamma(g, steps, report.noise_variance);
    if (report.pool.size() <= 12 && steps <= 4) { report.optimum = optimal_gamma(g, steps, report.noise_variance); }
    return report;
}

void write_gamma_csv(std::ostream& out, const GammaReport& report) {
    const std::size_t d = report.pool.front().dimension();
    out << "step,index";
    for (std::size_t i = 0; i < d; ++i) { out << ",x" << (i + 1); }
    out << ",gain_step,gain_cum\n";
    double cumulative = 0.0;
    for (std::size_t s = 0; s < report.greedy.indices.size(); ++s) {
        const std::size_t idx = report.greedy.indices[s];
        cumulative += report.greedy.step_gains[s];
        out << (s + 1) << ',' << idx;
        for (double c : report.pool[idx].coords()) { out << ',' << format_double(c); }
        out << ',' << format_double(report.greedy.step_gains[s]) << ',' << format_double(cumulative) << '\n';
    }
    out << "\nestimate,steps,gain,noise_variance\n";
    out << "greedy," << report.greedy.indices.size() << ',' << format_double(report.greedy.gain) << ','
        << format_double(report.noise_variance) << '\n';
    if (report.optimum) {
        out << "exhaustive," << report.optimum->indices.size() << ',' << format_double(report.optimum->gain) << ','
            << format_double(report.noise_variance) << '\n';
    }
}

void write_spectrum_csv(std::ostream& out, const Spectrum& spectrum) {
    out << "size,trace,effective_rank,decay_exponent\n";
    out << spectrum.eigenvalues.size() << ',' << format_double(spectrum.trace) << ',' << spectrum.effective_rank << ','
        << (spectrum.decay_exponent ? format_double(*spectrum.decay_exponent) : std::string()) << "\n\n";
    out << "index,eigenvalue\n";
    for (std::size_t i = 0; i < spectrum.eigenvalues.size(); ++i) {
        out << i << ',' << format_double(spectrum.eigenvalues[i]) << '\n';
    }
}

}  // namespace gpucb
