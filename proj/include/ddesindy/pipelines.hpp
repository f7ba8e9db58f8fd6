#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ddesindy/collocation.hpp"
#include "ddesindy/data.hpp"
#include "ddesindy/features.hpp"
#include "ddesindy/regression.hpp"
#include "ddesindy/types.hpp"

namespace ddesindy {

inline constexpr double kBlowupSentinel = 1e10;

struct ErrorWeights {
    double w1 = 1.0;
    double w2 = 1.0;
};

struct HistoryProvider {
    History fn;

    static HistoryProvider from_function(History h) { return {std::move(h)}; }
    // Blind mode: constant extension of the earliest sample.
    static HistoryProvider constant(const Vec& value) {
        Vec v = value;
        return {[v](double) { return v; }};
    }
};

enum class BlockSource { interp, dense };

// Where delayed/collocated samples come from: linear interpolation of the
// measurements, or the generating dense trajectory (benchmark mode).
struct BlockProvider {
    BlockSource mode = BlockSource::interp;
    const DenseSolution* dense = nullptr;
    History phi;  // pre-start values for the dense source
};

struct SimOptions {
    double rel_tol = 1e-6;
    double abs_tol = 1e-8;
    std::int64_t max_steps = 50000;
    double diverge_bound = 1e8;
};

enum class Method { esindy, psindy };

struct FitResult {
    Method method = Method::esindy;
    SparseCoefficients coefficients;
    LibrarySpec library;
    std::vector<double> delays;  // E-SINDy candidate delays
    double tau_bar = 0.0;        // P-SINDy
    int M = 0;                   // P-SINDy
    int n = 0;
    ErrorWeights weights{1.0, 0.0};
    double objective = 0.0;
    double residual_term = 0.0;
    double sim_term = 0.0;
    bool blowup = false;
    std::vector<Index> rows;  // retained training rows
    Vec row_times;
    Mat fit_trajectory;  // reconstructed states at row_times (objective runs)
};

FitResult esindy_fit(const SampleSet& samples, const std::vector<double>& delays,
                     const LibrarySpec& spec, const StlsqConfig& stlsq_config,
                     const BlockProvider& blocks = {});

FitResult esindy_objective(const SampleSet& samples, const std::vector<double>& delays,
                           const LibrarySpec& spec, const StlsqConfig& stlsq_config,
                           const ErrorWeights& weights, const HistoryProvider& history,
                           const BlockProvider& blocks = {}, const SimOptions& sim = {});

FitResult psindy_fit(const SampleSet& samples, double tau_bar, int M, const LibrarySpec& spec,
                     const StlsqConfig& stlsq_config, const BlockProvider& blocks = {});

FitResult psindy_objective(const SampleSet& samples, double tau_bar, int M,
                           const LibrarySpec& spec, const StlsqConfig& stlsq_config,
                           const ErrorWeights& weights, const HistoryProvider& history,
                           const BlockProvider& blocks = {}, const SimOptions& sim = {});

struct ValidationReport {
    double train_sup = 0.0;
    double train_frobenius = 0.0;
    double validation_sup = 0.0;
    double validation_frobenius = 0.0;
    Vec times;
    Mat trajectory;  // reconstructed states at all sample times
    bool blowup = false;
};

ValidationReport validate(const FitResult& fit, const SampleSet& samples,
                          const HistoryProvider& history, const SimOptions& sim = {});

// Reconstructed dynamics, for diagnostics and simulation reuse.
DdeRhs reconstructed_dde_rhs(const FitResult& fit);
OdeRhs reconstructed_field(const FitResult& fit);

// Eq.-(6) initial condition: block i frozen at history(eta_i).
Vec collocated_initial_state(const CollocationScheme& scheme, const History& history);

std::vector<std::string> esindy_suffixes(std::size_t delay_count);
std::vector<std::string> psindy_suffixes(int M);

// Global SINDy-call counter: one tick per objective evaluation.
std::int64_t sindy_calls();
void reset_sindy_calls();

}  // namespace ddesindy
