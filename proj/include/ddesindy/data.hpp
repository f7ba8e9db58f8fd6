#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ddesindy/integrate.hpp"
#include "ddesindy/models.hpp"
#include "ddesindy/types.hpp"

namespace ddesindy {

enum class DerivativeMode { exact_from_model, finite_difference };
enum class SampleDistribution { uniform, random_uniform };

struct SamplingConfig {
    int m = 100;
    SampleDistribution distribution = SampleDistribution::uniform;
    double noise_sigma = 0.0;  // relative, scaled by per-channel sample std
    std::uint64_t seed = 0;
    DerivativeMode derivative_mode = DerivativeMode::exact_from_model;
    double rel_tol = 1e-6;
    double abs_tol = 1e-8;
};

struct SampleSet {
    Vec times;  // strictly ascending
    Mat X;      // m x n states
    Mat dX;     // m x n derivatives
    DerivativeMode derivative_provenance = DerivativeMode::exact_from_model;
    Index boundary = 0;  // training rows are [0, boundary)

    Index rows() const { return times.size(); }
    Index dim() const { return X.cols(); }
};

struct GeneratedData {
    SampleSet samples;
    DenseSolution dense;  // the generating trajectory, for dense block sourcing
};

GeneratedData generate_samples(const ModelSpec& model, const SamplingConfig& config,
                               double horizon);

// Second-order finite differences on a possibly nonuniform grid; one-sided
// second-order stencils at both ends.
Mat estimate_derivatives(const Vec& times, const Mat& X);

Vec interp_linear(const Vec& times, const Mat& X, double query_time);

struct DelayedBlocks {
    std::vector<Index> rows;  // retained sample indices
    std::vector<Mat> blocks;  // one m' x n matrix per offset
};

// Linear-interpolation block source per the sampling contract: rows needing
// pre-sample history are dropped.
DelayedBlocks delayed_blocks(const SampleSet& samples, const std::vector<double>& offsets);

// Dense block source: same row filter, but entries are read from the
// generating trajectory (history function for queries before its start).
// Benchmark reproduction uses this; sample interpolation at these step sizes
// is orders of magnitude coarser than every objective floor of interest.
DelayedBlocks delayed_blocks_dense(const Vec& times, const std::vector<double>& offsets,
                                   const DenseSolution& dense, const History& phi);

void write_csv(const SampleSet& samples, std::ostream& out);
SampleSet read_csv(std::istream& in);

}  // namespace ddesindy
