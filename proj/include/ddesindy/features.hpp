#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ddesindy/types.hpp"

namespace ddesindy {

enum class RationalSelector { all_delayed, last_block, explicit_blocks };

struct RationalTerm {
    double alpha = 9.6;  // positive exponent of the hill term u/(1+u^alpha)
    RationalSelector selector = RationalSelector::last_block;
    std::vector<int> blocks;  // used by explicit_blocks
};

enum class CrossBlockPolicy { full, restricted };

struct LibrarySpec {
    int degree = 2;
    bool include_constant = true;
    std::optional<RationalTerm> rational;
    CrossBlockPolicy policy = CrossBlockPolicy::full;
};

struct FeatureMatrix {
    Mat theta;
    std::vector<std::string> descriptors;
    std::vector<std::vector<int>> exponents;           // polynomial columns only
    std::vector<std::pair<int, double>> rational_vars;  // (flat variable, alpha)
    int n_channels = 0;
    int n_blocks = 0;
};

// Compiled column enumeration shared by matrix assembly and pointwise
// evaluation, so reconstructed right-hand sides reproduce the fitted
// columns bit-exactly.
class LibraryPlan {
public:
    LibraryPlan(const LibrarySpec& spec, int n_channels, int n_blocks);

    Index columns() const { return static_cast<Index>(exponents_.size() + rationals_.size()); }
    int variables() const { return n_ * blocks_; }
    int channels() const { return n_; }
    int blocks() const { return blocks_; }

    // vars is block-major: current state first, then each delayed block.
    void eval(const double* vars, double* out) const;
    Vec eval(const std::vector<Vec>& state_blocks) const;

    const std::vector<std::vector<int>>& exponents() const { return exponents_; }
    const std::vector<std::pair<int, double>>& rationals() const { return rationals_; }
    std::vector<std::string> descriptors(const std::vector<std::string>& block_suffixes) const;

private:
    struct Factor {
        int var;
        int power;
    };
    int n_;
    int blocks_;
    std::vector<std::vector<int>> exponents_;
    std::vector<std::vector<Factor>> factors_;
    std::vector<std::pair<int, double>> rationals_;
};

// Variable labels in plan order ("x2(t-tau1)" style); suffixes indexed by
// block, empty string for the current state.
std::vector<std::string> variable_names(int n_channels,
                                        const std::vector<std::string>& block_suffixes);

FeatureMatrix build_library(const std::vector<Mat>& blocks, const LibrarySpec& spec,
                            const std::vector<std::string>& block_suffixes = {});

Vec evaluate_row(const LibrarySpec& spec, const std::vector<Vec>& state_blocks);

struct ParsedDescriptor {
    bool is_rational = false;
    int rational_var = -1;
    double alpha = 0.0;
    std::vector<int> exponents;
};

// Inverse of the descriptor formatting, for the round-trip property.
ParsedDescriptor parse_descriptor(const std::string& descriptor,
                                  const std::vector<std::string>& names);

}  // namespace ddesindy
