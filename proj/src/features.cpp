#include "ddesindy/features.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace ddesindy {

namespace {

void validate(const LibrarySpec& spec) {
    if (spec.degree < 0) throw ConfigError("library degree must be nonnegative");
    if (spec.rational && spec.rational->alpha <= 0)
        throw ConfigError("rational exponent must be positive");
}

// Delayed blocks whose variables carry a nonzero exponent; the current-state
// block never counts against the restricted policy.
int delayed_blocks_used(const std::vector<int>& exps, int n) {
    int used = 0, last = -1;
    for (std::size_t j = 0; j < exps.size(); ++j) {
        int b = static_cast<int>(j) / n;
        if (exps[j] > 0 && b > 0 && b != last) {
            ++used;
            last = b;
        }
    }
    return used;
}

std::string format_alpha(double alpha) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", alpha);
    return buf;
}

}  // namespace

LibraryPlan::LibraryPlan(const LibrarySpec& spec, int n_channels, int n_blocks)
    : n_(n_channels), blocks_(n_blocks) {
    validate(spec);
    if (n_channels < 1 || n_blocks < 1) throw ConfigError("library needs at least one block");
    const int v = n_ * blocks_;

    std::vector<int> cur(v, 0);
    // Graded order; within a degree, earlier variables take higher powers first.
    auto emit = [&](const std::vector<int>& e) {
        if (spec.policy == CrossBlockPolicy::restricted && delayed_blocks_used(e, n_) > 1)
            return;
        exponents_.push_back(e);
        std::vector<Factor> f;
        for (int j = 0; j < v; ++j)
            if (e[j] > 0) f.push_back({j, e[j]});
        factors_.push_back(std::move(f));
    };
    auto rec = [&](auto&& self, int var, int remaining) -> void {
        if (var == v - 1) {
            cur[var] = remaining;
            emit(cur);
            cur[var] = 0;
            return;
        }
        for (int e = remaining; e >= 0; --e) {
            cur[var] = e;
            self(self, var + 1, remaining - e);
        }
        cur[var] = 0;
    };
    for (int g = spec.include_constant ? 0 : 1; g <= spec.degree; ++g) rec(rec, 0, g);

    if (spec.rational) {
        std::vector<int> selected;
        switch (spec.rational->selector) {
            case RationalSelector::all_delayed:
                for (int b = 1; b < blocks_; ++b) selected.push_back(b);
                break;
            case RationalSelector::last_block:
                selected.push_back(blocks_ - 1);
                break;
            case RationalSelector::explicit_blocks:
                selected = spec.rational->blocks;
                break;
        }
        for (int b : selected) {
            if (b < 0 || b >= blocks_) throw ConfigError("rational block index out of range");
            for (int c = 0; c < n_; ++c)
                rationals_.emplace_back(b * n_ + c, spec.rational->alpha);
        }
    }
}

void LibraryPlan::eval(const double* vars, double* out) const {
    Index k = 0;
    for (const auto& fac : factors_) {
        double acc = 1.0;
        for (const Factor& f : fac) {
            double x = vars[f.var];
            for (int p = 0; p < f.power; ++p) acc *= x;
        }
        out[k++] = acc;
    }
    for (const auto& [var, alpha] : rationals_) {
        double u = vars[var];
        out[k++] = u / (1.0 + std::pow(u, alpha));
    }
}

Vec LibraryPlan::eval(const std::vector<Vec>& state_blocks) const {
    if (static_cast<int>(state_blocks.size()) != blocks_)
        throw std::invalid_argument("block count does not match the library plan");
    std::vector<double> vars(static_cast<std::size_t>(variables()));
    for (int b = 0; b < blocks_; ++b) {
        if (state_blocks[b].size() != n_)
            throw std::invalid_argument("block dimension does not match the library plan");
        for (int c = 0; c < n_; ++c) vars[static_cast<std::size_t>(b * n_ + c)] = state_blocks[b][c];
    }
    Vec out(columns());
    eval(vars.data(), out.data());
    return out;
}

std::vector<std::string> variable_names(int n_channels,
                                        const std::vector<std::string>& block_suffixes) {
    std::vector<std::string> names;
    for (std::size_t b = 0; b < block_suffixes.size(); ++b)
        for (int c = 0; c < n_channels; ++c) {
            std::string base = n_channels == 1 ? "x" : "x" + std::to_string(c + 1);
            names.push_back(base + block_suffixes[b]);
        }
    return names;
}

std::vector<std::string> LibraryPlan::descriptors(
    const std::vector<std::string>& block_suffixes) const {
    std::vector<std::string> suffixes = block_suffixes;
    if (suffixes.empty()) {
        suffixes.emplace_back("");
        for (int b = 1; b < blocks_; ++b) suffixes.push_back("(t-tau" + std::to_string(b) + ")");
    }
    if (static_cast<int>(suffixes.size()) != blocks_)
        throw std::invalid_argument("one suffix per block required");
    const auto names = variable_names(n_, suffixes);

    std::vector<std::string> out;
    for (const auto& e : exponents_) {
        std::string s;
        for (std::size_t j = 0; j < e.size(); ++j) {
            if (e[j] == 0) continue;
            if (!s.empty()) s += "*";
            s += names[j];
            if (e[j] > 1) s += "^" + std::to_string(e[j]);
        }
        out.push_back(s.empty() ? "1" : s);
    }
    for (const auto& [var, alpha] : rationals_)
        out.push_back(names[var] + "/(1+" + names[var] + "^" + format_alpha(alpha) + ")");
    return out;
}

FeatureMatrix build_library(const std::vector<Mat>& blocks, const LibrarySpec& spec,
                            const std::vector<std::string>& block_suffixes) {
    if (blocks.empty()) throw std::invalid_argument("at least one block required");
    const Index m = blocks[0].rows();
    const Index n = blocks[0].cols();
    for (const Mat& b : blocks)
        if (b.rows() != m || b.cols() != n)
            throw std::invalid_argument("blocks must share their shape");
    if (m == 0) throw InsufficientDataError("no rows to build the library from");

    LibraryPlan plan(spec, static_cast<int>(n), static_cast<int>(blocks.size()));
    FeatureMatrix f;
    f.theta.resize(m, plan.columns());
    std::vector<double> vars(static_cast<std::size_t>(plan.variables()));
    Vec row(plan.columns());
    for (Index i = 0; i < m; ++i) {
        for (std::size_t b = 0; b < blocks.size(); ++b)
            for (Index c = 0; c < n; ++c)
                vars[b * static_cast<std::size_t>(n) + static_cast<std::size_t>(c)] =
                    blocks[b](i, c);
        plan.eval(vars.data(), row.data());
        f.theta.row(i) = row.transpose();
    }
    f.descriptors = plan.descriptors(block_suffixes);
    f.exponents = plan.exponents();
    f.rational_vars = plan.rationals();
    f.n_channels = static_cast<int>(n);
    f.n_blocks = static_cast<int>(blocks.size());
    return f;
}

Vec evaluate_row(const LibrarySpec& spec, const std::vector<Vec>& state_blocks) {
    if (state_blocks.empty()) throw std::invalid_argument("at least one block required");
    LibraryPlan plan(spec, static_cast<int>(state_blocks[0].size()),
                     static_cast<int>(state_blocks.size()));
    return plan.eval(state_blocks);
}

ParsedDescriptor parse_descriptor(const std::string& descriptor,
                                  const std::vector<std::string>& names) {
    ParsedDescriptor p;
    p.exponents.assign(names.size(), 0);
    if (descriptor == "1") return p;

    auto match_name = [&](const std::string& token) -> int {
        // Longest match wins: "x1" must not swallow "x1(t-tau1)".
        int best = -1;
        std::size_t best_len = 0;
        for (std::size_t j = 0; j < names.size(); ++j)
            if (token.rfind(names[j], 0) == 0 && names[j].size() > best_len) {
                best = static_cast<int>(j);
                best_len = names[j].size();
            }
        return best;
    };

    auto slash = descriptor.find("/(1+");
    if (slash != std::string::npos) {
        p.is_rational = true;
        std::string head = descriptor.substr(0, slash);
        int var = match_name(head);
        if (var < 0 || names[static_cast<std::size_t>(var)] != head)
            throw std::invalid_argument("unparseable rational descriptor: " + descriptor);
        p.rational_var = var;
        auto caret = descriptor.rfind('^');
        auto close = descriptor.rfind(')');
        if (caret == std::string::npos || close == std::string::npos || close < caret)
            throw std::invalid_argument("unparseable rational descriptor: " + descriptor);
        p.alpha = std::stod(descriptor.substr(caret + 1, close - caret - 1));
        return p;
    }

    std::size_t pos = 0;
    while (pos < descriptor.size()) {
        auto star = descriptor.find('*', pos);
        std::string token = descriptor.substr(pos, star == std::string::npos ? star : star - pos);
        int var = match_name(token);
        if (var < 0) throw std::invalid_argument("unknown variable in descriptor: " + token);
        std::size_t tail = names[static_cast<std::size_t>(var)].size();
        int power = 1;
        if (tail < token.size()) {
            if (token[tail] != '^')
                throw std::invalid_argument("unparseable descriptor token: " + token);
            power = std::stoi(token.substr(tail + 1));
        }
        p.exponents[static_cast<std::size_t>(var)] += power;
        if (star == std::string::npos) break;
        pos = star + 1;
    }
    return p;
}

}  // namespace ddesindy
