#pragma once

#include <map>
#include <string>
#include <vector>

#include "ddesindy/integrate.hpp"
#include "ddesindy/types.hpp"

namespace ddesindy {

struct ModelSpec {
    std::string name;
    int n = 1;
    std::map<std::string, double> params;
    std::vector<double> delays;  // reference values, ascending
    DdeRhs rhs;
    History phi;
    double default_horizon = 30.0;
    int default_samples = 100;
};

// The four benchmark systems with their reference parameters.
std::vector<ModelSpec> builtin_models();
const ModelSpec& find_model(const std::string& name);

}  // namespace ddesindy
