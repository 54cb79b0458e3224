#pragma once

#include <random>
#include <string>
#include <vector>

#include "config.hpp"
#include "report.hpp"

namespace bosonic::cli {

const std::vector<std::string>& suite_names();
bool is_suite(const std::string& name);

// Runs one verification suite; tolerances are multiplied by tolerance_scale.
std::vector<CheckRow> run_suite(const std::string& name, const ProblemConfig& config, double tolerance_scale);

// Helpers shared with the tests.
Vec random_unit(std::mt19937_64& gen, int m);
// Composition of 1..4 random primitive Moebius factors.
MoebiusTransform random_moebius(std::mt19937_64& gen, int m);

}  // namespace bosonic::cli
