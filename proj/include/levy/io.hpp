#pragma once

#include <string>

#include <json.hpp>

#include "levy/error.hpp"
#include "levy/skewed.hpp"
#include "levy/stable.hpp"
#include "levy/subordinator.hpp"
#include "levy/symmetric.hpp"
#include "levy/transforms.hpp"

namespace levy {

/// Increment CSV: '#' comment lines `# h=<step>`, `# n=<count>`,
/// `# model=<name>`, then one value per line at 17 significant digits.
std::string format_increments(const IncrementSample& sample);
IncrementSample parse_increments(const std::string& text);
void write_increments(const IncrementSample& sample, const std::string& path);
IncrementSample read_increments(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

/// EstimateReport JSON. Non-finite numbers become null.
nlohmann::json to_json(const SymmetricEstimate& est);
nlohmann::json to_json(const SkewedEstimate& est);
nlohmann::json to_json(const SubordinatorEstimate& est, const std::string& method, std::size_t n, double h);
nlohmann::json to_json(const PipelineResult& res);
nlohmann::json to_json(const Error& err);

nlohmann::json json_number(double v);
nlohmann::json json_matrix(const double* m, std::size_t rows, std::size_t cols);

}  // namespace levy
