#include "levy/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace levy {

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::IoError, "cannot open input file", path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::IoError, "cannot open output file", path);
  f << text;
  if (!f) fail(ErrorCode::IoError, "write failed", path);
}

std::string format_increments(const IncrementSample& sample) {
  std::string out;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", sample.h);
  out += "# h=";
  out += buf;
  out += "\n# n=" + std::to_string(sample.values.size()) + "\n";
  if (!sample.model.empty()) out += "# model=" + sample.model + "\n";
  for (double v : sample.values) {
    std::snprintf(buf, sizeof buf, "%.17g\n", v);
    out += buf;
  }
  return out;
}

IncrementSample parse_increments(const std::string& text) {
  IncrementSample s;
  bool have_h = false;
  long long declared_n = -1;
  std::istringstream is(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string body = line.substr(1);
      const auto start = body.find_first_not_of(' ');
      body = start == std::string::npos ? "" : body.substr(start);
      const auto eq = body.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = body.substr(0, eq), val = body.substr(eq + 1);
      char* end = nullptr;
      if (key == "h") {
        s.h = std::strtod(val.c_str(), &end);
        if (end == val.c_str() || !(s.h > 0.0)) fail(ErrorCode::ParseError, "invalid h '" + val + "'", "increment csv");
        have_h = true;
      } else if (key == "n") {
        declared_n = std::strtoll(val.c_str(), &end, 10);
      } else if (key == "model") {
        s.model = val;
      }
      continue;
    }
    const std::string field = line.substr(0, line.find(','));
    char* end = nullptr;
    const double v = std::strtod(field.c_str(), &end);
    if (end == field.c_str() || !std::isfinite(v))
      fail(ErrorCode::ParseError, "bad value on line " + std::to_string(lineno) + ": '" + line + "'", "increment csv");
    s.values.push_back(v);
  }
  if (!have_h) fail(ErrorCode::ParseError, "missing '# h=' header line", "increment csv");
  if (declared_n >= 0 && static_cast<std::size_t>(declared_n) != s.values.size())
    fail(ErrorCode::ParseError,
         "header declares n=" + std::to_string(declared_n) + " but file has " + std::to_string(s.values.size()) +
             " values",
         "increment csv");
  return s;
}

void write_increments(const IncrementSample& sample, const std::string& path) {
  write_text_file(path, format_increments(sample));
}

IncrementSample read_increments(const std::string& path) {
  try {
    return parse_increments(read_text_file(path));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ParseError) fail(e.code(), e.what(), path);
    throw;
  }
}

nlohmann::json json_number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

nlohmann::json json_matrix(const double* m, std::size_t rows, std::size_t cols) {
  nlohmann::json out = nlohmann::json::array();
  for (std::size_t i = 0; i < rows; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < cols; ++j) row.push_back(json_number(m[i * cols + j]));
    out.push_back(row);
  }
  return out;
}

nlohmann::json to_json(const SymmetricEstimate& est) {
  nlohmann::json j = {{"method", est.method},
                      {"n_used", est.n_used},
                      {"h", est.h},
                      {"estimates",
                       {{"beta", json_number(est.beta_hat)},
                        {"sigma", json_number(est.sigma_hat)},
                        {"gamma", json_number(est.gamma_hat)}}},
                      {"covariance", json_matrix(est.cov.data(), 3, 3)},
                      {"covariance_order", {"beta", "sigma", "gamma"}}};
  if (est.method == "frac_moment") j["p"] = est.p;
  return j;
}

nlohmann::json to_json(const SkewedEstimate& est) {
  return {{"method", est.method},
          {"scale_target", est.scale_target},
          {"q", est.q},
          {"n", est.n},
          {"h", est.h},
          {"estimates",
           {{"p", json_number(est.p_hat)},
            {"beta", json_number(est.beta_hat)},
            {est.scale_target == "integrated" ? "sigma_star_beta" : "sigma", json_number(est.scale_hat)},
            {"sigma_star_2q", json_number(est.sigma_star_2q)},
            {"sigma_star_4q", json_number(est.sigma_star_4q)}}},
          {"covariance", json_matrix(est.cov.data(), 3, 3)},
          {"covariance_order", {"p", "beta", "sigma_star_2q"}}};
}

nlohmann::json to_json(const SubordinatorEstimate& est, const std::string& method, std::size_t n, double h) {
  return {{"method", method},
          {"n", n},
          {"h", h},
          {"estimates", {{"delta", json_number(est.delta_hat)}, {"gamma", json_number(est.gamma_hat)}}},
          {"covariance", json_matrix(est.cov.data(), 2, 2)},
          {"covariance_order", {"delta", "gamma"}}};
}

nlohmann::json to_json(const PipelineResult& r) {
  return {{"method", "pipeline"},
          {"n", r.n},
          {"estimates",
           {{"beta", json_number(r.beta_hat)},
            {"sigma", json_number(r.sigma_hat)},
            {"p", json_number(r.p_hat)},
            {"rho", json_number(r.rho_hat)},
            {"gamma", json_number(r.gamma_hat)}}},
          {"steps",
           {{"symmetrize", to_json(r.step1)},
            {"center",
             {{"p_hat_centered", json_number(r.p_hat_centered)},
              {"rho_hat_centered", json_number(r.rho_hat_centered)},
              {"rho_clamped", r.rho_clamped}}},
            {"deskew", {{"median_gamma", json_number(r.median_deskewed)}}}}},
          {"gamma_interval_note", "plug-in, uncorrected"}};
}

nlohmann::json to_json(const Error& err) {
  return {{"code", to_string(err.code())}, {"message", err.what()}, {"context", err.context()}};
}

}  // namespace levy
