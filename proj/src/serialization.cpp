// Copyright 2026 The bdprecode Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "bdprecode/serialization.hpp"

#include <fstream>
#include <stdexcept>

namespace bdprecode {

Json matrix_to_json(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) {
    throw ContractViolation("matrix JSON must be a non-empty array of rows");
  }
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  ComplexMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw ContractViolation("matrix JSON rows have unequal lengths");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      const Json& entry = row[static_cast<std::size_t>(c)];
      if (!entry.is_array() || entry.size() != 2) {
        throw ContractViolation("matrix JSON entries must be [re, im] pairs");
      }
      m(r, c) = Complex(entry[0].get<double>(), entry[1].get<double>());
    }
  }
  require_finite(m, "matrix_from_json");
  return m;
}

Json vector_to_json(const RealVector& v) {
  return Json(std::vector<double>(v.data(), v.data() + v.size()));
}

RealVector vector_from_json(const Json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const RealVector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

Json config_to_json(const SystemConfig& c) {
  Json j;
  j["A"] = c.num_bs;
  j["MB"] = c.antennas_per_bs;
  j["K"] = c.num_ms;
  j["N"] = c.antennas_per_ms;
  j["P"] = c.power_budget;
  j["weights"] = c.weights;
  j["group_budgets"] = c.group_budgets;
  j["scheme"] = to_string(c.scheme);
  j["mode"] = to_string(c.mode);
  return j;
}

SystemConfig config_from_json(const Json& j) {
  SystemConfig c;
  c.num_bs = j.value("A", c.num_bs);
  c.antennas_per_bs = j.value("MB", c.antennas_per_bs);
  c.num_ms = j.value("K", c.num_ms);
  c.antennas_per_ms = j.value("N", c.antennas_per_ms);
  c.power_budget = j.value("P", c.power_budget);
  c.weights = j.value("weights", c.weights);
  c.group_budgets = j.value("group_budgets", c.group_budgets);
  if (j.contains("scheme")) c.scheme = parse_scheme(j["scheme"].get<std::string>());
  if (j.contains("mode")) c.mode = parse_mode(j["mode"].get<std::string>());
  return c;
}

Json instance_to_json(const ProblemInstance& problem) {
  Json j;
  j["config"] = config_to_json(problem.config);
  j["seed"] = problem.channels.seed;
  Json channels = Json::array();
  for (const auto& h : problem.channels.h) channels.push_back(matrix_to_json(h));
  j["channels"] = std::move(channels);
  return j;
}

ProblemInstance instance_from_json(const Json& j) {
  const SystemConfig config = config_from_json(j.at("config"));
  ChannelSet channels;
  channels.seed = j.value("seed", std::uint64_t{0});
  if (j.contains("channels")) {
    for (const auto& h : j.at("channels")) channels.h.push_back(matrix_from_json(h));
    return make_problem(config, std::move(channels));
  }
  return make_problem(config, channels.seed);
}

Json solution_to_json(const Solution& s, bool include_history) {
  Json j;
  j["method"] = s.method;
  j["weighted_sum_rate"] = s.primal_value;
  j["rates"] = vector_to_json(s.rates);
  j["group_powers"] = vector_to_json(s.group_powers);
  j["primal_value"] = s.primal_value;
  j["dual_value"] = s.dual_value;
  j["duality_gap"] = s.duality_gap;
  j["mu"] = vector_to_json(s.mu);
  j["iterations"] = s.iterations;
  j["converged"] = s.converged;
  j["kkt_residual"] = s.kkt_residual;
  j["power_scale"] = s.power_scale;
  Json covariances = Json::array();
  Json precoders = Json::array();
  Json allocations = Json::array();
  for (std::size_t k = 0; k < s.covariances.size(); ++k) {
    covariances.push_back(matrix_to_json(s.covariances[k]));
    precoders.push_back(matrix_to_json(s.precoders[k]));
    allocations.push_back(vector_to_json(s.allocations[k]));
  }
  j["covariances"] = std::move(covariances);
  j["precoders"] = std::move(precoders);
  j["allocations"] = std::move(allocations);
  if (include_history) {
    Json history = Json::array();
    for (const auto& rec : s.history) {
      history.push_back({{"iteration", rec.iteration},
                         {"mu", vector_to_json(rec.mu)},
                         {"dual_value", rec.dual_value},
                         {"weighted_rate", rec.weighted_rate},
                         {"group_powers", vector_to_json(rec.group_powers)}});
    }
    j["history"] = std::move(history);
  }
  return j;
}

Json beams_to_json(const BeamSet& b) {
  Json j;
  j["method"] = b.method == BeamMethod::kOptimalPerGroup ? "optimal-per-group" : "pseudo-inverse";
  Json beams = Json::array();
  for (const auto& t : b.beams) beams.push_back(matrix_to_json(t));
  j["beams"] = std::move(beams);
  j["rates"] = vector_to_json(b.rates);
  j["group_powers"] = vector_to_json(b.group_powers);
  j["mu"] = vector_to_json(b.mu);
  j["weighted_sum_rate"] = b.weighted_sum_rate;
  j["converged"] = b.converged;
  return j;
}

Json metrics_to_json(const Metrics& m) {
  return {{"weighted_sum_rate", m.weighted_sum_rate},
          {"per_user_rates", vector_to_json(m.per_user_rates)},
          {"per_group_powers", vector_to_json(m.per_group_powers)},
          {"active_groups", m.active_groups},
          {"max_zf_residual", m.max_zf_residual},
          {"min_covariance_eigenvalue", m.min_covariance_eigenvalue}};
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace bdprecode
