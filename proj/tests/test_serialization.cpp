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

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>

#include "bdprecode/bd_optimal.hpp"
#include "bdprecode/evaluate.hpp"
#include "bdprecode/serialization.hpp"
#include "bdprecode/zfbf.hpp"
#include "test_support.hpp"

namespace bdprecode {
namespace {

using testing::make_config;

TEST(MatrixJson, RoundTripIsExact) {
  std::mt19937_64 rng(21);
  const ComplexMatrix m = testing::random_complex(3, 4, rng);
  const Json j = matrix_to_json(m);
  ASSERT_EQ(j.size(), 3u);
  ASSERT_EQ(j[0].size(), 4u);
  EXPECT_EQ(j[1][2][0].get<double>(), m(1, 2).real());
  EXPECT_EQ(j[1][2][1].get<double>(), m(1, 2).imag());
  const ComplexMatrix back = matrix_from_json(Json::parse(j.dump()));
  EXPECT_EQ(back, m);
}

TEST(MatrixJson, RejectsMalformed) {
  EXPECT_THROW(matrix_from_json(Json::parse("[]")), ContractViolation);
  EXPECT_THROW(matrix_from_json(Json::parse("[[[1,2]],[[1,2],[3,4]]]")), ContractViolation);
  EXPECT_THROW(matrix_from_json(Json::parse("[[[1,2,3]]]")), ContractViolation);
}

TEST(ConfigJson, FieldsByName) {
  SystemConfig c = make_config(2, 4, 4, 2, 10.0, ConstraintScheme::kPerAntenna,
                               PrecodingMode::kZfDpc);
  c.weights = {1.0, 2.0, 3.0, 4.0};
  const Json j = config_to_json(c);
  EXPECT_EQ(j["A"], 2);
  EXPECT_EQ(j["MB"], 4);
  EXPECT_EQ(j["scheme"], "per-antenna");
  EXPECT_EQ(j["mode"], "zf-dpc");
  const SystemConfig back = config_from_json(j);
  EXPECT_EQ(back.num_bs, 2);
  EXPECT_EQ(back.antennas_per_ms, 2);
  EXPECT_EQ(back.weights, c.weights);
  EXPECT_EQ(back.scheme, ConstraintScheme::kPerAntenna);
  EXPECT_EQ(back.mode, PrecodingMode::kZfDpc);
  const SystemConfig partial = config_from_json(Json::parse(R"({"K": 3})"));
  EXPECT_EQ(partial.num_ms, 3);
  EXPECT_EQ(partial.power_budget, SystemConfig{}.power_budget);
}

TEST(InstanceJson, RoundTripSolvesIdentically) {
  const ProblemInstance p = make_problem(make_config(3, 1, 2, 1, 10.0), 9);
  const ProblemInstance q = instance_from_json(Json::parse(instance_to_json(p).dump()));
  EXPECT_EQ(q.channels.seed, 9u);
  for (std::size_t k = 0; k < 2; ++k) EXPECT_EQ(q.channels.h[k], p.channels.h[k]);
  EXPECT_EQ(solve_optimal(q).primal_value, solve_optimal(p).primal_value);
}

TEST(InstanceJson, SeedOnlyRegenerates) {
  const Json j = Json::parse(R"({"config": {"A": 2, "MB": 1, "K": 2, "N": 1}, "seed": 4})");
  const ProblemInstance q = instance_from_json(j);
  EXPECT_EQ(q.channels.h[1], generate_channels(q.config, 4).h[1]);
}

TEST(SolutionJson, Contents) {
  const ProblemInstance p = make_problem(make_config(2, 1, 2, 1, 10.0), 1);
  const Solution s = solve_optimal(p);
  const Json j = solution_to_json(s, true);
  EXPECT_EQ(j["method"], "optimal-A1");
  EXPECT_EQ(j["mu"].size(), 2u);
  EXPECT_EQ(j["covariances"].size(), 2u);
  EXPECT_EQ(j["history"].size(), s.history.size());
  EXPECT_EQ(j["primal_value"].get<double>(), s.primal_value);
  EXPECT_FALSE(solution_to_json(s).contains("history"));
  const Json b = beams_to_json(optimal_miso_beams(p, s));
  EXPECT_EQ(b["beams"].size(), 2u);
  const Json m = metrics_to_json(metrics(s.covariances, p));
  EXPECT_EQ(m["active_groups"], count_active_groups(s.group_powers, p));
}

TEST(JsonFiles, WriteReadAndErrors) {
  const auto path = std::filesystem::temp_directory_path() / "bdprecode_json_test.json";
  write_json_file(path.string(), Json{{"x", 1}});
  EXPECT_EQ(read_json_file(path.string())["x"], 1);
  std::filesystem::remove(path);
  EXPECT_THROW(read_json_file(path.string()), std::runtime_error);
  EXPECT_THROW(write_json_file("/nonexistent-dir/x.json", Json{}), std::runtime_error);
}

}  // namespace
}  // namespace bdprecode
