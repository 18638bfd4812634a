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

// JSON documents for problem instances, solutions, beam sets and metrics.
// Complex matrices are arrays of rows, each row an array of [re, im] pairs.

#ifndef BDPRECODE_SERIALIZATION_HPP_
#define BDPRECODE_SERIALIZATION_HPP_

#include <string>

#include "json.hpp"

#include "bdprecode/bd_optimal.hpp"
#include "bdprecode/evaluate.hpp"
#include "bdprecode/model.hpp"
#include "bdprecode/zfbf.hpp"

namespace bdprecode {

using Json = nlohmann::json;

Json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j);
Json vector_to_json(const RealVector& v);
RealVector vector_from_json(const Json& j);

Json config_to_json(const SystemConfig& config);
// Missing keys keep their SystemConfig defaults.
SystemConfig config_from_json(const Json& j);

// {"config": ..., "seed": ..., "channels": [H_1, ..., H_K]}
Json instance_to_json(const ProblemInstance& problem);
ProblemInstance instance_from_json(const Json& j);

Json solution_to_json(const Solution& solution, bool include_history = false);
Json beams_to_json(const BeamSet& beams);
Json metrics_to_json(const Metrics& metrics);

// Throws std::runtime_error on I/O or parse failure.
Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

}  // namespace bdprecode

#endif  // BDPRECODE_SERIALIZATION_HPP_
