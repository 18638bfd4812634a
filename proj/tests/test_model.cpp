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

#include <cmath>
#include <random>

#include "bdprecode/model.hpp"
#include "test_support.hpp"

namespace bdprecode {
namespace {

using testing::make_config;

TEST(Splitmix64, ReferenceOutputs) {
  // First outputs of the reference generator seeded with 0.
  EXPECT_EQ(splitmix64(0), 0xE220A8397B1DCDAFull);
  EXPECT_EQ(splitmix64(0x9E3779B97F4A7C15ull), 0x6E789E6AA1B965F4ull);
}

TEST(GenerateChannels, Deterministic) {
  const SystemConfig c = make_config(2, 2, 2, 2, 10.0);
  const ChannelSet a = generate_channels(c, 42);
  const ChannelSet b = generate_channels(c, 42);
  ASSERT_EQ(a.h.size(), 2u);
  for (std::size_t k = 0; k < a.h.size(); ++k) {
    ASSERT_EQ(a.h[k].rows(), 2);
    ASSERT_EQ(a.h[k].cols(), 4);
    for (Eigen::Index i = 0; i < a.h[k].size(); ++i) {
      EXPECT_EQ(a.h[k].data()[i], b.h[k].data()[i]);
    }
  }
  const ChannelSet other = generate_channels(c, 43);
  EXPECT_GT((other.h[0] - a.h[0]).norm(), 1e-3);
}

TEST(GenerateChannels, UnitVarianceMoments) {
  const SystemConfig c = make_config(1, 100, 1, 1, 1.0);
  double power = 0.0, re = 0.0, im = 0.0, re2 = 0.0;
  int count = 0;
  for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
    const ChannelSet set = generate_channels(c, seed);
    for (Eigen::Index i = 0; i < set.h[0].size(); ++i) {
      const Complex z = set.h[0].data()[i];
      power += std::norm(z);
      re += z.real();
      im += z.imag();
      re2 += z.real() * z.real();
      ++count;
    }
  }
  ASSERT_EQ(count, 100000);
  EXPECT_NEAR(power / count, 1.0, 0.02);
  EXPECT_NEAR(re2 / count, 0.5, 0.02);
  EXPECT_NEAR(re / count, 0.0, 0.01);
  EXPECT_NEAR(im / count, 0.0, 0.01);
}

TEST(GenerateChannels, FullRowRank) {
  const SystemConfig c = make_config(2, 2, 2, 2, 10.0);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    for (const auto& h : generate_channels(c, seed).h) EXPECT_EQ(reduced_svd(h).rank(), 2);
  }
}

TEST(SystemConfig, Validation) {
  EXPECT_THROW(make_config(0, 1, 1, 1, 1.0).validate(), ContractViolation);
  EXPECT_THROW(make_config(1, 1, 1, 1, -1.0).validate(), ContractViolation);
  EXPECT_THROW(make_config(2, 1, 3, 1, 1.0).validate(), InfeasibleProblem);
  SystemConfig c = make_config(2, 1, 2, 1, 1.0);
  c.weights = {1.0};
  EXPECT_THROW(c.validate(), ContractViolation);
  c.weights = {1.0, 0.0};
  EXPECT_THROW(c.validate(), ContractViolation);
  c.weights = {1.0, 2.0};
  EXPECT_NO_THROW(c.validate());
  EXPECT_DOUBLE_EQ(c.weight(1), 2.0);
  c.group_budgets = {1.0};
  EXPECT_THROW(c.validate(), ContractViolation);
  c.group_budgets = {1.0, 3.0};
  EXPECT_DOUBLE_EQ(c.budget(1), 3.0);
}

TEST(ConstraintMasks, PerBs) {
  const ConstraintMasks m = build_constraint_masks(make_config(2, 2, 1, 1, 1.0));
  ASSERT_EQ(m.group_count, 2);
  EXPECT_EQ(m.mask(0), (RealVector(4) << 1, 1, 0, 0).finished());
  EXPECT_EQ(m.mask(1), (RealVector(4) << 0, 0, 1, 1).finished());
}

TEST(ConstraintMasks, PerAntenna) {
  const ConstraintMasks m =
      build_constraint_masks(make_config(1, 3, 1, 1, 1.0, ConstraintScheme::kPerAntenna));
  ASSERT_EQ(m.group_count, 3);
  for (int a = 0; a < 3; ++a) EXPECT_EQ(m.mask(a), RealVector::Unit(3, a));
}

TEST(ConstraintMasks, SumPower) {
  const ConstraintMasks m =
      build_constraint_masks(make_config(3, 2, 1, 1, 1.0, ConstraintScheme::kSumPower));
  ASSERT_EQ(m.group_count, 1);
  EXPECT_EQ(m.mask(0), RealVector::Ones(6));
}

TEST(ConstraintMasks, TracesAndEnergies) {
  const ConstraintMasks m = build_constraint_masks(make_config(2, 2, 1, 1, 1.0));
  RealVector d(4);
  d << 1, 2, 3, 4;
  const ComplexMatrix x = d.cast<Complex>().asDiagonal();
  EXPECT_EQ(m.group_traces(x), (RealVector(2) << 3, 7).finished());
  EXPECT_EQ(m.weighted_diagonal((RealVector(2) << 0.5, 2).finished()),
            (RealVector(4) << 0.5, 0.5, 2, 2).finished());
  ComplexVector v(4);
  v << Complex(1, 1), 0, 0, 3;
  EXPECT_EQ(m.group_energies(v), (RealVector(2) << 2, 9).finished());
}

TEST(ComplementBasis, SingleUserIsIdentity) {
  const ProblemInstance p = make_problem(make_config(1, 3, 1, 2, 1.0), 1);
  ASSERT_EQ(p.bases.null[0].cols(), 3);
  EXPECT_LT((p.bases.null[0] * p.bases.null[0].adjoint() - ComplexMatrix::Identity(3, 3)).norm(),
            1e-12);
}

TEST(ComplementBasis, OrthogonalToOtherUsers) {
  const ProblemInstance p = make_problem(make_config(4, 1, 3, 1, 1.0), 5);
  for (int k = 0; k < 3; ++k) {
    const ComplexMatrix& v = p.bases.null[static_cast<std::size_t>(k)];
    ASSERT_EQ(v.rows(), 4);
    ASSERT_EQ(v.cols(), 2);
    EXPECT_LT((v.adjoint() * v - ComplexMatrix::Identity(2, 2)).norm(), 1e-10);
    const ComplexMatrix g = interference_stack(p.channels, k, PrecodingMode::kBd);
    EXPECT_LT((g * v).norm(), 1e-9);
    ComplexMatrix full(4, 4);
    full << p.bases.interference[static_cast<std::size_t>(k)], v;
    EXPECT_LT((full.adjoint() * full - ComplexMatrix::Identity(4, 4)).norm(), 1e-10);
  }
}

TEST(ComplementBasis, ZfDpcOrdering) {
  const SystemConfig c =
      make_config(4, 1, 3, 1, 1.0, ConstraintScheme::kPerBs, PrecodingMode::kZfDpc);
  const ProblemInstance p = make_problem(c, 5);
  EXPECT_EQ(p.bases.null[0].cols(), 2);
  EXPECT_EQ(p.bases.null[1].cols(), 3);
  EXPECT_EQ(p.bases.null[2].cols(), 4);
  EXPECT_LT((p.bases.null[2] * p.bases.null[2].adjoint() - ComplexMatrix::Identity(4, 4)).norm(),
            1e-12);
  EXPECT_LT((p.channels.h[2] * p.bases.null[1]).norm(), 1e-9);
  EXPECT_EQ(p.protected_users(0), (std::vector<int>{1, 2}));
  EXPECT_EQ(p.protected_users(2), std::vector<int>{});
}

TEST(MakeProblem, RejectsBadChannels) {
  const SystemConfig c = make_config(2, 1, 2, 1, 1.0);
  ChannelSet set;
  set.h = {ComplexMatrix::Ones(1, 2)};
  EXPECT_THROW(make_problem(c, set), ContractViolation);
  set.h = {ComplexMatrix::Ones(1, 3), ComplexMatrix::Ones(1, 3)};
  EXPECT_THROW(make_problem(c, set), ContractViolation);
}

TEST(Enums, RoundTrip) {
  for (auto s : {ConstraintScheme::kPerBs, ConstraintScheme::kPerAntenna, ConstraintScheme::kSumPower}) {
    EXPECT_EQ(parse_scheme(to_string(s)), s);
  }
  for (auto m : {PrecodingMode::kBd, PrecodingMode::kZfDpc}) EXPECT_EQ(parse_mode(to_string(m)), m);
  EXPECT_THROW(parse_scheme("bogus"), ContractViolation);
}

}  // namespace
}  // namespace bdprecode
