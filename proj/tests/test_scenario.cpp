// Copyright 2026 The dualsim Authors
//
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

#include <cmath>
#include <string>

#include <gtest/gtest.h>

#include "dualsim/errors.hpp"
#include "dualsim/scenario.hpp"

namespace dualsim {
namespace {

constexpr const char* kMinimal = R"(experiment: premeasure
seed: 7
system:
  amplitudes: [0.6, 0.8]
)";

TEST(ScenarioParse, MinimalDocumentFillsDefaults) {
  const Scenario s = parse_scenario(kMinimal);
  EXPECT_EQ(s.experiment, Experiment::kPremeasure);
  EXPECT_EQ(s.seed, 7u);
  EXPECT_EQ(s.s_dim, 2u);
  EXPECT_EQ(s.o_dim, 3u);
  EXPECT_EQ(s.n_events, 1u);
  EXPECT_DOUBLE_EQ(s.delta_t, 1.0);
  EXPECT_NEAR(s.lambda * s.delta_t, std::acos(-1.0) / 2, 1e-15);
  EXPECT_EQ(s.perception_mode, PerceptionMode::kAtEnd);
  EXPECT_EQ(s.format, OutputFormat::kJson);
  EXPECT_TRUE(s.warnings.empty());
  EXPECT_NEAR(std::abs(s.amplitudes[1] - Complex(0.8, 0.0)), 0.0, 1e-15);
}

TEST(ScenarioParse, UnnormalizedAmplitudesAreRescaledWithWarning) {
  const Scenario s = parse_scenario("experiment: premeasure\nseed: 1\nsystem:\n  amplitudes: [1, 1]\n");
  EXPECT_NEAR(s.amplitudes.norm(), 1.0, 1e-15);
  EXPECT_NEAR(s.amplitudes[0].real(), std::sqrt(0.5), 1e-15);
  ASSERT_EQ(s.warnings.size(), 1u);
}

TEST(ScenarioParse, ComplexAmplitudes) {
  const Scenario s = parse_scenario(
      "experiment: two_observer\nseed: 2\nsystem:\n  amplitudes: [[0.6, 0], [0, 0.8]]\n");
  EXPECT_NEAR(std::abs(s.amplitudes[1] - Complex(0.0, 0.8)), 0.0, 1e-15);
  EXPECT_EQ(s.experiment, Experiment::kTwoObserver);
}

TEST(ScenarioParse, UnknownKeyNamesFieldAndLine) {
  const std::string text =
      "experiment: premeasure\nseed: 1\nsystem:\n  amplitudes: [0.6, 0.8]\n  colapse_rate: 3\n";
  try {
    parse_scenario(text);
    FAIL() << "expected ScenarioError";
  } catch (const ScenarioError& e) {
    EXPECT_EQ(e.field(), "system.colapse_rate");
    EXPECT_EQ(e.line(), 5u);
    EXPECT_NE(std::string(e.what()).find("colapse_rate"), std::string::npos);
  }
}

TEST(ScenarioParse, MissingSeedIsAnError) {
  try {
    parse_scenario("experiment: premeasure\nsystem:\n  amplitudes: [0.6, 0.8]\n");
    FAIL() << "expected ScenarioError";
  } catch (const ScenarioError& e) {
    EXPECT_EQ(e.field(), "seed");
  }
}

TEST(ScenarioParse, RejectsBadValues) {
  const std::string head = "experiment: premeasure\nseed: 1\nsystem:\n  amplitudes: [0.6, 0.8]\n";
  EXPECT_THROW(parse_scenario(head + "output:\n  format: xml\n"), ScenarioError);
  EXPECT_THROW(parse_scenario(head + "  o_dim: 2\n"), ScenarioError);
  EXPECT_THROW(parse_scenario(head + "measurement:\n  delta_t: -1\n"), ScenarioError);
  EXPECT_THROW(parse_scenario(head + "events: 0\n"), ScenarioError);
  EXPECT_THROW(parse_scenario(head + "perception:\n  mode: sometimes\n"), ScenarioError);
  EXPECT_THROW(parse_scenario("experiment: teleport\nseed: 1\nsystem:\n  amplitudes: [1, 0]\n"),
               ScenarioError);
  EXPECT_THROW(parse_scenario("experiment: premeasure\nseed: 1\nsystem:\n  amplitudes: [0, 0]\n"),
               ScenarioError);
  EXPECT_THROW(parse_scenario("experiment: [premeasure\n"), ScenarioError);
}

TEST(ScenarioParse, DecohereGetsDefaultEnvironment) {
  const Scenario s = parse_scenario("experiment: decohere\nseed: 3\nsystem:\n  amplitudes: [0.6, 0.8]\n");
  ASSERT_TRUE(s.environment.has_value());
  EXPECT_EQ(s.environment->n_atoms, 8u);
  EXPECT_EQ(s.environment->time_points, 50u);
}

TEST(ScenarioParse, PerceptionTimingDefaultsToSampledMode) {
  const Scenario s =
      parse_scenario("experiment: perception_timing\nseed: 3\nsystem:\n  amplitudes: [0.6, 0.8]\n");
  EXPECT_EQ(s.perception_mode, PerceptionMode::kSampled);
}

TEST(ScenarioParse, CanonicalTextIsStable) {
  const Scenario a = parse_scenario(kMinimal);
  const Scenario b = parse_scenario(std::string(kMinimal) + "# trailing comment\n");
  EXPECT_EQ(canonical_text(a), canonical_text(b));
  Scenario c = a;
  c.seed = 8;
  EXPECT_NE(canonical_text(a), canonical_text(c));
}

TEST(ScenarioParse, NamesRoundTrip) {
  for (auto e : {Experiment::kPremeasure, Experiment::kUndo, Experiment::kTwoObserver,
                 Experiment::kDecohere, Experiment::kReductionCompare,
                 Experiment::kPerceptionTiming}) {
    EXPECT_EQ(parse_experiment(to_string(e)), e);
  }
  EXPECT_EQ(parse_format("csv"), OutputFormat::kCsv);
  EXPECT_FALSE(parse_format("xml").has_value());
}

}  // namespace
}  // namespace dualsim
