#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "opinionforge/inference.hpp"
#include "opinionforge/oracle.hpp"

// Randomized tiny instances with every latent clamped to a valid value, for
// comparing sampler conditionals against the exact-oracle Bayes quotients.
namespace testsupport {

struct ClampedInstance {
  opinionforge::RatingMatrix ratings;
  opinionforge::GibbsState state;
  opinionforge::OracleConfig oracle;
  opinionforge::SamplerConfig sampler;
};

ClampedInstance random_tiny_instance(std::uint64_t seed);

struct ConditionalGap {
  std::string target;
  double tv = 0.0;
};

// Total variation between each conditional sampler's pmf and the oracle's
// Bayes quotient, over every entity of the instance; returns the worst gap
// per target family.
std::vector<ConditionalGap> conditional_gaps(const ClampedInstance& instance);

}  // namespace testsupport
