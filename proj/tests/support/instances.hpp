#pragma once

// Shared random problem builders for unit and acceptance tests.

#include <cstdint>

#include "bcr/model.hpp"

namespace testsupport {

// C = 0 feasibility problem generated from a planted N-by-r factor: every
// constraint is a Gaussian EQ with bound ||L_i X*||_F^2, so the planted
// factor is exactly feasible.
bcr::SdpProblem feasibility_instance(std::size_t n, std::size_t r,
                                     std::size_t num_constraints,
                                     std::uint64_t seed);

// Gram objective plus a mixed bag of EQ and LE constraints; LE bounds carry
// slack above a planted point so the instance is strictly feasible.
bcr::SdpProblem mixed_instance(std::size_t n, std::size_t r,
                               std::size_t num_constraints,
                               std::uint64_t seed);

}  // namespace testsupport
