#pragma once

#include "uqseg/grid.hpp"

namespace uqseg::core {

// Inclusive threshold: output pixel is 1 iff map pixel >= h, so h = 0
// yields the full mask.
BinaryMask threshold(const ProbabilityMap& map, double h);

// Binary entropy -p ln p - (1-p) ln(1-p) in nats, with 0 ln 0 := 0.
// Throws std::domain_error for p outside [0,1].
double binary_entropy(double p);

// Dice similarity 2|a n b| / (|a| + |b|). Two empty masks score 1,
// one empty vs nonempty scores 0.
double dsc(const BinaryMask& a, const BinaryMask& b);

}  // namespace uqseg::core
