#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "opinion/paths.hpp"

namespace opinion {

// Case classes of the non-core configurations, checked in this order: the
// later classes are defined by exclusion of the earlier ones (no positive
// cluster meeting A, then no negative cluster meeting B, then the S strips).
enum class ReductionClass {
  X1,  // a positive cluster in A with a concave corner
  X2,  // positive clusters in A, all convex
  X3,  // A clear; a negative cluster in B with a concave corner
  X4,  // A clear; negative clusters in B, all convex
  X5,  // A and B clear; a positive cluster in S with a concave corner
  X6,  // A and B clear; positive clusters in S, all convex
  X7,  // the single configuration A = -1, B = +1, S = -1
  StableOrMeta,
};

const char* to_string(ReductionClass c);

struct ReductionCertificate {
  ReductionClass class_tag = ReductionClass::StableOrMeta;
  PathRecord path;        // single-flip chain; just the start for StableOrMeta
  Rational max_climb{0};  // max elevation - H(start)
  std::string to_json() const;  // {"class", "climb", "steps"}
};

// Raised when a constructed reduction climbs above the promised bound
// 2(alpha - 1) or fails to end strictly below its start. The landscape has a
// state outside the stable/metastable families that is deeper than the case
// analysis allows; the offending certificate is attached as evidence.
class ReductionBoundViolation : public std::logic_error {
 public:
  ReductionBoundViolation(const std::string& what, ReductionCertificate cert)
      : std::logic_error(what), certificate(std::move(cert)) {}
  ReductionCertificate certificate;
};

// First matching class in declaration order; StableOrMeta for members of the
// regime's stable/metastable families. Requires a supported regime.
ReductionClass classify(const ModelSpec& spec, const SpinConfiguration& config);

// Executes the class-specific move schedule (corner fills, hole fills, strip
// peels, row/column flips) until the energy drops strictly below the start;
// every step is costed with the exact rational energy difference. Throws
// ReductionBoundViolation if the realized climb exceeds 2(alpha - 1).
ReductionCertificate reduce(const ModelSpec& spec,
                            const SpinConfiguration& config);

struct ReductionRun {
  std::vector<ReductionCertificate> rounds;
  SpinConfiguration final_config;
  std::string to_json() const;  // {"rounds", "classes", "max_climb"}
};

// Iterates reduce until the stable/metastable families are reached; throws
// std::runtime_error if that takes more than N^2 rounds.
ReductionRun reduce_to_core(const ModelSpec& spec,
                            const SpinConfiguration& start);

}  // namespace opinion
