#pragma once
#include "synk/envelope.hpp"

#include <string>
#include <vector>

namespace synk {

struct LabelInfo {
  std::string label;
  FieldSpec spec;
  std::string description;
};

// The catalog of bundled base fields.
const std::vector<LabelInfo>& bundled_labels();

// Resolves a bundled label; throws computation_error for unknown labels.
FieldSpec spec_from_label(const std::string& label);

// Parses a monic integer polynomial in z, e.g. "z^2+2z+2" or "z-2", and
// validates it as distinguished for p.
FieldSpec parse_eisenstein(unsigned long p, const std::string& poly);

}  // namespace synk
