#pragma once
#include "synk/cache.hpp"

#include <map>
#include <string>
#include <vector>

namespace synk {

struct KEntry {
  int degree = 0;
  FiniteAbelianGroup group;
  bool certified = false;
  int precision_used = 0;
  bool from_cache = false;
  bool via_vanishing = false;  // reported zero through the vanishing bound
};

struct KGroupTable {
  FieldSpec spec;
  int n = 1;
  int imin = 1, imax = 1;
  std::vector<KEntry> entries;  // ascending degree
};

struct ComputeOptions {
  bool use_vanishing = false;
  std::string cache_dir;
  int precision = 0;  // 0 = automatic escalation
};

// K-groups of O/pi^n in the degrees covered by weights imin..imax:
// K_{2i-1} for i in [imin, imax] and K_{2i-2} for i in [max(imin,2), imax].
KGroupTable compute_k_table(const FieldSpec& spec, int n, int imin, int imax,
                            const ComputeOptions& opts = {});

// Bundled table of known K-groups: p-part exponent lists keyed by degree.
struct ReferenceTable {
  std::string label;
  int n = 0;
  std::map<int, std::vector<int>> groups;
};

// Parses a reference data file (JSON: {"schema":1, "tables":[...]}).
std::vector<ReferenceTable> load_reference_file(const std::string& path);

struct VerifyReport {
  int compared = 0;
  int mismatches = 0;
  std::string text;  // one line per compared degree
};

// Compares the p-part of each computed entry with the reference table,
// over the degrees present in both.
VerifyReport compare_to_reference(const KGroupTable& t, const ReferenceTable& ref);

std::string ppart_string(const AbelianPGroup& g);       // "1,3" exponent list
std::string group_string(const FiniteAbelianGroup& g);  // "Z/2 + Z/8 + Z/3"
std::string render_table(const KGroupTable& t);
std::string render_machine(const KGroupTable& t);  // versioned JSON

}  // namespace synk
