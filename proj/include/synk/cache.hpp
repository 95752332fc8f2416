#pragma once
#include "synk/ktheory.hpp"

#include <optional>
#include <string>

namespace synk {

inline constexpr int kBasisVersion = 1;  // bump when the basis layout changes

struct CacheKey {
  FieldSpec spec;
  int n = 1;
  int i = 1;
};

struct CachedCohomology {
  AbelianPGroup h1, h2;
  bool certified = false;
  int precision_used = 0;
  int guard = 0;
  int b = 0;
};

// Content-addressed on-disk store of certified cohomology results, one JSON
// file per key, with payload checksums.  Corrupt entries read as misses.
class ResultCache {
 public:
  explicit ResultCache(std::string dir) : dir_(std::move(dir)) {}
  bool enabled() const { return !dir_.empty(); }

  std::optional<CachedCohomology> load(const CacheKey& key) const;
  void store(const CacheKey& key, const CachedCohomology& value) const;

  struct GcStats {
    int kept = 0;
    int removed = 0;
  };
  GcStats gc() const;  // removes unreadable or checksum-failing entries

  static std::string key_digest(const CacheKey& key);

 private:
  std::string dir_;
};

}  // namespace synk
