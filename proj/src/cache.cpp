#include "synk/cache.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "synk/sha256.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace synk {

namespace {

std::string canonical_key(const CacheKey& key) {
  std::ostringstream os;
  os << "v" << kBasisVersion << "|p=" << key.spec.p << "|f=" << key.spec.f
     << "|e=" << key.spec.e << "|E=";
  for (const auto& c : key.spec.eisenstein) os << c.get_str() << ",";
  os << "|n=" << key.n << "|i=" << key.i;
  return os.str();
}

json payload_json(const CachedCohomology& v) {
  return json{{"h1", v.h1.exponents}, {"h2", v.h2.exponents},
              {"certified", v.certified}, {"precision", v.precision_used},
              {"guard", v.guard}, {"b", v.b}};
}

}  // namespace

std::string ResultCache::key_digest(const CacheKey& key) {
  return sha256_hex(canonical_key(key));
}

std::optional<CachedCohomology> ResultCache::load(const CacheKey& key) const {
  if (!enabled()) return std::nullopt;
  fs::path path = fs::path(dir_) / (key_digest(key) + ".json");
  std::ifstream in(path);
  if (!in) return std::nullopt;
  json doc;
  try {
    in >> doc;
    if (doc.at("schema") != "cohomology-cache/1") return std::nullopt;
    if (doc.at("key") != canonical_key(key)) return std::nullopt;
    if (doc.at("checksum") != sha256_hex(doc.at("payload").dump())) return std::nullopt;
    const json& p = doc.at("payload");
    CachedCohomology out;
    out.h1.prime = out.h2.prime = key.spec.p;
    out.h1.exponents = p.at("h1").get<std::vector<int>>();
    out.h2.exponents = p.at("h2").get<std::vector<int>>();
    out.certified = p.at("certified").get<bool>();
    out.precision_used = p.at("precision").get<int>();
    out.guard = p.at("guard").get<int>();
    out.b = p.at("b").get<int>();
    return out;
  } catch (const json::exception&) {
    return std::nullopt;
  }
}

void ResultCache::store(const CacheKey& key, const CachedCohomology& value) const {
  if (!enabled()) return;
  fs::create_directories(dir_);
  json payload = payload_json(value);
  json doc{{"schema", "cohomology-cache/1"},
           {"key", canonical_key(key)},
           {"payload", payload},
           {"checksum", sha256_hex(payload.dump())}};
  fs::path path = fs::path(dir_) / (key_digest(key) + ".json");
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp);
    out << doc.dump(2) << "\n";
  }
  fs::rename(tmp, path);
}

ResultCache::GcStats ResultCache::gc() const {
  GcStats stats;
  if (!enabled() || !fs::exists(dir_)) return stats;
  for (const auto& entry : fs::directory_iterator(dir_)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".json") continue;
    bool ok = false;
    try {
      std::ifstream in(entry.path());
      json doc;
      in >> doc;
      ok = doc.at("schema") == "cohomology-cache/1" &&
           doc.at("checksum") == sha256_hex(doc.at("payload").dump()) &&
           entry.path().stem().string() == sha256_hex(doc.at("key").get<std::string>());
    } catch (...) {
      ok = false;
    }
    if (ok) {
      ++stats.kept;
    } else {
      fs::remove(entry.path());
      ++stats.removed;
    }
  }
  return stats;
}

}  // namespace synk
