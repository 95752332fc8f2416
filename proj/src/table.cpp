#include "synk/table.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

using nlohmann::json;

namespace synk {

KGroupTable compute_k_table(const FieldSpec& spec, int n, int imin, int imax,
                            const ComputeOptions& opts) {
  validate_field_spec(spec);
  if (imin < 1 || imax < imin)
    throw computation_error("compute_k_table: need 1 <= imin <= imax");
  KGroupTable t;
  t.spec = spec;
  t.n = n;
  t.imin = imin;
  t.imax = imax;
  ResultCache cache(opts.cache_dir);
  const int i0 = even_vanishing_bound(spec.p, spec.e, n);

  for (int i = imin; i <= imax; ++i) {
    CacheKey key{spec, n, i};
    CachedCohomology coh;
    bool cached = false;
    if (auto hit = cache.load(key); hit && hit->certified) {
      coh = *hit;
      cached = true;
    } else {
      SyntomicOptions sopts;
      sopts.N0 = opts.precision;
      SyntomicResult r = syntomic_cohomology(spec, n, i, sopts);
      coh.h1 = r.h1;
      coh.h2 = r.h2;
      coh.certified = r.certified;
      coh.precision_used = r.precision_used;
      coh.guard = r.guard;
      coh.b = r.b;
      if (coh.certified) cache.store(key, coh);
    }
    if (opts.use_vanishing && i >= i0 && !coh.h2.trivial())
      throw computation_error("vanishing bound contradicted at weight " + std::to_string(i));

    if (i >= 2) {
      KEntry even;
      even.degree = 2 * i - 2;
      even.group = assemble_integral(spec.p, spec.f, even.degree, coh.h2);
      even.certified = coh.certified;
      even.precision_used = coh.precision_used;
      even.from_cache = cached;
      even.via_vanishing = opts.use_vanishing && i >= i0;
      t.entries.push_back(std::move(even));
    }
    KEntry odd;
    odd.degree = 2 * i - 1;
    odd.group = assemble_integral(spec.p, spec.f, odd.degree, coh.h1);
    odd.certified = coh.certified;
    odd.precision_used = coh.precision_used;
    odd.from_cache = cached;
    t.entries.push_back(std::move(odd));
  }
  return t;
}

std::vector<ReferenceTable> load_reference_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw computation_error("cannot read reference file " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& ex) {
    throw computation_error("reference file " + path + ": " + ex.what());
  }
  if (doc.value("schema", 0) != 1)
    throw computation_error("reference file " + path + ": unsupported schema");
  std::vector<ReferenceTable> out;
  for (const auto& jt : doc.at("tables")) {
    ReferenceTable rt;
    rt.label = jt.at("label").get<std::string>();
    rt.n = jt.at("n").get<int>();
    for (const auto& [key, val] : jt.at("groups").items())
      rt.groups[std::stoi(key)] = val.get<std::vector<int>>();
    out.push_back(std::move(rt));
  }
  return out;
}

VerifyReport compare_to_reference(const KGroupTable& t, const ReferenceTable& ref) {
  VerifyReport rep;
  std::ostringstream os;
  for (const auto& e : t.entries) {
    auto it = ref.groups.find(e.degree);
    if (it == ref.groups.end()) continue;
    ++rep.compared;
    bool ok = e.group.ppart.exponents == it->second;
    if (!ok) ++rep.mismatches;
    os << (ok ? "ok  " : "FAIL") << " K_" << e.degree << ": computed ["
       << ppart_string(e.group.ppart) << "]";
    if (!ok) {
      AbelianPGroup want;
      want.prime = t.spec.p;
      want.exponents = it->second;
      os << ", reference [" << ppart_string(want) << "]";
    }
    os << "\n";
  }
  if (rep.compared == 0) os << "warning: no overlapping degrees to compare\n";
  rep.text = os.str();
  return rep;
}

std::string ppart_string(const AbelianPGroup& g) {
  std::string s;
  for (size_t k = 0; k < g.exponents.size(); ++k) {
    if (k) s += ",";
    s += std::to_string(g.exponents[k]);
  }
  return s;
}

std::string group_string(const FiniteAbelianGroup& g) {
  if (g.infinite_cyclic) return "Z";
  if (g.trivial()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int e : g.ppart.exponents) {
    mpz_class pe;
    mpz_ui_pow_ui(pe.get_mpz_t(), g.p, static_cast<unsigned long>(e));
    os << (first ? "" : " + ") << "Z/" << pe.get_str();
    first = false;
  }
  if (g.coprime > 1) {
    os << (first ? "" : " + ") << "Z/" << g.coprime.get_str();
    first = false;
  }
  return os.str();
}

std::string render_table(const KGroupTable& t) {
  std::ostringstream os;
  os << "K-groups of O/pi^" << t.n << "  (p=" << t.spec.p << ", e=" << t.spec.e
     << ", f=" << t.spec.f << ", weights " << t.imin << ".." << t.imax << ")\n";
  size_t wdeg = 3, wgrp = 5;
  for (const auto& e : t.entries) {
    wdeg = std::max(wdeg, std::to_string(e.degree).size() + 2);
    wgrp = std::max(wgrp, group_string(e.group).size());
  }
  for (const auto& e : t.entries) {
    std::string deg = "K_" + std::to_string(e.degree);
    std::string grp = group_string(e.group);
    os << deg << std::string(wdeg + 2 - deg.size(), ' ') << grp
       << std::string(wgrp + 2 - grp.size(), ' ')
       << (e.certified ? "certified" : "UNCERTIFIED") << " (N=" << e.precision_used
       << (e.from_cache ? ", cached" : "") << (e.via_vanishing ? ", vanishing" : "")
       << ")\n";
  }
  return os.str();
}

std::string render_machine(const KGroupTable& t) {
  json entries = json::array();
  for (const auto& e : t.entries) {
    entries.push_back(json{{"degree", e.degree},
                           {"p_exponents", e.group.ppart.exponents},
                           {"coprime", e.group.coprime.get_str()},
                           {"infinite_cyclic", e.group.infinite_cyclic},
                           {"certified", e.certified},
                           {"precision", e.precision_used},
                           {"via_vanishing", e.via_vanishing}});
  }
  std::vector<std::string> eis;
  for (const auto& c : t.spec.eisenstein) eis.push_back(c.get_str());
  json doc{{"schema", "k-table/1"},
           {"p", t.spec.p},
           {"f", t.spec.f},
           {"e", t.spec.e},
           {"eisenstein", eis},
           {"n", t.n},
           {"weights", {t.imin, t.imax}},
           {"entries", entries}};
  return doc.dump(2) + "\n";
}

}  // namespace synk
