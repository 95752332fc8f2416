// Command-line front end: computes and checks K-groups of finite chain rings
// O/pi^n from their syntomic cohomology.
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "synk/labels.hpp"
#include "synk/table.hpp"

using namespace synk;
using nlohmann::json;

namespace {

struct Selection {
  std::string label;
  unsigned long p = 2;
  int f = 1;
  std::string eisenstein;
  int n = 1;
  std::string weights = "1..1";
  std::string precision = "auto";
  bool use_vanishing = false;
  std::string format = "table";
  std::string cache_dir;
  std::string out;
};

void add_selection_flags(CLI::App* cmd, Selection& sel) {
  cmd->add_option("--label", sel.label, "bundled base-field label (see show-labels)");
  cmd->add_option("--p", sel.p, "prime p");
  cmd->add_option("--f", sel.f, "residue degree (only f=1 supported)");
  cmd->add_option("--eisenstein", sel.eisenstein,
                  "distinguished polynomial in z, e.g. \"z^2+2z+2\"");
  cmd->add_option("--n", sel.n, "quotient length: the ring O/pi^n")->required();
  cmd->add_option("--weights", sel.weights, "weight range A..B (default 1..1)");
  cmd->add_option("--precision", sel.precision, "p-adic working precision: auto or N");
  cmd->add_flag("--use-vanishing", sel.use_vanishing,
                "use the proven vanishing bound for high even degrees");
  cmd->add_option("--format", sel.format, "output format: table or machine")
      ->check(CLI::IsMember({"table", "machine"}));
  cmd->add_option("--cache-dir", sel.cache_dir, "directory for cached results");
  cmd->add_option("--out", sel.out, "write output to this file instead of stdout");
}

FieldSpec resolve_spec(const Selection& sel) {
  if (!sel.label.empty()) return spec_from_label(sel.label);
  if (sel.f > 1) throw computation_error("residue degree f > 1 is not yet supported");
  if (sel.eisenstein.empty())
    throw computation_error("need --label or --p/--eisenstein");
  return parse_eisenstein(sel.p, sel.eisenstein);
}

std::pair<int, int> parse_weights(const std::string& w) {
  auto pos = w.find("..");
  int a, b;
  try {
    if (pos == std::string::npos) {
      a = b = std::stoi(w);
    } else {
      a = std::stoi(w.substr(0, pos));
      b = std::stoi(w.substr(pos + 2));
    }
  } catch (const std::exception&) {
    throw computation_error("cannot parse --weights '" + w + "' (expected A..B)");
  }
  if (a < 1 || b < a) throw computation_error("--weights: need 1 <= A <= B");
  return {a, b};
}

ComputeOptions resolve_options(const Selection& sel) {
  ComputeOptions opts;
  opts.use_vanishing = sel.use_vanishing;
  opts.cache_dir = sel.cache_dir;
  if (sel.precision != "auto") {
    try {
      opts.precision = std::stoi(sel.precision);
    } catch (const std::exception&) {
      throw computation_error("--precision must be 'auto' or a positive integer");
    }
    if (opts.precision < 1)
      throw computation_error("--precision must be 'auto' or a positive integer");
  }
  return opts;
}

void emit(const Selection& sel, const std::string& text) {
  if (sel.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(sel.out);
    if (!f) throw computation_error("cannot open output file " + sel.out);
    f << text;
  }
}

int run_compute(const Selection& sel) {
  FieldSpec spec = resolve_spec(sel);
  auto [a, b] = parse_weights(sel.weights);
  KGroupTable t = compute_k_table(spec, sel.n, a, b, resolve_options(sel));
  emit(sel, sel.format == "machine" ? render_machine(t) : render_table(t));
  return 0;
}

int run_verify(const Selection& sel, const std::string& against,
               const std::string& reference) {
  FieldSpec spec = resolve_spec(sel);
  auto [a, b] = parse_weights(sel.weights);
  KGroupTable t = compute_k_table(spec, sel.n, a, b, resolve_options(sel));

  int failures = 0;
  std::ostringstream os;
  for (const auto& e : t.entries) {
    if (!e.certified) {
      os << "FAIL K_" << e.degree << ": uncertified\n";
      ++failures;
    }
  }
  // Order identities per weight.
  for (int i = a; i <= b; ++i) {
    AbelianPGroup h1, h2;
    h1.prime = h2.prime = spec.p;
    for (const auto& e : t.entries) {
      if (e.degree == 2 * i - 1) h1 = e.group.ppart;
      if (e.degree == 2 * i - 2 && i >= 2) h2 = e.group.ppart;
    }
    bool ok = i >= 2 ? ratio_check(i, sel.n, spec.f, h1, h2)
                     : k1_units_check(sel.n, spec.f, h1, h2);
    os << (ok ? "ok  " : "FAIL") << " weight " << i << " order identity\n";
    if (!ok) ++failures;
  }
  if (!reference.empty()) {
    bool found = false;
    for (const auto& rt : load_reference_file(reference)) {
      if (rt.label != sel.label || rt.n != sel.n) continue;
      found = true;
      VerifyReport rep = compare_to_reference(t, rt);
      os << rep.text;
      failures += rep.mismatches;
      break;
    }
    if (!found) {
      os << "FAIL no table for label '" << sel.label << "', n=" << sel.n
         << " in " << reference << "\n";
      ++failures;
    }
  }
  if (!against.empty()) {
    std::ifstream in(against);
    if (!in) throw computation_error("cannot read " + against);
    json ref;
    in >> ref;
    json cur = json::parse(render_machine(t));
    if (ref == cur) {
      os << "ok   matches " << against << "\n";
    } else {
      os << "FAIL output differs from " << against << "\n";
      ++failures;
    }
  }
  os << (failures == 0 ? "verify: all checks passed\n"
                       : "verify: " + std::to_string(failures) + " check(s) failed\n");
  emit(sel, os.str());
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"K-groups of finite chain rings via syntomic matrices"};
  app.require_subcommand(1);

  Selection sel_compute, sel_verify;
  std::string against, reference, gc_dir;

  CLI::App* compute = app.add_subcommand("compute", "compute a K-group table");
  add_selection_flags(compute, sel_compute);

  CLI::App* verify =
      app.add_subcommand("verify", "recompute and check order identities");
  add_selection_flags(verify, sel_verify);
  verify->add_option("--against", against, "machine-format file to compare with");
  verify->add_option("--reference", reference,
                     "bundled reference data file (matched by --label and --n)");

  CLI::App* labels = app.add_subcommand("show-labels", "list bundled base fields");

  CLI::App* gc = app.add_subcommand("cache-gc", "drop corrupt cache entries");
  gc->add_option("--cache-dir", gc_dir, "cache directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (compute->parsed()) return run_compute(sel_compute);
    if (verify->parsed()) return run_verify(sel_verify, against, reference);
    if (labels->parsed()) {
      for (const auto& L : bundled_labels()) {
        std::ostringstream poly;
        for (int j = L.spec.e; j >= 0; --j) {
          const mpz_class& c = L.spec.eisenstein[j];
          if (c == 0) continue;
          if (poly.tellp() > 0) poly << (c < 0 ? " - " : " + ");
          else if (c < 0) poly << "-";
          mpz_class ac = abs(c);
          if (ac != 1 || j == 0) poly << ac.get_str();
          if (j >= 1) poly << "z";
          if (j >= 2) poly << "^" << j;
        }
        std::cout << L.label << "\tp=" << L.spec.p << "\t" << poly.str() << "\t"
                  << L.description << "\n";
      }
      return 0;
    }
    if (gc->parsed()) {
      ResultCache cache(gc_dir);
      auto stats = cache.gc();
      std::cout << "cache-gc: kept " << stats.kept << ", removed " << stats.removed
                << "\n";
      return 0;
    }
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  }
  return 0;
}
