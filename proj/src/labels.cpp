#include "synk/labels.hpp"

#include <cctype>

namespace synk {

FieldSpec parse_eisenstein(unsigned long p, const std::string& poly) {
  // Sum of terms [+-][coef][z[^exp]]; whitespace ignored.
  std::string s;
  for (char c : poly)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) throw computation_error("polynomial parse: empty input");
  std::vector<std::pair<int, mpz_class>> terms;
  size_t k = 0;
  while (k < s.size()) {
    int sign = 1;
    if (s[k] == '+' || s[k] == '-') {
      sign = s[k] == '-' ? -1 : 1;
      ++k;
    } else if (!terms.empty()) {
      throw computation_error("polynomial parse: expected + or - at '" + s.substr(k) + "'");
    }
    std::string digits;
    while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) digits.push_back(s[k++]);
    mpz_class coef = digits.empty() ? mpz_class(1) : mpz_class(digits);
    int exp = 0;
    if (k < s.size() && (s[k] == 'z' || s[k] == 'Z')) {
      ++k;
      exp = 1;
      if (k < s.size() && s[k] == '^') {
        ++k;
        std::string ed;
        while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) ed.push_back(s[k++]);
        if (ed.empty()) throw computation_error("polynomial parse: missing exponent");
        exp = std::stoi(ed);
      }
    } else if (digits.empty()) {
      throw computation_error("polynomial parse: bare sign at '" + s.substr(k) + "'");
    }
    terms.emplace_back(exp, sign * coef);
  }
  int deg = 0;
  for (auto& [e, c] : terms) deg = std::max(deg, e);
  FieldSpec spec;
  spec.p = p;
  spec.f = 1;
  spec.e = deg;
  spec.eisenstein.assign(deg + 1, mpz_class(0));
  for (auto& [e, c] : terms) spec.eisenstein[e] += c;
  validate_field_spec(spec);
  return spec;
}

const std::vector<LabelInfo>& bundled_labels() {
  static const std::vector<LabelInfo> labels = [] {
    std::vector<LabelInfo> v;
    auto add = [&](const std::string& label, unsigned long p, const std::string& poly,
                   const std::string& desc) {
      v.push_back(LabelInfo{label, parse_eisenstein(p, poly), desc});
    };
    add("q2", 2, "z-2", "2-adic integers; n-th quotient is Z/2^n");
    add("q3", 3, "z-3", "3-adic integers; n-th quotient is Z/3^n");
    add("q2-sqrt2", 2, "z^2-2", "Z_2 with a square root of 2 adjoined");
    add("f2-z3", 2, "z^3-2", "Z_2 with a cube root of 2 adjoined; n=3 gives F_2[z]/z^3");
    add("2.2.2.1", 2, "z^2+2z+2", "ramified quadratic over the 2-adics, discriminant exponent 2");
    add("2.2.2.2", 2, "z^2+2z-2", "ramified quadratic over the 2-adics, discriminant exponent 2");
    add("2.2.3.1", 2, "z^2+14", "ramified quadratic over the 2-adics, discriminant exponent 3");
    add("2.2.3.2", 2, "z^2+6", "ramified quadratic over the 2-adics, discriminant exponent 3");
    add("2.2.3.3", 2, "z^2+2", "ramified quadratic over the 2-adics, discriminant exponent 3");
    add("2.2.3.4", 2, "z^2+10", "ramified quadratic over the 2-adics, discriminant exponent 3");
    return v;
  }();
  return labels;
}

FieldSpec spec_from_label(const std::string& label) {
  for (const auto& L : bundled_labels())
    if (L.label == label) return L.spec;
  throw computation_error("unknown label: " + label);
}

}  // namespace synk
