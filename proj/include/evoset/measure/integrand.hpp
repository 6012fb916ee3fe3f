#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "evoset/errors.hpp"
#include "evoset/intervals/interval_set.hpp"

namespace evoset {

class CatalogUnsupported : public Error {
 public:
  explicit CatalogUnsupported(const std::string& what) : Error("integrand not in catalog: " + what) {}
};

namespace term {

struct Const {
  double c = 0.0;
};
// scale * (x - shift)^alpha for x > shift, zero below; alpha > -1.
struct Pow {
  double alpha = 1.0;
  double scale = 1.0;
  double shift = 0.0;
};
// a0 + a1 x + a2 x^2 + ...
struct Poly {
  std::vector<double> coeffs;
};
// Indicator of [a, b).
struct Ind {
  double a = 0.0;
  double b = 0.0;
};

}  // namespace term

using Term = std::variant<term::Const, term::Pow, term::Poly, term::Ind>;

// Sum of catalog terms, each with a closed-form antiderivative.
class Integrand {
 public:
  Integrand() = default;
  explicit Integrand(std::vector<Term> terms) : terms_(std::move(terms)) {
    for (const auto& t : terms_) validate(t);
  }

  static Integrand constant(double c) { return Integrand({term::Const{c}}); }
  static Integrand identity() { return Integrand({term::Poly{{0.0, 1.0}}}); }

  const std::vector<Term>& terms() const { return terms_; }

  double operator()(double x) const {
    double s = 0.0;
    for (const auto& t : terms_) s += value(t, x);
    return s;
  }

  // Exact integral over [lo, hi) from antiderivative differences.
  double integral(double lo, double hi) const {
    double s = 0.0;
    for (const auto& t : terms_) s += antiderivative(t, hi) - antiderivative(t, lo);
    return s;
  }

  double integral(const IntervalSet& set) const {
    double s = 0.0;
    for (const auto& p : set.parts()) s += integral(p.lo, p.hi);
    return s;
  }

  // Unbounded on the closure of a bounded carrier when a negative power
  // has its singular point there; unbounded on an unbounded carrier when
  // some term grows.
  bool bounded_on(const IntervalSet& carrier) const {
    const double lo = carrier.inf(), hi = carrier.sup();
    for (const auto& t : terms_) {
      if (const auto* p = std::get_if<term::Pow>(&t)) {
        if (p->scale == 0.0) continue;
        if (p->alpha < 0.0 && p->shift >= lo && p->shift <= hi) return false;
        if (p->alpha > 0.0 && std::isinf(hi)) return false;
      } else if (const auto* q = std::get_if<term::Poly>(&t)) {
        for (std::size_t i = 1; i < q->coeffs.size(); ++i)
          if (q->coeffs[i] != 0.0 && (std::isinf(hi) || std::isinf(lo))) return false;
      }
    }
    return true;
  }

  // Sign scan on a grid of interior points of a bounded carrier.
  bool attains_both_signs(const IntervalSet& carrier, std::size_t grid = 4096) const {
    bool pos = false, neg = false;
    for (const auto& p : carrier.parts()) {
      if (std::isinf(p.lo) || std::isinf(p.hi)) throw InvalidArgument("sign scan needs a bounded carrier");
      for (std::size_t i = 0; i < grid; ++i) {
        const double x = p.lo + (p.hi - p.lo) * (static_cast<double>(i) + 0.5) / static_cast<double>(grid);
        const double v = (*this)(x);
        pos = pos || v > 0.0;
        neg = neg || v < 0.0;
      }
    }
    return pos && neg;
  }

  // Canonical descriptor; parse(describe()) reproduces the same terms.
  std::string describe() const {
    std::string out;
    for (const auto& t : terms_) {
      if (!out.empty()) out += '+';
      out += describe(t);
    }
    return out.empty() ? "const:0" : out;
  }

 private:
  static void validate(const Term& t) {
    if (const auto* p = std::get_if<term::Pow>(&t)) {
      if (!(p->alpha > -1.0)) throw CatalogUnsupported("pow exponent must exceed -1");
    } else if (const auto* i = std::get_if<term::Ind>(&t)) {
      if (!(i->a < i->b)) throw CatalogUnsupported("indicator needs a < b");
    }
  }

  static double value(const Term& t, double x) {
    switch (t.index()) {
      case 0: return std::get<term::Const>(t).c;
      case 1: {
        const auto& p = std::get<term::Pow>(t);
        if (x < p.shift) return 0.0;
        if (p.alpha == 0.0) return p.scale;
        return p.scale * std::pow(x - p.shift, p.alpha);
      }
      case 2: {
        const auto& c = std::get<term::Poly>(t).coeffs;
        double s = 0.0;
        for (auto it = c.rbegin(); it != c.rend(); ++it) s = s * x + *it;
        return s;
      }
      default: {
        const auto& i = std::get<term::Ind>(t);
        return i.a <= x && x < i.b ? 1.0 : 0.0;
      }
    }
  }

  static double antiderivative(const Term& t, double x) {
    switch (t.index()) {
      case 0: return std::get<term::Const>(t).c * x;
      case 1: {
        const auto& p = std::get<term::Pow>(t);
        const double u = x - p.shift;
        if (u <= 0.0) return 0.0;
        return p.scale * std::pow(u, p.alpha + 1.0) / (p.alpha + 1.0);
      }
      case 2: {
        const auto& c = std::get<term::Poly>(t).coeffs;
        double s = 0.0;
        for (std::size_t i = c.size(); i-- > 0;) s = s * x + c[i] / static_cast<double>(i + 1);
        return s * x;
      }
      default: {
        const auto& i = std::get<term::Ind>(t);
        return std::clamp(x, i.a, i.b) - i.a;
      }
    }
  }

  static std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  }

  static std::string describe(const Term& t) {
    switch (t.index()) {
      case 0: return "const:" + num(std::get<term::Const>(t).c);
      case 1: {
        const auto& p = std::get<term::Pow>(t);
        return "pow:" + num(p.alpha) + "," + num(p.scale) + "," + num(p.shift);
      }
      case 2: {
        std::string s = "poly:";
        const auto& c = std::get<term::Poly>(t).coeffs;
        for (std::size_t i = 0; i < c.size(); ++i) s += (i ? "," : "") + num(c[i]);
        return s;
      }
      default: {
        const auto& i = std::get<term::Ind>(t);
        return "ind:" + num(i.a) + "," + num(i.b);
      }
    }
  }

  std::vector<Term> terms_;
};

namespace detail {

inline double parse_number(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) throw CatalogUnsupported("bad number '" + std::string(s) + "'");
  return v;
}

inline std::vector<double> parse_numbers(std::string_view s) {
  std::vector<double> out;
  while (true) {
    const auto comma = s.find(',');
    out.push_back(parse_number(s.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

inline bool starts_term(std::string_view s) {
  for (std::string_view kw : {"const:", "pow:", "poly:", "ind:"})
    if (s.starts_with(kw)) return true;
  return false;
}

}  // namespace detail

// Parses `const:c`, `pow:alpha[,scale][,shift]`, `poly:a0,a1,...`,
// `ind:a,b`, joined by '+'. A '+' only separates terms when a keyword
// follows it, so signed exponents such as 1e+3 are left alone. Numbers go
// through from_chars and round-trip bit-exactly.
inline Integrand parse_integrand(std::string_view desc) {
  std::vector<std::string_view> pieces;
  std::size_t begin = 0;
  for (std::size_t i = 0; i < desc.size(); ++i) {
    if (desc[i] == '+' && detail::starts_term(desc.substr(i + 1))) {
      pieces.push_back(desc.substr(begin, i - begin));
      begin = i + 1;
    }
  }
  pieces.push_back(desc.substr(begin));

  std::vector<Term> terms;
  for (auto p : pieces) {
    const auto colon = p.find(':');
    if (colon == std::string_view::npos) throw CatalogUnsupported(std::string(p));
    const auto kind = p.substr(0, colon);
    const auto args = detail::parse_numbers(p.substr(colon + 1));
    if (kind == "const") {
      if (args.size() != 1) throw CatalogUnsupported("const takes one value");
      terms.emplace_back(term::Const{args[0]});
    } else if (kind == "pow") {
      if (args.empty() || args.size() > 3) throw CatalogUnsupported("pow takes alpha[,scale][,shift]");
      terms.emplace_back(term::Pow{args[0], args.size() > 1 ? args[1] : 1.0, args.size() > 2 ? args[2] : 0.0});
    } else if (kind == "poly") {
      terms.emplace_back(term::Poly{args});
    } else if (kind == "ind") {
      if (args.size() != 2) throw CatalogUnsupported("ind takes a,b");
      terms.emplace_back(term::Ind{args[0], args[1]});
    } else {
      throw CatalogUnsupported("unknown term '" + std::string(kind) + "'");
    }
  }
  return Integrand(std::move(terms));
}

// phi_k for each stage k, with an optional uniform bound |phi_k| <= C.
struct StageIntegrand {
  std::function<Integrand(std::size_t)> at;
  std::optional<double> bound;

  static StageIntegrand fixed(Integrand phi, std::optional<double> c = std::nullopt) {
    return {[phi = std::move(phi)](std::size_t) { return phi; }, c};
  }
};

}  // namespace evoset
