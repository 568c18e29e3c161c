#pragma once

#include "bfvcalc/errors.hpp"
#include "bfvcalc/rational.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace bfvcalc {

struct Generator {
  std::string name;
  int degree = 0;
};

inline bool gen_is_odd(const Generator& g) { return g.degree & 1; }

// Registry of graded generators. Ids are dense and their order is the
// canonical factor order used inside monomials and in serialized output.
class GenTable {
 public:
  int add(std::string name, int degree) {
    if (by_name_.count(name))
      throw ArgumentError("duplicate generator name: " + name);
    int id = static_cast<int>(gens_.size());
    by_name_.emplace(name, id);
    gens_.push_back({std::move(name), degree});
    return id;
  }

  int id_of(const std::string& name) const {
    auto it = by_name_.find(name);
    return it == by_name_.end() ? -1 : it->second;
  }
  const Generator& gen(int id) const { return gens_.at(id); }
  int size() const { return static_cast<int>(gens_.size()); }

 private:
  std::vector<Generator> gens_;
  std::map<std::string, int> by_name_;
};

using GenTablePtr = std::shared_ptr<const GenTable>;

// Factors sorted by generator id, exponents >= 1, odd generators never
// exceed exponent 1 (their square is zero and such terms are dropped).
struct Monomial {
  std::vector<std::pair<int, int>> f;  // (generator id, exponent)

  bool operator==(const Monomial&) const = default;
  bool operator<(const Monomial& o) const { return f < o.f; }

  bool empty() const { return f.empty(); }
  int exponent_of(int id) const {
    auto it = std::lower_bound(f.begin(), f.end(), std::make_pair(id, 0));
    return (it != f.end() && it->first == id) ? it->second : 0;
  }
};

inline int mono_degree(const Monomial& m, const GenTable& t) {
  int d = 0;
  for (auto [id, e] : m.f) d += t.gen(id).degree * e;
  return d;
}

inline int mono_parity(const Monomial& m, const GenTable& t) {
  return mono_degree(m, t) & 1;
}

// Multiply two monomials, tracking the Koszul sign of interleaving the
// factors of `b` into `a`. Returns nullopt when an odd generator squares.
inline std::optional<std::pair<Monomial, int>> mono_mul(const Monomial& a,
                                                        const Monomial& b,
                                                        const GenTable& t) {
  // Parity of the tail a[i..] that factors of b must cross.
  std::vector<int> tail_parity(a.f.size() + 1, 0);
  for (int i = static_cast<int>(a.f.size()) - 1; i >= 0; --i) {
    int p = (t.gen(a.f[i].first).degree * a.f[i].second) & 1;
    tail_parity[i] = tail_parity[i + 1] ^ p;
  }
  Monomial out;
  out.f.reserve(a.f.size() + b.f.size());
  int sign = 1;
  size_t i = 0, j = 0;
  while (i < a.f.size() || j < b.f.size()) {
    if (j == b.f.size() || (i < a.f.size() && a.f[i].first < b.f[j].first)) {
      out.f.push_back(a.f[i++]);
    } else if (i == a.f.size() || a.f[i].first > b.f[j].first) {
      int p = (t.gen(b.f[j].first).degree * b.f[j].second) & 1;
      if (p && tail_parity[i]) sign = -sign;
      out.f.push_back(b.f[j++]);
    } else {
      int id = a.f[i].first;
      if (gen_is_odd(t.gen(id))) return std::nullopt;  // even crossing, then square
      out.f.emplace_back(id, a.f[i].second + b.f[j].second);
      ++i;
      ++j;
    }
  }
  return std::make_pair(std::move(out), sign);
}

// Polynomial in graded commuting/anticommuting generators over Rational.
// Terms with coefficient zero are never stored, so is_zero() and == are
// structural. A default-constructed value is the zero of no table and may
// be added to anything.
class SuperPoly {
 public:
  SuperPoly() = default;
  static SuperPoly zero(GenTablePtr t) { return SuperPoly(std::move(t)); }
  static SuperPoly constant(GenTablePtr t, const Rational& c) {
    SuperPoly p(std::move(t));
    if (c != 0) p.terms_[Monomial{}] = c;
    return p;
  }
  static SuperPoly generator(GenTablePtr t, int id) {
    if (!t || id < 0 || id >= t->size())
      throw ArgumentError("generator id out of range");
    SuperPoly p(t);
    p.terms_[Monomial{{{id, 1}}}] = 1;
    return p;
  }

  const GenTablePtr& table() const { return table_; }
  const std::map<Monomial, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  size_t term_count() const { return terms_.size(); }

  Rational coeff(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  bool operator==(const SuperPoly& o) const {
    if (is_zero() && o.is_zero()) return true;
    return terms_ == o.terms_;
  }
  bool operator!=(const SuperPoly& o) const { return !(*this == o); }

  SuperPoly& operator+=(const SuperPoly& o) {
    adopt_table(o);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  SuperPoly& operator-=(const SuperPoly& o) {
    adopt_table(o);
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  friend SuperPoly operator+(SuperPoly a, const SuperPoly& b) { return a += b; }
  friend SuperPoly operator-(SuperPoly a, const SuperPoly& b) { return a -= b; }
  SuperPoly operator-() const {
    SuperPoly r(*this);
    for (auto& [m, c] : r.terms_) c = -c;
    return r;
  }

  SuperPoly& operator*=(const Rational& s) {
    if (s == 0) {
      terms_.clear();
    } else {
      for (auto& [m, c] : terms_) c *= s;
    }
    return *this;
  }
  friend SuperPoly operator*(const Rational& s, SuperPoly p) { return p *= s; }
  friend SuperPoly operator*(SuperPoly p, const Rational& s) { return p *= s; }

  friend SuperPoly operator*(const SuperPoly& a, const SuperPoly& b) {
    if (a.is_zero() || b.is_zero()) return SuperPoly(a.table_ ? a.table_ : b.table_);
    check_same_table(a, b);
    SuperPoly r(a.table_);
    const GenTable& t = *a.table_;
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) {
        auto prod = mono_mul(ma, mb, t);
        if (!prod) continue;
        r.add_term(prod->first, ca * cb * prod->second);
      }
    return r;
  }

  // Left derivative: on a product, d(uv) = du v + (-1)^{|u||g|} u dv,
  // realized by signing each occurrence with the parity it crosses.
  SuperPoly partial(int id) const {
    require_table();
    const GenTable& t = *table_;
    const int gpar = t.gen(id).degree & 1;
    SuperPoly r(table_);
    for (const auto& [m, c] : terms_) {
      int prefix_parity = 0;
      for (size_t k = 0; k < m.f.size(); ++k) {
        auto [g, e] = m.f[k];
        if (g == id) {
          int sign = (gpar && prefix_parity) ? -1 : 1;
          Monomial dm = m;
          if (e == 1)
            dm.f.erase(dm.f.begin() + static_cast<long>(k));
          else
            dm.f[k].second = e - 1;
          r.add_term(dm, c * e * sign);
          break;  // sorted: id occurs once
        }
        prefix_parity ^= (t.gen(g).degree * e) & 1;
      }
    }
    return r;
  }

  // Drop every term containing any listed generator.
  SuperPoly set_zero(const std::vector<int>& ids) const {
    require_table();
    std::vector<char> kill(table_->size(), 0);
    for (int id : ids) kill.at(id) = 1;
    SuperPoly r(table_);
    for (const auto& [m, c] : terms_) {
      bool dead = false;
      for (auto [g, e] : m.f)
        if (kill[g]) {
          dead = true;
          break;
        }
      if (!dead) r.terms_.emplace(m, c);
    }
    return r;
  }

  // Algebra morphism determined by generator images. Every image must be
  // parity-homogeneous of the generator's parity (or zero); that is what
  // keeps the Koszul bookkeeping of the ambient multiplication valid.
  SuperPoly substitute(const std::map<int, SuperPoly>& images) const {
    require_table();
    for (const auto& [id, img] : images) {
      int want = table_->gen(id).degree & 1;
      for (const auto& [m, c] : img.terms())
        if (mono_parity(m, *table_) != want)
          throw ArgumentError("substitution image changes parity of " +
                              table_->gen(id).name);
    }
    SuperPoly r(table_);
    for (const auto& [m, c] : terms_) {
      SuperPoly acc = SuperPoly::constant(table_, c);
      for (auto [g, e] : m.f) {
        auto it = images.find(g);
        const SuperPoly base =
            it == images.end() ? SuperPoly::generator(table_, g) : it->second;
        for (int k = 0; k < e; ++k) acc = acc * base;
      }
      r += acc;
    }
    return r;
  }

  // Homogeneous component of the given total degree.
  SuperPoly component(int degree) const {
    require_table();
    SuperPoly r(table_);
    for (const auto& [m, c] : terms_)
      if (mono_degree(m, *table_) == degree) r.terms_.emplace(m, c);
    return r;
  }

  bool is_homogeneous(int* degree_out = nullptr) const {
    if (is_zero()) return true;
    require_table();
    int d = mono_degree(terms_.begin()->first, *table_);
    for (const auto& [m, c] : terms_)
      if (mono_degree(m, *table_) != d) return false;
    if (degree_out) *degree_out = d;
    return true;
  }

  std::string str() const;

  void add_term(const Monomial& m, const Rational& c) {
    if (c == 0) return;
    auto [it, fresh] = terms_.try_emplace(m, c);
    if (!fresh) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

 private:
  explicit SuperPoly(GenTablePtr t) : table_(std::move(t)) {}

  void require_table() const {
    if (!table_) throw InternalError("operation requires a generator table");
  }
  void adopt_table(const SuperPoly& o) {
    if (!table_) table_ = o.table_;
    else if (o.table_ && o.table_ != table_)
      throw InternalError("mixing polynomials over different tables");
  }
  static void check_same_table(const SuperPoly& a, const SuperPoly& b) {
    if (a.table_ && b.table_ && a.table_ != b.table_)
      throw InternalError("mixing polynomials over different tables");
  }

  GenTablePtr table_;
  std::map<Monomial, Rational> terms_;
};

// Canonical text form: terms sorted by (total degree, factor sequence),
// coefficients 1 omitted, " + " / " - " joiners, "0" for zero.
inline std::string SuperPoly::str() const {
  if (is_zero()) return "0";
  std::vector<std::pair<const Monomial*, const Rational*>> order;
  order.reserve(terms_.size());
  for (const auto& [m, c] : terms_) order.emplace_back(&m, &c);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
    int da = mono_degree(*a.first, *table_), db = mono_degree(*b.first, *table_);
    if (da != db) return da < db;
    return a.first->f < b.first->f;
  });
  std::ostringstream out;
  bool first = true;
  for (auto [m, c] : order) {
    Rational a = *c;
    if (first) {
      if (a < 0) {
        out << "-";
        a = -a;
      }
      first = false;
    } else {
      out << (a < 0 ? " - " : " + ");
      if (a < 0) a = -a;
    }
    bool need_coeff = (a != 1) || m->empty();
    if (need_coeff) out << to_string(a);
    bool need_star = need_coeff;
    for (auto [g, e] : m->f) {
      if (need_star) out << "*";
      out << table_->gen(g).name;
      if (e >= 2) out << "^" << e;
      need_star = true;
    }
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Parser for the same surface syntax str() emits, plus benign variations:
// optional whitespace, explicit "1*" coefficients, exponent 1, signed
// coefficients after the joiners.

namespace detail {

struct PolyLexer {
  const std::string& s;
  size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool eof() {
    skip_ws();
    return pos >= s.size();
  }
  char peek() {
    skip_ws();
    return pos < s.size() ? s[pos] : '\0';
  }
  bool eat(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& msg) {
    throw ArgumentError("parse error at offset " + std::to_string(pos) + ": " + msg);
  }
  std::string number() {
    skip_ws();
    size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == start) fail("expected number");
    return s.substr(start, pos - start);
  }
  std::string name() {
    skip_ws();
    size_t start = pos;
    while (pos < s.size() && std::islower(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == start) fail("expected generator name");
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    return s.substr(start, pos - start);
  }
};

}  // namespace detail

inline SuperPoly parse_poly(GenTablePtr table, const std::string& text) {
  detail::PolyLexer lx{text};
  SuperPoly acc = SuperPoly::zero(table);
  if (lx.eof()) lx.fail("empty polynomial");
  bool negative = lx.eat('-');
  if (!negative) lx.eat('+');
  while (true) {
    // One term: [coeff] factors | coeff.
    SuperPoly term = SuperPoly::constant(table, negative ? -1 : 1);
    bool saw_anything = false;
    char c = lx.peek();
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string num = lx.number();
      std::string lit = num;
      if (lx.eat('/')) lit += "/" + lx.number();
      term *= parse_rational(lit);
      saw_anything = true;
      if (!lx.eat('*')) {
        // bare constant term
        acc += term;
        goto joiner;
      }
    }
    while (true) {
      std::string nm = lx.name();
      int id = table->id_of(nm);
      if (id < 0) lx.fail("unknown generator '" + nm + "'");
      int exp = 1;
      if (lx.eat('^')) exp = std::stoi(lx.number());
      SuperPoly g = SuperPoly::generator(table, id);
      for (int k = 0; k < exp; ++k) term = term * g;
      saw_anything = true;
      if (!lx.eat('*')) break;
    }
    acc += term;
  joiner:
    if (!saw_anything) lx.fail("empty term");
    if (lx.eof()) break;
    if (lx.eat('+')) negative = false;
    else if (lx.eat('-')) negative = true;
    else lx.fail("expected '+' or '-'");
    if (lx.eof()) lx.fail("dangling sign");
  }
  return acc;
}

}  // namespace bfvcalc
