#pragma once

#include "bfvcalc/bfv.hpp"

#include <fstream>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

namespace bfvcalc {

// Parsed model description. Parsing validates shape only; whether the
// structure is Poisson or vanishes on the zero section is a separate
// verdict (check_structure) so that deliberately broken files still load.
// Heap-box the struct before building a BfvSetup from it: the setup keeps a
// pointer to the phase space.
struct LoadedSetup {
  PhaseSpace P;
  SuperPoly pi;
  Connection gamma;
  int eps_order = 3;
  bool has_connection = false;
};

using LoadedSetupPtr = std::unique_ptr<LoadedSetup>;

namespace detail {

[[noreturn]] inline void setup_fail(const std::string& origin, int line,
                                    const std::string& msg) {
  throw ArgumentError(origin + ":" + std::to_string(line) + ": " + msg);
}

inline int setup_int(const std::string& origin, int line,
                     const std::string& text) {
  size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(text, &used);
  } catch (const std::exception&) {
    setup_fail(origin, line, "expected an integer, got '" + text + "'");
  }
  if (used != text.size())
    setup_fail(origin, line, "trailing characters after integer '" + text + "'");
  return v;
}

inline std::string setup_trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split_key(const std::string& key) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : key) {
    if (c == '.') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

}  // namespace detail

// Key=value format, one entry per line, '#' starts a comment.
//   base_dim / fiber_dim     required positive dimensions s, e
//   poisson.<i>.<j>          coefficient of zs_i zs_j, 1 <= i < j <= s+e,
//                            polynomial in the coordinates x1..xs, y1..ye;
//                            z runs through (x1..xs, y1..ye)
//   connection.<a>.<r>.<t>   coefficient Gamma^t_{a r}, a <= s, r,t <= e,
//                            polynomial in x1..xs
//   jet_order_eps            formal order cutoff, default 3
// Duplicate keys and unknown keys are errors, reported with line numbers.
inline LoadedSetupPtr parse_setup_text(const std::string& text,
                                       const std::string& origin = "<memory>") {
  struct Entry {
    int line;
    std::string key, value;
  };
  std::vector<Entry> entries;
  {
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
      ++lineno;
      size_t hash = raw.find('#');
      if (hash != std::string::npos) raw.erase(hash);
      std::string line = detail::setup_trim(raw);
      if (line.empty()) continue;
      size_t eq = line.find('=');
      if (eq == std::string::npos)
        detail::setup_fail(origin, lineno, "expected 'key = value'");
      std::string key = detail::setup_trim(line.substr(0, eq));
      std::string value = detail::setup_trim(line.substr(eq + 1));
      if (key.empty()) detail::setup_fail(origin, lineno, "empty key");
      if (value.empty())
        detail::setup_fail(origin, lineno, "empty value for '" + key + "'");
      entries.push_back({lineno, key, value});
    }
  }

  int s = 0, e = 0, s_line = 0, e_line = 0;
  for (const auto& [line, key, value] : entries) {
    if (key == "base_dim") {
      if (s_line) detail::setup_fail(origin, line, "duplicate base_dim");
      s = detail::setup_int(origin, line, value);
      s_line = line;
    } else if (key == "fiber_dim") {
      if (e_line) detail::setup_fail(origin, line, "duplicate fiber_dim");
      e = detail::setup_int(origin, line, value);
      e_line = line;
    }
  }
  if (!s_line) throw ArgumentError(origin + ": missing base_dim");
  if (!e_line) throw ArgumentError(origin + ": missing fiber_dim");
  if (s < 1) detail::setup_fail(origin, s_line, "base_dim must be positive");
  if (e < 1) detail::setup_fail(origin, e_line, "fiber_dim must be positive");

  auto out = std::make_unique<LoadedSetup>();
  out->P = PhaseSpace::make(s, e);
  const PhaseSpace& P = out->P;
  out->pi = P.zero();

  auto coordinate_poly = [&](int line, const std::string& value,
                             bool base_only) {
    SuperPoly p = P.zero();
    try {
      p = parse_poly(P.table, value);
    } catch (const ArgumentError& err) {
      detail::setup_fail(origin, line, err.what());
    }
    for (const auto& [m, coef] : p.terms())
      for (auto [id, exp] : m.f) {
        GenKind k = P.kind(id);
        if (k == GenKind::base) continue;
        if (k == GenKind::fiber && !base_only) continue;
        detail::setup_fail(origin, line,
                           "generator '" + P.table->gen(id).name +
                               "' is not allowed here");
      }
    return p;
  };

  std::set<std::pair<int, int>> seen_pi;
  std::set<std::array<int, 3>> seen_gamma;
  for (const auto& [line, key, value] : entries) {
    if (key == "base_dim" || key == "fiber_dim") continue;
    auto parts = detail::split_key(key);
    if (parts[0] == "poisson") {
      if (parts.size() != 3)
        detail::setup_fail(origin, line, "poisson keys look like poisson.<i>.<j>");
      int i = detail::setup_int(origin, line, parts[1]);
      int j = detail::setup_int(origin, line, parts[2]);
      if (i < 1 || j < 1 || i > s + e || j > s + e)
        detail::setup_fail(origin, line, "coordinate index out of range 1.." +
                                             std::to_string(s + e));
      if (i >= j)
        detail::setup_fail(origin, line,
                           "poisson indices must satisfy i < j; the matrix is "
                           "determined by its upper triangle");
      if (!seen_pi.insert({i, j}).second)
        detail::setup_fail(origin, line, "duplicate poisson entry " + key);
      SuperPoly coef = coordinate_poly(line, value, false);
      int zi = i <= s ? P.xs(i - 1) : P.ys(i - 1 - s);
      int zj = j <= s ? P.xs(j - 1) : P.ys(j - 1 - s);
      out->pi += coef * P.gen(zi) * P.gen(zj);
    } else if (parts[0] == "connection") {
      if (parts.size() != 4)
        detail::setup_fail(origin, line,
                           "connection keys look like connection.<a>.<r>.<t>");
      int a = detail::setup_int(origin, line, parts[1]);
      int r = detail::setup_int(origin, line, parts[2]);
      int t = detail::setup_int(origin, line, parts[3]);
      if (a < 1 || a > s)
        detail::setup_fail(origin, line, "base index out of range 1.." +
                                             std::to_string(s));
      if (r < 1 || r > e || t < 1 || t > e)
        detail::setup_fail(origin, line, "frame index out of range 1.." +
                                             std::to_string(e));
      if (!seen_gamma.insert({a, r, t}).second)
        detail::setup_fail(origin, line, "duplicate connection entry " + key);
      out->gamma.set(P, a - 1, r - 1, t - 1, coordinate_poly(line, value, true));
      out->has_connection = true;
    } else if (key == "jet_order_eps") {
      int n = detail::setup_int(origin, line, value);
      if (n < 1) detail::setup_fail(origin, line, "jet_order_eps must be >= 1");
      out->eps_order = n;
    } else {
      detail::setup_fail(origin, line, "unknown key '" + key + "'");
    }
  }
  return out;
}

inline LoadedSetupPtr load_setup_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open setup file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_setup_text(buf.str(), path);
}

// Structure verdicts, computed without building the charge so that broken
// inputs still get a full report.
struct StructureReport {
  SuperPoly jacobi_defect;  // zero iff the bivector is Poisson
  // (i, j) 1-based fiber pair -> nonzero restriction to the zero section
  std::vector<std::tuple<int, int, SuperPoly>> section_defects;

  bool poisson() const { return jacobi_defect.is_zero(); }
  bool coisotropic() const { return section_defects.empty(); }
  bool ok() const { return poisson() && coisotropic(); }
};

inline StructureReport check_structure(const LoadedSetup& L) {
  const PhaseSpace& P = L.P;
  StructureReport rep;
  rep.jacobi_defect = sn_bracket(P, L.pi, L.pi);
  std::vector<int> yids;
  for (int j = 0; j < P.e; ++j) yids.push_back(P.y(j));
  for (int i = 0; i < P.e; ++i)
    for (int j = i + 1; j < P.e; ++j) {
      SuperPoly coef =
          L.pi.partial(P.ys(i)).partial(P.ys(j)).set_zero(yids);
      if (!coef.is_zero()) rep.section_defects.emplace_back(i + 1, j + 1, coef);
    }
  return rep;
}

// Serialization matching the parser. Canonical: entries sorted, indices
// 1-based, polynomials in the canonical term order.
inline std::string setup_to_text(const LoadedSetup& L) {
  const PhaseSpace& P = L.P;
  std::ostringstream out;
  out << "base_dim = " << P.s << "\n";
  out << "fiber_dim = " << P.e << "\n";
  // xs and ys ids are laid out consecutively, so one offset covers both.
  auto z_index = [&P](int id) { return id - P.s - 3 * P.e + 1; };
  std::vector<int> mom;
  for (int a = 0; a < P.s; ++a) mom.push_back(P.xs(a));
  for (int j = 0; j < P.e; ++j) mom.push_back(P.ys(j));
  for (size_t u = 0; u < mom.size(); ++u)
    for (size_t v = u + 1; v < mom.size(); ++v) {
      SuperPoly coef = L.pi.partial(mom[u]).partial(mom[v]);
      if (coef.is_zero()) continue;
      out << "poisson." << z_index(mom[u]) << "." << z_index(mom[v]) << " = "
          << coef.str() << "\n";
    }
  for (const auto& [key, value] : L.gamma.coef)
    out << "connection." << key[0] + 1 << "." << key[1] + 1 << "." << key[2] + 1
        << " = " << value.str() << "\n";
  if (L.eps_order != 3) out << "jet_order_eps = " << L.eps_order << "\n";
  return out.str();
}

}  // namespace bfvcalc
