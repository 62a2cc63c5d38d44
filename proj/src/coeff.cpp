#include "chiralkit/coeff.hpp"

#include <algorithm>
#include <deque>
#include <mutex>
#include <stdexcept>

namespace chiralkit {

namespace {

struct SymbolInfo {
  std::string name;
  std::set<int> depends;
  bool invertible;
};

std::mutex g_symbols_mutex;
// deque: element references stay valid while the table grows, and entries are
// immutable once inserted, so readers only need the lock for the lookup.
std::deque<SymbolInfo>& symbol_table() {
  static std::deque<SymbolInfo> table;
  return table;
}

const SymbolInfo& info(int id) {
  std::lock_guard<std::mutex> lock(g_symbols_mutex);
  return symbol_table().at(static_cast<std::size_t>(id));
}

}  // namespace

int declare_symbol(const std::string& name, const std::set<int>& depends, bool invertible) {
  std::lock_guard<std::mutex> lock(g_symbols_mutex);
  auto& table = symbol_table();
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (table[i].name == name) {
      if (table[i].depends != depends || table[i].invertible != invertible)
        throw std::invalid_argument("symbol '" + name + "' redeclared with different properties");
      return static_cast<int>(i);
    }
  }
  table.push_back(SymbolInfo{name, depends, invertible});
  return static_cast<int>(table.size() - 1);
}

const std::string& symbol_name(int id) { return info(id).name; }
bool symbol_invertible(int id) { return info(id).invertible; }
const std::set<int>& symbol_depends(int id) { return info(id).depends; }

CoeffFn::CoeffFn(const Rational& c) {
  if (c != 0) terms_.emplace(Monomial{}, c);
}

CoeffFn CoeffFn::coordinate(int j) {
  CoeffFn f;
  f.terms_.emplace(Monomial{{Atom{Atom::Kind::Coordinate, j, {}}, 1}}, Rational(1));
  return f;
}

CoeffFn CoeffFn::symbol(int id) { return symbol_pow(id, 1); }

CoeffFn CoeffFn::symbol_pow(int id, int exponent) {
  if (exponent < 0 && !symbol_invertible(id))
    throw std::invalid_argument("symbol '" + symbol_name(id) + "' is not invertible");
  CoeffFn f;
  if (exponent == 0) return CoeffFn(Rational(1));
  f.terms_.emplace(Monomial{{Atom{Atom::Kind::Function, id, {}}, exponent}}, Rational(1));
  return f;
}

bool CoeffFn::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
}

Rational CoeffFn::constant_value() const {
  if (terms_.empty()) return Rational(0);
  if (!is_constant()) throw std::runtime_error("coefficient is not constant: " + str());
  return terms_.begin()->second;
}

void CoeffFn::add(const Monomial& m, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

CoeffFn operator+(const CoeffFn& a, const CoeffFn& b) {
  CoeffFn out = a;
  out += b;
  return out;
}

CoeffFn& CoeffFn::operator+=(const CoeffFn& o) {
  for (const auto& [m, c] : o.terms_) add(m, c);
  return *this;
}

CoeffFn operator-(const CoeffFn& a, const CoeffFn& b) { return a + (-b); }

CoeffFn CoeffFn::operator-() const {
  CoeffFn out;
  for (const auto& [m, c] : terms_) out.terms_.emplace(m, -c);
  return out;
}

CoeffFn operator*(const CoeffFn& a, const CoeffFn& b) {
  CoeffFn out;
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) {
      CoeffFn::Monomial m = ma;
      for (const auto& [atom, e] : mb) {
        auto [it, inserted] = m.emplace(atom, e);
        if (!inserted) {
          it->second += e;
          if (it->second == 0) m.erase(it);
        }
      }
      out.add(m, ca * cb);
    }
  return out;
}

CoeffFn& CoeffFn::operator*=(const CoeffFn& o) {
  *this = *this * o;
  return *this;
}

CoeffFn CoeffFn::derivative(int j) const {
  CoeffFn out;
  for (const auto& [mono, c] : terms_) {
    for (const auto& [atom, e] : mono) {
      // d_j(atom^e) * rest
      CoeffFn datom;
      if (atom.kind == Atom::Kind::Coordinate) {
        if (atom.index != j) continue;
        datom = CoeffFn(Rational(1));
      } else {
        const auto& dep = symbol_depends(atom.index);
        if (!dep.count(j)) continue;
        Atom d = atom;
        d.derivs.insert(std::upper_bound(d.derivs.begin(), d.derivs.end(), j), j);
        CoeffFn f;
        f.terms_.emplace(Monomial{{d, 1}}, Rational(1));
        datom = f;
      }
      Monomial rest = mono;
      auto it = rest.find(atom);
      it->second -= 1;
      if (it->second == 0) rest.erase(it);
      CoeffFn restf;
      restf.terms_.emplace(rest, c * Rational(e));
      out += restf * datom;
    }
  }
  return out;
}

std::set<int> CoeffFn::dependency_coords() const {
  std::set<int> coords;
  for (const auto& [mono, c] : terms_)
    for (const auto& [atom, e] : mono) {
      if (atom.kind == Atom::Kind::Coordinate)
        coords.insert(atom.index);
      else
        for (int j : symbol_depends(atom.index)) coords.insert(j);
    }
  return coords;
}

std::string CoeffFn::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [mono, c] : terms_) {
    std::string piece;
    if (c == -1 && !mono.empty())
      piece = "-";
    else if (c != 1 || mono.empty())
      piece = rational_to_string(c) + (mono.empty() ? "" : " ");
    for (const auto& [atom, e] : mono) {
      std::string a;
      for (auto it = atom.derivs.rbegin(); it != atom.derivs.rend(); ++it) a += "d" + std::to_string(*it);
      a += atom.kind == Atom::Kind::Coordinate ? "y" + std::to_string(atom.index) : symbol_name(atom.index);
      if (e != 1) a += "^" + std::to_string(e);
      piece += a + " ";
    }
    while (!piece.empty() && piece.back() == ' ') piece.pop_back();
    if (!first && piece[0] != '-') out += " + ";
    if (!first && piece[0] == '-') {
      out += " - ";
      piece = piece.substr(1);
    }
    out += piece;
    first = false;
  }
  return out;
}

}  // namespace chiralkit
