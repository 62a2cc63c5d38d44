#include "chiralkit/lattice.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace chiralkit {

namespace {

std::int64_t mod5(std::int64_t x) {
  std::int64_t r = x % 5;
  return r < 0 ? r + 5 : r;
}

std::string vec_str(const IVec& v) {
  std::string s = "(";
  for (int i = 0; i < kRank; ++i) s += std::to_string(v[static_cast<std::size_t>(i)]) + (i + 1 < kRank ? "," : ")");
  return s;
}

}  // namespace

MPoint::MPoint(const IVec& coords) : c_(coords) {
  if (mod5(coord_sum()) != 0)
    throw std::invalid_argument("not in M (coordinate sum not divisible by 5): " + vec_str(coords));
}

std::int64_t MPoint::coord_sum() const {
  std::int64_t s = 0;
  for (auto x : c_) s += x;
  return s;
}

MPoint operator+(const MPoint& a, const MPoint& b) {
  IVec c;
  for (std::size_t i = 0; i < kRank; ++i) c[i] = a.c_[i] + b.c_[i];
  return MPoint(c);
}

NPoint::NPoint(const IVec& numerators) : n_(numerators) {
  std::int64_t r = mod5(n_[0]);
  for (auto x : n_)
    if (mod5(x) != r)
      throw std::invalid_argument("not in N (numerators have mixed residues mod 5): " + vec_str(numerators));
}

NPoint NPoint::from_integer_vector(const IVec& v) {
  IVec n;
  for (std::size_t i = 0; i < kRank; ++i) n[i] = 5 * v[i];
  return NPoint(n);
}

std::int64_t NPoint::numerator_sum() const {
  std::int64_t s = 0;
  for (auto x : n_) s += x;
  return s;
}

bool NPoint::in_dual_cone() const {
  return std::all_of(n_.begin(), n_.end(), [](std::int64_t x) { return x >= 0; });
}

NPoint operator+(const NPoint& a, const NPoint& b) {
  IVec n;
  for (std::size_t i = 0; i < kRank; ++i) n[i] = a.n_[i] + b.n_[i];
  return NPoint(n);
}

MQPoint::MQPoint(const MPoint& m) {
  for (int i = 0; i < kRank; ++i) c_[static_cast<std::size_t>(i)] = Rational(m[i]);
}

MQPoint MQPoint::unit(int i) {
  QVec q{Rational(0), Rational(0), Rational(0), Rational(0), Rational(0)};
  q[static_cast<std::size_t>(i)] = 1;
  return MQPoint(std::move(q));
}

Rational pairing(const MPoint& m, const NPoint& n) {
  Integer s = 0;
  for (int i = 0; i < kRank; ++i) s += Integer(m[i]) * n.numerators()[static_cast<std::size_t>(i)];
  Rational q(s, 5);
  q.canonicalize();
  return q;
}

Rational pairing(const MQPoint& m, const NPoint& n) {
  Rational s = 0;
  for (int i = 0; i < kRank; ++i) s += m[i] * n.coord(i);
  return s;
}

std::int64_t pairing_int(const MPoint& m, const NPoint& n) { return to_int64(pairing(m, n)); }

std::int64_t degree_K(const MPoint& a) {
  std::int64_t s = a.coord_sum();
  if (s % 5 != 0) throw std::logic_error("degree_K: coordinate sum not divisible by 5");
  return s / 5;
}

std::int64_t degree_Kdual(const NPoint& b) {
  std::int64_t s = b.numerator_sum();
  if (s % 5 != 0) throw std::logic_error("degree_Kdual: numerator sum not divisible by 5");
  return s / 5;
}

LatticeEnv::LatticeEnv()
    : deg_(IVec{1, 1, 1, 1, 1}), degv_(IVec{1, 1, 1, 1, 1}) {
  for (int i = 0; i < kRank; ++i) {
    IVec e{0, 0, 0, 0, 0};
    e[static_cast<std::size_t>(i)] = 5;
    vertices_.emplace_back(e);
    dual_.push_back(MQPoint::unit(i));
  }
}

const LatticeEnv& lattice_env() {
  static const LatticeEnv env;
  return env;
}

std::vector<MPoint> enum_graded_K(int k) {
  if (k < 0) throw std::invalid_argument("enum_graded_K: negative degree");
  std::vector<MPoint> out;
  IVec c{};
  // Lexicographic: leftmost coordinate varies slowest.
  auto rec = [&](auto&& self, int pos, std::int64_t rest) -> void {
    if (pos == kRank - 1) {
      c[static_cast<std::size_t>(pos)] = rest;
      out.emplace_back(c);
      return;
    }
    for (std::int64_t v = 0; v <= rest; ++v) {
      c[static_cast<std::size_t>(pos)] = v;
      self(self, pos + 1, rest - v);
    }
  };
  rec(rec, 0, 5LL * k);
  return out;
}

std::vector<NPoint> enum_graded_Kdual(int l) {
  if (l < 0) throw std::invalid_argument("enum_graded_Kdual: negative degree");
  std::vector<NPoint> out;
  IVec n{};
  std::int64_t total = 5LL * l;
  // Numerators all congruent to a common residue r mod 5 and summing to 5l.
  auto rec = [&](auto&& self, int pos, std::int64_t rest, std::int64_t r) -> void {
    if (pos == kRank - 1) {
      if (rest >= 0 && rest % 5 == r % 5) {
        n[static_cast<std::size_t>(pos)] = rest;
        out.emplace_back(n);
      }
      return;
    }
    for (std::int64_t v = r; v <= rest; v += 5) {
      n[static_cast<std::size_t>(pos)] = v;
      self(self, pos + 1, rest - v, r);
    }
  };
  for (std::int64_t r = 0; r < 5; ++r) rec(rec, 0, total, r);
  std::sort(out.begin(), out.end(),
            [](const NPoint& a, const NPoint& b) { return a.numerators() < b.numerators(); });
  return out;
}

std::vector<int> argmin_coords(const NPoint& n) {
  std::int64_t mn = *std::min_element(n.numerators().begin(), n.numerators().end());
  std::vector<int> idx;
  for (int i = 0; i < kRank; ++i)
    if (n.numerators()[static_cast<std::size_t>(i)] == mn) idx.push_back(i);
  return idx;
}

bool same_cone(const NPoint& n1, const NPoint& n2) {
  if (!n1.in_dual_cone() || !n2.in_dual_cone())
    throw std::invalid_argument("same_cone: point outside K^v");
  auto a1 = argmin_coords(n1);
  auto a2 = argmin_coords(n2);
  for (int i : a1)
    if (std::find(a2.begin(), a2.end(), i) != a2.end()) return true;
  return false;
}

}  // namespace chiralkit
