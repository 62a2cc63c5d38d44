#include "chiralkit/oracle.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace chiralkit {
namespace oracle {

namespace {

// Plain row-echelon elimination over Q. Rows are sparse (sorted by column);
// each incoming row is reduced against the recorded pivots left to right and
// either vanishes or contributes a new pivot at its leading column.
class Echelon {
 public:
  // returns the pivot column if the row added to the rank, -1 otherwise
  std::int64_t add_row(std::vector<std::pair<std::int64_t, Rational>> row) {
    for (;;) {
      if (row.empty()) return -1;
      std::int64_t lead = row.front().first;
      auto it = pivots_.find(lead);
      if (it == pivots_.end()) {
        Rational inv = row.front().second;
        for (auto& [c, v] : row) v /= inv;
        pivots_.emplace(lead, std::move(row));
        return lead;
      }
      row = combine(row, it->second, row.front().second);
    }
  }

  std::int64_t rank() const { return static_cast<std::int64_t>(pivots_.size()); }

 private:
  static std::vector<std::pair<std::int64_t, Rational>> combine(
      const std::vector<std::pair<std::int64_t, Rational>>& row,
      const std::vector<std::pair<std::int64_t, Rational>>& pivot, const Rational& factor) {
    std::vector<std::pair<std::int64_t, Rational>> out;
    out.reserve(row.size() + pivot.size());
    std::size_t i = 0, j = 0;
    while (i < row.size() || j < pivot.size()) {
      std::int64_t ci = i < row.size() ? row[i].first : INT64_MAX;
      std::int64_t cj = j < pivot.size() ? pivot[j].first : INT64_MAX;
      std::int64_t c = std::min(ci, cj);
      Rational v = 0;
      if (ci == c) v += row[i++].second;
      if (cj == c) v -= factor * pivot[j++].second;
      if (v != 0) out.emplace_back(c, std::move(v));
    }
    return out;
  }

  std::map<std::int64_t, std::vector<std::pair<std::int64_t, Rational>>> pivots_;
};

std::vector<Exponents> monomials_of_degree(int d) {
  std::vector<Exponents> out;
  Exponents e{};
  auto rec = [&](auto&& self, int pos, std::int64_t rest) -> void {
    if (pos == kRank - 1) {
      e[static_cast<std::size_t>(pos)] = rest;
      out.push_back(e);
      return;
    }
    for (std::int64_t v = 0; v <= rest; ++v) {
      e[static_cast<std::size_t>(pos)] = v;
      self(self, pos + 1, rest - v);
    }
  };
  if (d >= 0) rec(rec, 0, d);
  return out;
}

}  // namespace

JacobianReport jacobian_dims(const std::array<Poly, kRank>& R, int d_max) {
  for (const auto& r : R)
    if (!r.is_zero() && r.degree() != 4)
      throw std::invalid_argument("jacobian_dims: inputs must be homogeneous of degree 4");
  JacobianReport report;
  report.d_max = d_max;
  for (int d = 0; d <= d_max; ++d) {
    auto target = monomials_of_degree(d);
    std::map<Exponents, std::int64_t> index;
    for (std::size_t i = 0; i < target.size(); ++i) index.emplace(target[i], static_cast<std::int64_t>(i));
    Echelon ech;
    if (d >= 4) {
      for (const auto& shift : monomials_of_degree(d - 4)) {
        for (int i = 0; i < kRank; ++i) {
          std::map<std::int64_t, Rational> entries;
          for (const auto& [e, c] : R[static_cast<std::size_t>(i)].terms()) {
            Exponents sum = e;
            for (int k = 0; k < kRank; ++k) sum[static_cast<std::size_t>(k)] += shift[static_cast<std::size_t>(k)];
            entries[index.at(sum)] += c;
          }
          std::vector<std::pair<std::int64_t, Rational>> row;
          for (auto& [c, v] : entries)
            if (v != 0) row.emplace_back(c, v);
          ech.add_row(std::move(row));
        }
      }
    }
    report.dims.push_back(static_cast<std::int64_t>(target.size()) - ech.rank());
  }
  return report;
}

std::string JacobianReport::to_json() const {
  std::ostringstream os;
  os << "{\n  \"d_max\": " << d_max << ",\n  \"dims\": [";
  for (std::size_t i = 0; i < dims.size(); ++i) os << (i ? ", " : "") << dims[i];
  os << "]\n}\n";
  return os.str();
}

namespace {

struct OracleElement {
  MPoint a;
  NPoint b;
  std::uint8_t mask;
};

// independent basis construction: direct pairing test instead of support masks
std::vector<OracleElement> oracle_basis(int t) {
  std::vector<OracleElement> out;
  for (int k = 0; k <= t; ++k) {
    for (const auto& a : enum_graded_K(k))
      for (const auto& b : enum_graded_Kdual(t - k)) {
        if (pairing(a, b) != 0) continue;
        for (std::uint8_t s = 0; s < 32; ++s) out.push_back({a, b, s});
      }
  }
  std::sort(out.begin(), out.end(), [](const OracleElement& x, const OracleElement& y) {
    if (!(x.a == y.a)) return x.a < y.a;
    if (!(x.b == y.b)) return x.b < y.b;
    return x.mask < y.mask;
  });
  return out;
}

std::int64_t oracle_w(const OracleElement& e, Ring ring) {
  std::int64_t k = degree_K(e.a);
  std::int64_t l = degree_Kdual(e.b);
  std::int64_t s = std::popcount(static_cast<unsigned>(e.mask));
  return ring == Ring::A ? k - s - l : l - s - k;
}

int sign_below(std::uint8_t mask, int i) {
  unsigned below = static_cast<unsigned>(mask) & ((1u << i) - 1u);
  return std::popcount(below) % 2 ? -1 : 1;
}

struct ElementLess {
  bool operator()(const OracleElement& x, const OracleElement& y) const {
    if (!(x.a == y.a)) return x.a < y.a;
    if (!(x.b == y.b)) return x.b < y.b;
    return x.mask < y.mask;
  }
};

}  // namespace

GradedDimTable dense_cohomology_dims(const FivePolys& F, const GParams& g, Ring ring, int t_max) {
  if (t_max < 2) throw std::invalid_argument("dense_cohomology_dims: t_max must be >= 2");
  constexpr std::int64_t kCap = 200000;

  std::vector<std::vector<OracleElement>> bases(static_cast<std::size_t>(t_max) + 1);
  for (int t = 0; t <= t_max; ++t) {
    bases[static_cast<std::size_t>(t)] = oracle_basis(t);
    if (static_cast<std::int64_t>(bases[static_cast<std::size_t>(t)].size()) > kCap)
      throw std::invalid_argument("dense_cohomology_dims: basis at degree " + std::to_string(t) +
                                  " exceeds " + std::to_string(kCap) + " elements");
  }

  // ranks per degree, with per-w attribution via the pivot columns
  std::vector<std::map<std::int64_t, std::int64_t>> rank_w(static_cast<std::size_t>(t_max));
  std::vector<std::int64_t> rank_total(static_cast<std::size_t>(t_max), 0);

  for (int t = 0; t <= t_max - 1; ++t) {
    const auto& src = bases[static_cast<std::size_t>(t)];
    const auto& dst = bases[static_cast<std::size_t>(t) + 1];
    std::map<OracleElement, std::int64_t, ElementLess> dst_index;
    for (std::size_t i = 0; i < dst.size(); ++i) dst_index.emplace(dst[i], static_cast<std::int64_t>(i));

    // assemble columns of d_t directly from F and g
    std::vector<std::vector<std::pair<std::int64_t, Rational>>> rows_of(dst.size());
    for (std::size_t cidx = 0; cidx < src.size(); ++cidx) {
      const auto& e = src[cidx];
      std::map<std::int64_t, Rational> col;
      auto add = [&](const OracleElement& target, const Rational& v) {
        if (v == 0) return;
        auto it = dst_index.find(target);
        if (it == dst_index.end()) throw std::logic_error("oracle: image outside basis");
        col[it->second] += v;
      };
      for (int i = 0; i < kRank; ++i) {
        for (const auto& [me, c] : F[i].terms()) {
          MPoint m(me);
          MPoint a2 = e.a + m;
          if (pairing(a2, e.b) != 0) continue;
          if (ring == Ring::A) {
            if (e.mask & (1u << i)) continue;
            add({a2, e.b, static_cast<std::uint8_t>(e.mask | (1u << i))}, c * sign_below(e.mask, i));
          } else {
            if (!(e.mask & (1u << i))) continue;
            add({a2, e.b, static_cast<std::uint8_t>(e.mask & ~(1u << i))}, c * sign_below(e.mask, i));
          }
        }
      }
      for (const auto& [n, gn] : g.values()) {
        if (gn == 0) continue;
        NPoint b2 = e.b + n;
        if (pairing(e.a, b2) != 0) continue;
        if (ring == Ring::A) {
          for (int s = 0; s < kRank; ++s) {
            if (!(e.mask & (1u << s))) continue;
            add({e.a, b2, static_cast<std::uint8_t>(e.mask & ~(1u << s))},
                gn * n.coord(s) * sign_below(e.mask, s));
          }
        } else {
          for (int s = 0; s < kRank; ++s) {
            if (e.mask & (1u << s)) continue;
            add({e.a, b2, static_cast<std::uint8_t>(e.mask | (1u << s))},
                gn * n.coord(s) * sign_below(e.mask, s));
          }
        }
      }
      for (const auto& [r, v] : col)
        if (v != 0) rows_of[static_cast<std::size_t>(r)].emplace_back(static_cast<std::int64_t>(cidx), v);
    }

    // textbook row-echelon over the rows of d_t
    Echelon ech;
    for (auto& row : rows_of) {
      if (row.empty()) continue;
      std::sort(row.begin(), row.end());
      std::int64_t piv_col = ech.add_row(std::move(row));
      if (piv_col >= 0) {
        std::int64_t w = oracle_w(src[static_cast<std::size_t>(piv_col)], ring);
        rank_w[static_cast<std::size_t>(t)][w] += 1;
      }
    }
    rank_total[static_cast<std::size_t>(t)] = ech.rank();
  }

  GradedDimTable table;
  table.ring = ring;
  table.t_max = t_max;
  for (int t = 0; t <= t_max - 1; ++t) {
    std::map<std::int64_t, std::int64_t> block_sizes;
    for (const auto& e : bases[static_cast<std::size_t>(t)]) block_sizes[oracle_w(e, ring)] += 1;
    std::int64_t total = 0;
    for (const auto& [w, size] : block_sizes) {
      std::int64_t rt = rank_w[static_cast<std::size_t>(t)].count(w) ? rank_w[static_cast<std::size_t>(t)][w] : 0;
      std::int64_t rp = (t > 0 && rank_w[static_cast<std::size_t>(t) - 1].count(w))
                            ? rank_w[static_cast<std::size_t>(t) - 1][w]
                            : 0;
      std::int64_t h = size - rt - rp;
      if (h < 0) throw std::logic_error("oracle: negative dimension");
      table.dims[{t, w}] = h;
      total += h;
    }
    // additivity cross-check against the unblocked rank accounting
    std::int64_t unblocked = static_cast<std::int64_t>(bases[static_cast<std::size_t>(t)].size()) -
                             rank_total[static_cast<std::size_t>(t)] -
                             (t > 0 ? rank_total[static_cast<std::size_t>(t) - 1] : 0);
    if (unblocked != total) throw std::logic_error("oracle: per-w dims do not add up");
    table.totals[t] = total;
  }
  std::set<std::int64_t> all_w;
  for (const auto& [tw, d] : table.dims) all_w.insert(tw.second);
  for (std::int64_t w : all_w) {
    auto dim_at = [&](int t) {
      auto it = table.dims.find({t, w});
      return it == table.dims.end() ? std::int64_t{0} : it->second;
    };
    table.stabilized[w] = (dim_at(t_max - 1) == 0 && dim_at(t_max - 2) == 0);
  }
  return table;
}

}  // namespace oracle
}  // namespace chiralkit
