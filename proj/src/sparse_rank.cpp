#include "chiralkit/sparse_rank.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace chiralkit {

namespace {

using Row = std::vector<std::pair<std::int64_t, Integer>>;  // sorted by column

const Integer* row_entry(const Row& r, std::int64_t col) {
  auto it = std::lower_bound(r.begin(), r.end(), col,
                             [](const auto& e, std::int64_t c) { return e.first < c; });
  if (it == r.end() || it->first != col) return nullptr;
  return &it->second;
}

}  // namespace

std::int64_t sparse_rank(const SparseMat& m) {
  // Integer row-major copy with denominators cleared per column.
  std::vector<Row> rows(static_cast<std::size_t>(m.rows));
  for (std::int64_t c = 0; c < m.cols; ++c) {
    const auto& column = m.col[static_cast<std::size_t>(c)];
    if (column.empty()) continue;
    Integer lcm = 1;
    for (const auto& [r, v] : column) {
      Integer den = v.get_den();
      lcm = lcm / gcd(lcm, den) * den;
    }
    for (const auto& [r, v] : column) {
      Integer iv = v.get_num() * (lcm / v.get_den());
      rows[static_cast<std::size_t>(r)].emplace_back(c, std::move(iv));
    }
  }
  // column entries were appended in row order per column; rows need col order
  for (auto& r : rows) std::sort(r.begin(), r.end());

  std::vector<bool> row_alive(rows.size(), true);
  std::vector<std::vector<std::int64_t>> col_rows(static_cast<std::size_t>(m.cols));
  std::vector<std::int64_t> col_count(static_cast<std::size_t>(m.cols), 0);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (const auto& [c, v] : rows[r]) {
      col_rows[static_cast<std::size_t>(c)].push_back(static_cast<std::int64_t>(r));
      ++col_count[static_cast<std::size_t>(c)];
    }

  std::int64_t rank = 0;
  Integer prev_pivot = 1;

  // bucket queue over column counts, revalidated lazily
  std::map<std::int64_t, std::vector<std::int64_t>> buckets;
  for (std::int64_t c = 0; c < m.cols; ++c)
    if (col_count[static_cast<std::size_t>(c)] > 0) buckets[col_count[static_cast<std::size_t>(c)]].push_back(c);

  auto revalidate_col = [&](std::int64_t c) {
    auto& list = col_rows[static_cast<std::size_t>(c)];
    std::vector<std::int64_t> fresh;
    fresh.reserve(list.size());
    for (std::int64_t r : list)
      if (row_alive[static_cast<std::size_t>(r)] && row_entry(rows[static_cast<std::size_t>(r)], c))
        fresh.push_back(r);
    std::sort(fresh.begin(), fresh.end());
    fresh.erase(std::unique(fresh.begin(), fresh.end()), fresh.end());
    list = std::move(fresh);
    col_count[static_cast<std::size_t>(c)] = static_cast<std::int64_t>(list.size());
  };

  while (!buckets.empty()) {
    auto it = buckets.begin();
    if (it->second.empty()) {
      buckets.erase(it);
      continue;
    }
    std::int64_t c = it->second.back();
    it->second.pop_back();
    std::int64_t claimed = it->first;
    revalidate_col(c);
    if (col_count[static_cast<std::size_t>(c)] == 0) continue;
    if (col_count[static_cast<std::size_t>(c)] != claimed) {
      buckets[col_count[static_cast<std::size_t>(c)]].push_back(c);
      continue;
    }

    // pivot row: fewest entries
    auto& candidates = col_rows[static_cast<std::size_t>(c)];
    std::int64_t pr = candidates[0];
    for (std::int64_t r : candidates)
      if (rows[static_cast<std::size_t>(r)].size() < rows[static_cast<std::size_t>(pr)].size()) pr = r;
    const Row prow = rows[static_cast<std::size_t>(pr)];
    const Integer pval = *row_entry(prow, c);

    // Bareiss update: r' = (pval * r - r[c] * prow) / prev_pivot
    for (std::int64_t r : candidates) {
      if (r == pr) continue;
      Row& cur = rows[static_cast<std::size_t>(r)];
      const Integer f = *row_entry(cur, c);
      Row next;
      next.reserve(cur.size() + prow.size());
      std::size_t i = 0, j = 0;
      while (i < cur.size() || j < prow.size()) {
        std::int64_t ci = i < cur.size() ? cur[i].first : INT64_MAX;
        std::int64_t cj = j < prow.size() ? prow[j].first : INT64_MAX;
        std::int64_t cc = std::min(ci, cj);
        Integer v = 0;
        if (ci == cc) v += pval * cur[i++].second;
        if (cj == cc) v -= f * prow[j++].second;
        if (v == 0) continue;
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev_pivot.get_mpz_t());
        if (cc != c) {
          // register fill-in
          if (!row_entry(cur, cc)) {
            col_rows[static_cast<std::size_t>(cc)].push_back(r);
            ++col_count[static_cast<std::size_t>(cc)];
            buckets[col_count[static_cast<std::size_t>(cc)]].push_back(cc);
          }
          next.emplace_back(cc, std::move(v));
        }
      }
      cur = std::move(next);
    }

    row_alive[static_cast<std::size_t>(pr)] = false;
    prev_pivot = pval;
    ++rank;
    col_count[static_cast<std::size_t>(c)] = 0;
    col_rows[static_cast<std::size_t>(c)].clear();
  }
  return rank;
}

bool product_is_zero(const SparseMat& b, const SparseMat& a) {
  if (a.rows != b.cols) throw std::invalid_argument("product_is_zero: dimension mismatch");
  for (std::int64_t c = 0; c < a.cols; ++c) {
    std::map<std::int64_t, Rational> acc;
    for (const auto& [mid, v] : a.col[static_cast<std::size_t>(c)])
      for (const auto& [r, w] : b.col[static_cast<std::size_t>(mid)]) {
        auto [it, inserted] = acc.emplace(r, v * w);
        if (!inserted) it->second += v * w;
      }
    for (const auto& [r, v] : acc)
      if (v != 0) return false;
  }
  return true;
}

}  // namespace chiralkit
