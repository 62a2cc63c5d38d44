#include "chiralkit/chiral_complex.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace chiralkit {

namespace {

constexpr int kFieldBits = 12;
constexpr std::int64_t kFieldMax = (1 << kFieldBits) - 1;

int popcount8(std::uint8_t m) { return std::popcount(static_cast<unsigned>(m)); }

// sign of inserting/removing index i against mask S: (-1)^{#{j in S : j < i}}
int exterior_sign(std::uint8_t mask, int i) {
  unsigned below = static_cast<unsigned>(mask) & ((1u << i) - 1u);
  return std::popcount(below) % 2 ? -1 : 1;
}

std::uint8_t support_mask_m(const MPoint& a) {
  std::uint8_t m = 0;
  for (int i = 0; i < kRank; ++i)
    if (a[i] > 0) m |= static_cast<std::uint8_t>(1u << i);
  return m;
}

std::uint8_t support_mask_n(const NPoint& b) {
  std::uint8_t m = 0;
  for (int i = 0; i < kRank; ++i)
    if (b.numerators()[static_cast<std::size_t>(i)] > 0) m |= static_cast<std::uint8_t>(1u << i);
  return m;
}

}  // namespace

BasisKey encode_basis(const ChiralBasisElement& e) {
  BasisKey key = 0;
  for (int i = 0; i < kRank; ++i) {
    std::int64_t v = e.a[i];
    if (v < 0 || v > kFieldMax) throw std::invalid_argument("basis key: coordinate out of range");
    key = (key << kFieldBits) | static_cast<BasisKey>(v);
  }
  for (int i = 0; i < kRank; ++i) {
    std::int64_t v = e.b.numerators()[static_cast<std::size_t>(i)];
    if (v < 0 || v > kFieldMax) throw std::invalid_argument("basis key: numerator out of range");
    key = (key << kFieldBits) | static_cast<BasisKey>(v);
  }
  key = (key << 5) | static_cast<BasisKey>(e.exterior_mask);
  return key;
}

ChiralBasisElement decode_basis(BasisKey key) {
  std::uint8_t mask = static_cast<std::uint8_t>(key & 0x1f);
  key >>= 5;
  IVec bnum{}, acoord{};
  for (int i = kRank - 1; i >= 0; --i) {
    bnum[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(key & kFieldMax);
    key >>= kFieldBits;
  }
  for (int i = kRank - 1; i >= 0; --i) {
    acoord[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(key & kFieldMax);
    key >>= kFieldBits;
  }
  return ChiralBasisElement{MPoint(acoord), NPoint(bnum), mask};
}

namespace {

std::vector<BasisKey> build_basis(int t) {
  std::vector<BasisKey> keys;
  for (int k = 0; k <= t; ++k) {
    int l = t - k;
    auto as = enum_graded_K(k);
    auto bs = enum_graded_Kdual(l);
    std::vector<std::pair<std::uint8_t, BasisKey>> bparts;  // (support, partial key)
    bparts.reserve(bs.size());
    for (const auto& b : bs) {
      BasisKey part = 0;
      for (int i = 0; i < kRank; ++i)
        part = (part << kFieldBits) | static_cast<BasisKey>(b.numerators()[static_cast<std::size_t>(i)]);
      bparts.emplace_back(support_mask_n(b), part);
    }
    for (const auto& a : as) {
      std::uint8_t amask = support_mask_m(a);
      BasisKey apart = 0;
      for (int i = 0; i < kRank; ++i) apart = (apart << kFieldBits) | static_cast<BasisKey>(a[i]);
      for (const auto& [bmask, bpart] : bparts) {
        if (amask & bmask) continue;  // a.b = 0 iff disjoint supports (both cones)
        BasisKey base = ((apart << (kRank * kFieldBits)) | bpart) << 5;
        for (std::uint8_t s = 0; s < 32; ++s) keys.push_back(base | s);
      }
    }
  }
  std::sort(keys.begin(), keys.end());
  return keys;
}

std::mutex g_basis_mutex;
std::map<int, std::vector<BasisKey>>& basis_cache() {
  static std::map<int, std::vector<BasisKey>> cache;
  return cache;
}

}  // namespace

const std::vector<BasisKey>& basis_keys(int t) {
  if (t < 0) throw std::invalid_argument("basis_keys: negative degree");
  std::lock_guard<std::mutex> lock(g_basis_mutex);
  auto& cache = basis_cache();
  auto it = cache.find(t);
  if (it == cache.end()) it = cache.emplace(t, build_basis(t)).first;
  return it->second;
}

std::int64_t w_charge(const ChiralBasisElement& e, Ring ring) {
  std::int64_t k = degree_K(e.a);
  std::int64_t l = degree_Kdual(e.b);
  std::int64_t s = popcount8(e.exterior_mask);
  return ring == Ring::A ? k - s - l : l - s - k;
}

GradedPiece basis_t(int t, Ring ring) {
  GradedPiece piece;
  piece.t = t;
  for (BasisKey key : basis_keys(t)) {
    piece.basis.push_back(decode_basis(key));
    piece.w.push_back(w_charge(piece.basis.back(), ring));
  }
  return piece;
}

namespace {

// One image entry of the differential on a single basis element.
struct Image {
  BasisKey key;
  Rational coeff;
};

// The differential applied to (a, b, S); entries landing in the positive-
// pairing ideal are dropped. `terms` comes from differential_terms(F, g).
void apply_differential(const ChiralBasisElement& e, const std::vector<DifferentialTerm>& terms,
                        Ring ring, std::vector<Image>& out) {
  out.clear();
  std::uint8_t amaskmask = support_mask_m(e.a);
  std::uint8_t bmask = support_mask_n(e.b);
  for (const auto& term : terms) {
    if (term.kind == DifferentialTerm::Kind::M) {
      // quotient: (a+m).b = m.b must stay zero, i.e. supports stay disjoint
      if (support_mask_m(term.m) & bmask) continue;
      int i = term.fermion_index;
      if (ring == Ring::A) {
        if (e.exterior_mask & (1u << i)) continue;  // wedge by m_i
        ChiralBasisElement target{e.a + term.m, e.b,
                                  static_cast<std::uint8_t>(e.exterior_mask | (1u << i))};
        out.push_back({encode_basis(target), term.coefficient * exterior_sign(e.exterior_mask, i)});
      } else {
        if (!(e.exterior_mask & (1u << i))) continue;  // contraction by m_i
        ChiralBasisElement target{e.a + term.m, e.b,
                                  static_cast<std::uint8_t>(e.exterior_mask & ~(1u << i))};
        out.push_back({encode_basis(target), term.coefficient * exterior_sign(e.exterior_mask, i)});
      }
    } else {
      if (support_mask_n(term.n) & amaskmask) continue;  // a.(b+n) = a.n must stay zero
      NPoint b2 = e.b + term.n;
      if (ring == Ring::A) {
        // contraction by n: sum over s in S with coefficient m_s.n
        for (int s = 0; s < kRank; ++s) {
          if (!(e.exterior_mask & (1u << s))) continue;
          Rational c = term.n.coord(s);
          if (c == 0) continue;
          ChiralBasisElement target{e.a, b2, static_cast<std::uint8_t>(e.exterior_mask & ~(1u << s))};
          out.push_back({encode_basis(target),
                         term.coefficient * c * exterior_sign(e.exterior_mask, s)});
        }
      } else {
        // wedge by n = sum_k (m_k.n) v_k
        for (int k = 0; k < kRank; ++k) {
          if (e.exterior_mask & (1u << k)) continue;
          Rational c = term.n.coord(k);
          if (c == 0) continue;
          ChiralBasisElement target{e.a, b2, static_cast<std::uint8_t>(e.exterior_mask | (1u << k))};
          out.push_back({encode_basis(target),
                         term.coefficient * c * exterior_sign(e.exterior_mask, k)});
        }
      }
    }
  }
}

std::int64_t key_index(const std::vector<BasisKey>& keys, BasisKey key) {
  auto it = std::lower_bound(keys.begin(), keys.end(), key);
  if (it == keys.end() || *it != key) throw std::logic_error("differential image outside basis");
  return static_cast<std::int64_t>(it - keys.begin());
}

}  // namespace

SparseMat differential_matrix(int t, const FivePolys& F, const GParams& g, Ring ring) {
  const auto& src = basis_keys(t);
  const auto& dst = basis_keys(t + 1);
  auto terms = differential_terms(F, g);
  SparseMat m;
  m.rows = static_cast<std::int64_t>(dst.size());
  m.cols = static_cast<std::int64_t>(src.size());
  m.col.resize(src.size());
  std::vector<Image> images;
  for (std::size_t cidx = 0; cidx < src.size(); ++cidx) {
    ChiralBasisElement e = decode_basis(src[cidx]);
    std::int64_t w_src = w_charge(e, ring);
    apply_differential(e, terms, ring, images);
    std::map<std::int64_t, Rational> merged;
    for (const auto& img : images) {
      std::int64_t r = key_index(dst, img.key);
      if (w_charge(decode_basis(img.key), ring) != w_src)
        throw std::logic_error("differential does not conserve w");
      auto [it, inserted] = merged.emplace(r, img.coeff);
      if (!inserted) it->second += img.coeff;
    }
    auto& colv = m.col[cidx];
    for (auto& [r, v] : merged)
      if (v != 0) colv.emplace_back(r, std::move(v));
  }
  return m;
}

bool d_squared_zero(const FivePolys& F, const GParams& g, Ring ring, int t_max) {
  if (t_max < 2) throw std::invalid_argument("d_squared_zero: t_max must be >= 2");
  SparseMat prev = differential_matrix(0, F, g, ring);
  for (int t = 1; t <= t_max - 1; ++t) {
    SparseMat next = differential_matrix(t, F, g, ring);
    if (!product_is_zero(next, prev)) return false;
    prev = std::move(next);
  }
  return true;
}

namespace {

struct Block {
  int t;
  std::int64_t w;
  std::vector<std::int64_t> indices;  // positions in basis_keys(t)
};

// Per-(t, w) column blocks of d_t, in block-local row/col coordinates.
SparseMat block_matrix(const Block& src_block, const std::vector<BasisKey>& src,
                       const std::vector<BasisKey>& dst,
                       const std::vector<std::int64_t>& dst_positions,
                       const std::vector<DifferentialTerm>& terms, Ring ring) {
  SparseMat m;
  m.cols = static_cast<std::int64_t>(src_block.indices.size());
  m.rows = 0;  // grows with block-local row ids
  m.col.resize(src_block.indices.size());
  std::vector<Image> images;
  for (std::size_t c = 0; c < src_block.indices.size(); ++c) {
    ChiralBasisElement e = decode_basis(src[static_cast<std::size_t>(src_block.indices[c])]);
    apply_differential(e, terms, ring, images);
    std::map<std::int64_t, Rational> merged;
    for (const auto& img : images) {
      std::int64_t r = dst_positions[static_cast<std::size_t>(key_index(dst, img.key))];
      auto [it, inserted] = merged.emplace(r, img.coeff);
      if (!inserted) it->second += img.coeff;
    }
    auto& colv = m.col[c];
    for (auto& [r, v] : merged)
      if (v != 0) {
        colv.emplace_back(r, std::move(v));
        m.rows = std::max(m.rows, r + 1);
      }
  }
  return m;
}

}  // namespace

GradedDimTable cohomology_dims(const FivePolys& F, const GParams& g, Ring ring, int t_max,
                               int threads) {
  if (t_max < 2) throw std::invalid_argument("cohomology_dims: t_max must be >= 2");
  if (threads < 1) threads = 1;
  auto terms = differential_terms(F, g);

  // block decomposition of every degree
  std::vector<std::map<std::int64_t, Block>> blocks(static_cast<std::size_t>(t_max) + 1);
  for (int t = 0; t <= t_max; ++t) {
    const auto& keys = basis_keys(t);
    for (std::size_t i = 0; i < keys.size(); ++i) {
      std::int64_t w = w_charge(decode_basis(keys[i]), ring);
      auto [it, inserted] = blocks[static_cast<std::size_t>(t)].try_emplace(w);
      if (inserted) {
        it->second.t = t;
        it->second.w = w;
      }
      it->second.indices.push_back(static_cast<std::int64_t>(i));
    }
  }
  // block-local row positions per degree: position of basis index within its block
  std::vector<std::vector<std::int64_t>> positions(static_cast<std::size_t>(t_max) + 1);
  for (int t = 0; t <= t_max; ++t) {
    positions[static_cast<std::size_t>(t)].assign(basis_keys(t).size(), -1);
    for (auto& [w, blk] : blocks[static_cast<std::size_t>(t)])
      for (std::size_t j = 0; j < blk.indices.size(); ++j)
        positions[static_cast<std::size_t>(t)][static_cast<std::size_t>(blk.indices[j])] =
            static_cast<std::int64_t>(j);
  }

  // jobs: rank of d_t restricted to block (t, w), for t = 0..t_max-1
  struct Job {
    int t;
    std::int64_t w;
  };
  std::vector<Job> jobs;
  for (int t = 0; t <= t_max - 1; ++t)
    for (const auto& [w, blk] : blocks[static_cast<std::size_t>(t)]) jobs.push_back({t, blk.w});

  std::map<std::pair<int, std::int64_t>, std::int64_t> ranks;
  std::mutex ranks_mutex;
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      std::size_t j = next.fetch_add(1);
      if (j >= jobs.size()) return;
      const Job& job = jobs[j];
      const Block& blk = blocks[static_cast<std::size_t>(job.t)].at(job.w);
      SparseMat m = block_matrix(blk, basis_keys(job.t), basis_keys(job.t + 1),
                                 positions[static_cast<std::size_t>(job.t) + 1], terms, ring);
      std::int64_t r = sparse_rank(m);
      std::lock_guard<std::mutex> lock(ranks_mutex);
      ranks[{job.t, job.w}] = r;
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  GradedDimTable table;
  table.ring = ring;
  table.t_max = t_max;
  for (int t = 0; t <= t_max - 1; ++t) {
    std::int64_t total = 0;
    for (const auto& [w, blk] : blocks[static_cast<std::size_t>(t)]) {
      std::int64_t dim_block = static_cast<std::int64_t>(blk.indices.size());
      std::int64_t rank_t = ranks.count({t, w}) ? ranks[{t, w}] : 0;
      std::int64_t rank_prev = (t > 0 && ranks.count({t - 1, w})) ? ranks[{t - 1, w}] : 0;
      std::int64_t h = dim_block - rank_t - rank_prev;
      if (h < 0) throw std::logic_error("negative cohomology dimension (rank bug)");
      table.dims[{t, w}] = h;
      total += h;
    }
    table.totals[t] = total;
  }
  // stabilization heuristic per w: the two top computed degrees vanish
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

std::string GradedDimTable::to_json() const {
  std::ostringstream os;
  os << "{\n  \"ring\": \"" << (ring == Ring::A ? "A" : "B") << "\",\n  \"t_max\": " << t_max
     << ",\n  \"dims\": [";
  bool first = true;
  for (const auto& [tw, d] : dims) {
    if (d == 0) continue;
    os << (first ? "" : ",") << "\n    {\"t\": " << tw.first << ", \"w\": " << tw.second
       << ", \"dim\": " << d << "}";
    first = false;
  }
  os << "\n  ],\n  \"totals\": [";
  first = true;
  for (const auto& [t, d] : totals) {
    os << (first ? "" : ",") << "\n    {\"t\": " << t << ", \"dim\": " << d << "}";
    first = false;
  }
  os << "\n  ],\n  \"stabilized\": [";
  first = true;
  for (const auto& [w, s] : stabilized) {
    os << (first ? "" : ",") << "\n    {\"w\": " << w << ", \"stable\": " << (s ? "true" : "false")
       << "}";
    first = false;
  }
  os << "\n  ]\n}\n";
  return os.str();
}

std::string GradedDimTable::to_tsv() const {
  std::ostringstream os;
  os << "t\tw\tdim\n";
  for (const auto& [tw, d] : dims)
    if (d != 0) os << tw.first << "\t" << tw.second << "\t" << d << "\n";
  return os.str();
}

}  // namespace chiralkit
