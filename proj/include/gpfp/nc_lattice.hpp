#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace gpfp {

// Enumeration is capped here: the partition count grows like the Catalan
// numbers (Catalan(12) = 208012), so larger ground sets are refused rather
// than silently melting the machine. Cumulant work in this project needs
// n <= 5; the test suite exercises n <= 8.
inline constexpr int kNcEnumerationCap = 12;

// A non-crossing partition of {1..n} in canonical form: blocks ordered by
// minimum element, elements ascending inside each block.
struct NCPartition {
    int n = 0;
    std::vector<std::vector<int>> blocks;

    bool operator==(const NCPartition& o) const { return n == o.n && blocks == o.blocks; }
};

inline NCPartition nc_top(int n) {
    NCPartition p;
    p.n = n;
    p.blocks.emplace_back();
    for (int i = 1; i <= n; ++i) p.blocks[0].push_back(i);
    return p;
}

inline NCPartition nc_bottom(int n) {
    NCPartition p;
    p.n = n;
    for (int i = 1; i <= n; ++i) p.blocks.push_back({i});
    return p;
}

// Block-id per element, also usable as a canonical map key.
inline std::string nc_key(const NCPartition& p) {
    std::string key(static_cast<std::size_t>(p.n), '\0');
    for (std::size_t b = 0; b < p.blocks.size(); ++b)
        for (int e : p.blocks[b]) {
            if (e < 1 || e > p.n) throw std::domain_error("NCPartition: element out of range");
            key[static_cast<std::size_t>(e - 1)] = static_cast<char>(b + 1);
        }
    for (char c : key)
        if (c == '\0') throw std::domain_error("NCPartition: blocks do not cover {1..n}");
    return key;
}

inline bool is_noncrossing(const NCPartition& p) {
    // crossing: a < b < c < d with a,c in one block and b,d in another
    const std::string id = nc_key(p);
    for (int a = 0; a < p.n; ++a)
        for (int b = a + 1; b < p.n; ++b)
            for (int c = b + 1; c < p.n; ++c)
                for (int d = c + 1; d < p.n; ++d)
                    if (id[a] == id[c] && id[b] == id[d] && id[a] != id[b]) return false;
    return true;
}

namespace detail {

// 0-based partitions of {0..len-1}; contiguity of the ground set is what
// makes the gap recursion below valid.
using NcPattern = std::vector<std::vector<int>>;

inline void append_shifted(NcPattern& dst, const NcPattern& src, int offset) {
    for (const auto& blk : src) {
        dst.emplace_back();
        dst.back().reserve(blk.size());
        for (int e : blk) dst.back().push_back(e + offset);
    }
}

// Recursion on the block containing 0: its members split the rest into
// independent contiguous gaps, each filled with any smaller pattern.
inline std::shared_ptr<const std::vector<NcPattern>> nc_patterns(int len) {
    static std::mutex mu;
    static std::map<int, std::shared_ptr<const std::vector<NcPattern>>> cache;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(len);
        if (it != cache.end()) return it->second;
    }
    auto out = std::make_shared<std::vector<NcPattern>>();
    if (len == 0) {
        out->push_back({});
    } else {
        std::vector<std::shared_ptr<const std::vector<NcPattern>>> sub(len);
        for (int k = 0; k < len; ++k) sub[static_cast<std::size_t>(k)] = nc_patterns(k);

        std::vector<int> first{0};
        std::vector<std::pair<int, int>> gaps;  // [begin,end) ranges

        auto emit_for_first_block = [&]() {
            gaps.clear();
            for (std::size_t t = 0; t + 1 < first.size(); ++t)
                gaps.push_back({first[t] + 1, first[t + 1]});
            gaps.push_back({first.back() + 1, len});
            std::vector<std::size_t> pick(gaps.size(), 0);
            // cartesian product over per-gap pattern choices
            while (true) {
                NcPattern assembled;
                assembled.push_back(first);
                for (std::size_t g = 0; g < gaps.size(); ++g) {
                    const int glen = gaps[g].second - gaps[g].first;
                    const auto& plist = *sub[static_cast<std::size_t>(glen)];
                    append_shifted(assembled, plist[pick[g]], gaps[g].first);
                }
                out->push_back(std::move(assembled));
                std::size_t g = 0;
                for (; g < gaps.size(); ++g) {
                    const int glen = gaps[g].second - gaps[g].first;
                    if (++pick[g] < sub[static_cast<std::size_t>(glen)]->size()) break;
                    pick[g] = 0;
                }
                if (g == gaps.size()) break;
            }
        };

        // depth-first over choices of further members of the first block
        std::function<void(int)> choose = [&](int last) {
            emit_for_first_block();
            for (int nxt = last + 1; nxt < len; ++nxt) {
                first.push_back(nxt);
                choose(nxt);
                first.pop_back();
            }
        };
        choose(0);
    }
    std::lock_guard<std::mutex> lock(mu);
    auto [it, inserted] = cache.emplace(len, out);
    return it->second;
}

}  // namespace detail

// All non-crossing partitions of {1..n}, canonical order of blocks,
// |result| = Catalan(n).
inline std::shared_ptr<const std::vector<NCPartition>> enumerate_nc(int n) {
    if (n < 1 || n > kNcEnumerationCap)
        throw std::domain_error("enumerate_nc: n must be in [1, " +
                                std::to_string(kNcEnumerationCap) + "]");
    static std::mutex mu;
    static std::map<int, std::shared_ptr<const std::vector<NCPartition>>> cache;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(n);
        if (it != cache.end()) return it->second;
    }
    auto patterns = detail::nc_patterns(n);
    auto out = std::make_shared<std::vector<NCPartition>>();
    out->reserve(patterns->size());
    for (const auto& pat : *patterns) {
        NCPartition p;
        p.n = n;
        p.blocks.reserve(pat.size());
        for (const auto& blk : pat) {
            p.blocks.emplace_back();
            for (int e : blk) p.blocks.back().push_back(e + 1);
        }
        out->push_back(std::move(p));
    }
    std::lock_guard<std::mutex> lock(mu);
    auto [it, inserted] = cache.emplace(n, out);
    return it->second;
}

// Refinement order: every block of pi contained in some block of sigma.
inline bool nc_leq(const NCPartition& pi, const NCPartition& sigma) {
    if (pi.n != sigma.n) throw std::domain_error("nc_leq: mismatched ground sets");
    const std::string sid = nc_key(sigma);
    for (const auto& blk : pi.blocks) {
        const char want = sid[static_cast<std::size_t>(blk.front() - 1)];
        for (int e : blk)
            if (sid[static_cast<std::size_t>(e - 1)] != want) return false;
    }
    return true;
}

namespace detail {

// Full Moebius column mu(. , 1_n), computed once per n by the interval
// recursion (coarsest first, so every strictly coarser value is already
// known). Values are plain integers.
inline std::shared_ptr<const std::unordered_map<std::string, std::int64_t>> mobius_column(int n) {
    static std::mutex mu;
    static std::map<int, std::shared_ptr<const std::unordered_map<std::string, std::int64_t>>>
        cache;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(n);
        if (it != cache.end()) return it->second;
    }
    auto all = enumerate_nc(n);
    std::vector<const NCPartition*> order;
    order.reserve(all->size());
    for (const auto& p : *all) order.push_back(&p);
    std::sort(order.begin(), order.end(), [](const NCPartition* a, const NCPartition* b) {
        return a->blocks.size() < b->blocks.size();
    });
    auto col = std::make_shared<std::unordered_map<std::string, std::int64_t>>();
    col->reserve(order.size());
    std::vector<std::pair<const NCPartition*, std::int64_t>> done;
    done.reserve(order.size());
    for (const NCPartition* p : order) {
        std::int64_t v;
        if (p->blocks.size() == 1) {
            v = 1;  // mu(1_n, 1_n)
        } else {
            std::int64_t acc = 0;
            for (const auto& [q, mv] : done)
                if (q->blocks.size() < p->blocks.size() && nc_leq(*p, *q)) acc += mv;
            v = -acc;
        }
        done.emplace_back(p, v);
        col->emplace(nc_key(*p), v);
    }
    std::lock_guard<std::mutex> lock(mu);
    auto [it, inserted] = cache.emplace(n, col);
    return it->second;
}

}  // namespace detail

// mu(pi, 1_n) on the NC(n) lattice.
inline std::int64_t mobius_to_top(const NCPartition& pi) {
    if (pi.n < 1 || pi.n > kNcEnumerationCap)
        throw std::domain_error("mobius_to_top: n out of range");
    auto col = detail::mobius_column(pi.n);
    auto it = col->find(nc_key(pi));
    if (it == col->end()) throw std::domain_error("mobius_to_top: not a non-crossing partition");
    return it->second;
}

// kappa_n = sum over NC(n) of (prod over blocks of m_{|V|}) * mu(pi, 1_n).
// Scalar-generic: exact on rational input, floating otherwise.
template <class S>
std::vector<S> moments_to_cumulants(std::span<const S> m) {
    const int K = static_cast<int>(m.size());
    if (K == 0) throw std::domain_error("moments_to_cumulants: empty input");
    if (K > kNcEnumerationCap) throw std::domain_error("moments_to_cumulants: order above cap");
    std::vector<S> kappa;
    kappa.reserve(m.size());
    for (int n = 1; n <= K; ++n) {
        auto parts = enumerate_nc(n);
        auto col = detail::mobius_column(n);
        S acc(0);
        for (const auto& pi : *parts) {
            S term(col->at(nc_key(pi)));
            for (const auto& blk : pi.blocks) term *= m[blk.size() - 1];
            acc += term;
        }
        kappa.push_back(acc);
    }
    return kappa;
}

// m_n = sum over NC(n) of prod over blocks of kappa_{|V|}.
template <class S>
std::vector<S> cumulants_to_moments(std::span<const S> kappa) {
    const int K = static_cast<int>(kappa.size());
    if (K == 0) throw std::domain_error("cumulants_to_moments: empty input");
    if (K > kNcEnumerationCap) throw std::domain_error("cumulants_to_moments: order above cap");
    std::vector<S> m;
    m.reserve(kappa.size());
    for (int n = 1; n <= K; ++n) {
        auto parts = enumerate_nc(n);
        S acc(0);
        for (const auto& pi : *parts) {
            S term(1);
            for (const auto& blk : pi.blocks) term *= kappa[blk.size() - 1];
            acc += term;
        }
        m.push_back(acc);
    }
    return m;
}

template <class S>
std::vector<S> moments_to_cumulants(const std::vector<S>& m) {
    return moments_to_cumulants(std::span<const S>(m));
}

template <class S>
std::vector<S> cumulants_to_moments(const std::vector<S>& kappa) {
    return cumulants_to_moments(std::span<const S>(kappa));
}

}  // namespace gpfp
