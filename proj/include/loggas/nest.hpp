#pragma once

// Maximum nests (laminar subfamilies) of an optimizer family, and the
// coincidence patterns they describe.

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "loggas/errors.hpp"
#include "loggas/subset.hpp"

namespace loggas {

inline constexpr std::size_t kMaxNestFamily = 4096;
inline constexpr std::size_t kMaxNestsReported = 10000;

struct NestSearchResult {
  int kappa = 0;
  std::vector<Nest> nests;  // every maximum nest, up to the cap
  bool truncated = false;   // true when more maximum nests exist than reported
};

/// Orders nest members by lowest element, then by size, so a nest of pairs
/// renders as "p1=p3, p2=p4".
inline void sort_nest(Nest& nest) {
  std::sort(nest.members.begin(), nest.members.end(), [](SubsetMask a, SubsetMask b) {
    const auto fa = std::countr_zero(a.bits()), fb = std::countr_zero(b.bits());
    if (fa != fb) return fa < fb;
    if (a.size() != b.size()) return a.size() < b.size();
    return a.members() < b.members();
  });
}

namespace detail {

class NestSearch {
 public:
  NestSearch(std::span<const SubsetMask> family, std::size_t cap) : cap_(cap) {
    order_.assign(family.begin(), family.end());
    std::sort(order_.begin(), order_.end(), [](SubsetMask a, SubsetMask b) {
      if (a.size() != b.size()) return a.size() > b.size();
      return canonical_less(a, b);
    });
    m_ = order_.size();
    words_ = (m_ + 63) / 64;
    compat_.assign(m_ * words_, 0);
    std::uint32_t ground = 0;
    for (std::size_t i = 0; i < m_; ++i) {
      ground |= order_[i].bits();
      for (std::size_t j = 0; j < m_; ++j)
        if (i != j && order_[i].nested_with(order_[j])) compat_[i * words_ + j / 64] |= 1ULL << (j % 64);
    }
    // A laminar family of sets of size >= 2 on g elements has at most g - 1 members.
    ceiling_ = std::max(1, std::popcount(ground) - 1);
  }

  NestSearchResult run() {
    std::vector<std::uint64_t> all(words_, 0);
    for (std::size_t j = 0; j < m_; ++j) all[j / 64] |= 1ULL << (j % 64);
    std::vector<std::size_t> current;
    expand(current, all);

    NestSearchResult out;
    out.kappa = best_;
    out.truncated = truncated_;
    for (const auto& idx : found_) {
      Nest nest;
      for (std::size_t i : idx) nest.members.push_back(order_[i]);
      sort_nest(nest);
      out.nests.push_back(std::move(nest));
    }
    std::sort(out.nests.begin(), out.nests.end(), [](const Nest& a, const Nest& b) {
      return std::lexicographical_compare(a.members.begin(), a.members.end(), b.members.begin(), b.members.end(),
                                          [](SubsetMask x, SubsetMask y) {
                                            const auto mx = x.members(), my = y.members();
                                            return mx < my;
                                          });
    });
    return out;
  }

 private:
  bool saturated() const { return found_.size() >= cap_ && truncated_; }

  static std::size_t count(const std::vector<std::uint64_t>& set) {
    std::size_t c = 0;
    for (auto w : set) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  void expand(std::vector<std::size_t>& current, const std::vector<std::uint64_t>& cand) {
    const int depth = static_cast<int>(current.size());
    const int bound = depth + static_cast<int>(count(cand));
    // Equal-size nests are wanted until one past the cap has been seen (that one
    // only sets the truncation flag); afterwards only strictly larger ones
    // matter, and nothing beats the laminar ceiling.
    if (bound < best_ || (saturated() && (bound <= best_ || best_ >= ceiling_))) return;

    if (depth > 0 && depth >= best_) {
      if (depth > best_) {
        best_ = depth;
        found_.clear();
        truncated_ = false;
      }
      if (found_.size() < cap_)
        found_.push_back(current);
      else
        truncated_ = true;
    }

    std::vector<std::uint64_t> next(words_);
    for (std::size_t w = 0; w < words_; ++w) {
      for (std::uint64_t bits = cand[w]; bits; bits &= bits - 1) {
        const std::size_t v = w * 64 + static_cast<std::size_t>(std::countr_zero(bits));
        // Candidates compatible with v and ordered after it.
        for (std::size_t u = 0; u < words_; ++u) {
          std::uint64_t later = u > w ? ~0ULL : (u < w ? 0ULL : (v % 64 == 63 ? 0ULL : (~0ULL << (v % 64 + 1))));
          next[u] = cand[u] & compat_[v * words_ + u] & later;
        }
        current.push_back(v);
        expand(current, next);
        current.pop_back();
        if (saturated() && best_ >= ceiling_) return;
      }
    }
  }

  std::size_t cap_;
  std::vector<SubsetMask> order_;
  std::size_t m_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> compat_;
  int ceiling_ = 1;
  int best_ = 0;
  bool truncated_ = false;
  std::vector<std::vector<std::size_t>> found_;
};

}  // namespace detail

/// Maximum cardinality of a pairwise-nested subfamily of `family`, with every
/// subfamily attaining it (at most `cap` of them; `truncated` flags the rest).
inline NestSearchResult max_nest(std::span<const SubsetMask> family, std::size_t cap = kMaxNestsReported) {
  if (family.empty()) throw Error(ErrorKind::InvalidInput, "max_nest needs a nonempty family");
  if (family.size() > kMaxNestFamily)
    throw Error(ErrorKind::FamilyTooLarge, "family of " + std::to_string(family.size()) + " subsets exceeds " +
                                               std::to_string(kMaxNestFamily));
  std::vector<SubsetMask> sorted(family.begin(), family.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw Error(ErrorKind::InvalidInput, "max_nest family has duplicate members");
  return detail::NestSearch(family, cap).run();
}

/// Coincidence pattern of one subset, e.g. {0,2} -> "p1=p3".
inline std::string render_coincidence(SubsetMask s) {
  std::string out;
  for (std::size_t i : s.members()) {
    if (!out.empty()) out += "=";
    out += "p" + std::to_string(i + 1);
  }
  return out;
}

/// Intersection of the coincidence sets of a nest, e.g. "p1=p3, p2=p4".
inline std::string render_nest(const Nest& nest) {
  std::string out;
  for (SubsetMask s : nest.members) {
    if (!out.empty()) out += ", ";
    out += render_coincidence(s);
  }
  return out;
}

/// Limiting support: union over maximal nests K of the intersection over S in K
/// of {p_j equal for all j in S}. One rendered pattern per nest.
struct SupportDescription {
  std::vector<Nest> nests;
  std::vector<std::string> rendered;
  bool truncated = false;

  /// Patterns joined with " U ".
  std::string joined() const {
    std::string out;
    for (const auto& r : rendered) {
      if (!out.empty()) out += " U ";
      out += r;
    }
    return out;
  }
};

inline SupportDescription describe_support(const NestSearchResult& nests) {
  SupportDescription d;
  d.nests = nests.nests;
  d.truncated = nests.truncated;
  for (const auto& n : d.nests) d.rendered.push_back(render_nest(n));
  return d;
}

}  // namespace loggas
