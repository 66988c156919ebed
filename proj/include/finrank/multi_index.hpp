#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <vector>

namespace finrank {

/// A multi-index alpha in Z_+^d together with its cached degree |alpha|.
class MultiIndex {
public:
    MultiIndex() = default;
    explicit MultiIndex(std::vector<int> entries);

    static MultiIndex zero(std::size_t dimension);
    static MultiIndex unit(std::size_t dimension, std::size_t axis);

    std::size_t dimension() const { return entries_.size(); }
    int degree() const { return degree_; }
    int operator[](std::size_t i) const { return entries_[i]; }
    const std::vector<int>& entries() const { return entries_; }

    MultiIndex operator+(const MultiIndex& other) const;

    /// Graded lexicographic comparison: degree first, then entries.
    std::strong_ordering operator<=>(const MultiIndex& other) const;
    bool operator==(const MultiIndex& other) const = default;

    /// Copy with coordinate `axis` removed.
    MultiIndex drop(std::size_t axis) const;
    /// Copy with `value` inserted at position `axis`.
    MultiIndex insert(std::size_t axis, int value) const;

private:
    std::vector<int> entries_;
    int degree_ = 0;
};

/// All multi-indices of dimension d with |alpha| <= D, in graded lexicographic
/// order. Every degree-D basis is a prefix of the degree-(D+1) basis.
class IndexBasis {
public:
    IndexBasis(std::size_t dimension, int max_degree);

    std::size_t dimension() const { return dimension_; }
    int max_degree() const { return max_degree_; }
    std::size_t size() const { return indices_.size(); }

    const MultiIndex& operator[](std::size_t i) const { return indices_[i]; }
    const std::vector<MultiIndex>& indices() const { return indices_; }

    std::optional<std::size_t> find(const MultiIndex& alpha) const;
    std::size_t index_of(const MultiIndex& alpha) const;

    /// Number of indices with degree <= k (the size of the degree-k prefix).
    std::size_t prefix_size(int k) const;

    /// For i > 0: alpha_i = alpha_{parent(i)} + e_{step_axis(i)}, where
    /// step_axis is the first nonzero coordinate of alpha_i.
    std::size_t parent(std::size_t i) const { return parent_[i]; }
    std::size_t step_axis(std::size_t i) const { return step_axis_[i]; }

    bool operator==(const IndexBasis& other) const {
        return dimension_ == other.dimension_ && max_degree_ == other.max_degree_;
    }

private:
    std::size_t dimension_;
    int max_degree_;
    std::vector<MultiIndex> indices_;
    std::vector<std::size_t> parent_;
    std::vector<std::size_t> step_axis_;
    std::vector<std::size_t> prefix_;
    std::map<std::vector<int>, std::size_t> lookup_;
};

/// binomial(n, k) in 64-bit arithmetic.
std::size_t binomial(std::size_t n, std::size_t k);

}  // namespace finrank
