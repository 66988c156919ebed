#include "finrank/multi_index.hpp"

#include <algorithm>
#include <numeric>

#include "finrank/error.hpp"

namespace finrank {

MultiIndex::MultiIndex(std::vector<int> entries) : entries_(std::move(entries))
{
    for (int e : entries_) {
        if (e < 0) throw InvalidArgument("multi-index entries must be nonnegative");
    }
    degree_ = std::accumulate(entries_.begin(), entries_.end(), 0);
}

MultiIndex MultiIndex::zero(std::size_t dimension)
{
    return MultiIndex(std::vector<int>(dimension, 0));
}

MultiIndex MultiIndex::unit(std::size_t dimension, std::size_t axis)
{
    std::vector<int> e(dimension, 0);
    e.at(axis) = 1;
    return MultiIndex(std::move(e));
}

MultiIndex MultiIndex::operator+(const MultiIndex& other) const
{
    if (other.dimension() != dimension()) {
        throw InvalidArgument("multi-index dimension mismatch");
    }
    std::vector<int> e(entries_);
    for (std::size_t i = 0; i < e.size(); ++i) e[i] += other.entries_[i];
    return MultiIndex(std::move(e));
}

std::strong_ordering MultiIndex::operator<=>(const MultiIndex& other) const
{
    if (auto c = degree_ <=> other.degree_; c != 0) return c;
    return entries_ <=> other.entries_;
}

MultiIndex MultiIndex::drop(std::size_t axis) const
{
    std::vector<int> e(entries_);
    e.erase(e.begin() + static_cast<std::ptrdiff_t>(axis));
    return MultiIndex(std::move(e));
}

MultiIndex MultiIndex::insert(std::size_t axis, int value) const
{
    std::vector<int> e(entries_);
    e.insert(e.begin() + static_cast<std::ptrdiff_t>(axis), value);
    return MultiIndex(std::move(e));
}

namespace {

// Compositions of `total` into `parts` nonnegative entries, ascending lex order.
void compositions(std::size_t parts, int total, std::vector<int>& prefix,
                  std::vector<MultiIndex>& out)
{
    if (prefix.size() + 1 == parts) {
        prefix.push_back(total);
        out.emplace_back(prefix);
        prefix.pop_back();
        return;
    }
    for (int first = 0; first <= total; ++first) {
        prefix.push_back(first);
        compositions(parts, total - first, prefix, out);
        prefix.pop_back();
    }
}

}  // namespace

IndexBasis::IndexBasis(std::size_t dimension, int max_degree)
    : dimension_(dimension), max_degree_(max_degree)
{
    if (dimension == 0) throw InvalidArgument("dimension must be at least 1");
    if (max_degree < 0) throw InvalidArgument("max degree must be nonnegative");

    std::vector<int> prefix;
    for (int k = 0; k <= max_degree; ++k) {
        compositions(dimension, k, prefix, indices_);
        prefix_.push_back(indices_.size());
    }
    for (std::size_t i = 0; i < indices_.size(); ++i) {
        lookup_.emplace(indices_[i].entries(), i);
    }
    parent_.assign(indices_.size(), 0);
    step_axis_.assign(indices_.size(), 0);
    for (std::size_t i = 1; i < indices_.size(); ++i) {
        const auto& e = indices_[i].entries();
        const auto axis = static_cast<std::size_t>(
            std::find_if(e.begin(), e.end(), [](int v) { return v > 0; }) - e.begin());
        std::vector<int> p(e);
        --p[axis];
        parent_[i] = lookup_.at(p);
        step_axis_[i] = axis;
    }
}

std::optional<std::size_t> IndexBasis::find(const MultiIndex& alpha) const
{
    if (alpha.dimension() != dimension_) return std::nullopt;
    auto it = lookup_.find(alpha.entries());
    if (it == lookup_.end()) return std::nullopt;
    return it->second;
}

std::size_t IndexBasis::index_of(const MultiIndex& alpha) const
{
    auto i = find(alpha);
    if (!i) throw InvalidArgument("multi-index not in basis");
    return *i;
}

std::size_t IndexBasis::prefix_size(int k) const
{
    if (k < 0) return 0;
    if (k > max_degree_) throw InvalidArgument("degree beyond basis truncation");
    return prefix_[static_cast<std::size_t>(k)];
}

std::size_t binomial(std::size_t n, std::size_t k)
{
    if (k > n) return 0;
    k = std::min(k, n - k);
    std::size_t r = 1;
    for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace finrank
