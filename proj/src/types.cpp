#include "kuramoto/types.hpp"

#include <algorithm>
#include <numeric>

#include <fmt/format.h>

#include "kuramoto/error.hpp"

namespace kuramoto {

std::vector<Index> complement_indices(std::span<const Index> sorted, std::size_t size) {
    std::vector<Index> out;
    out.reserve(size - std::min(size, sorted.size()));
    auto it = sorted.begin();
    for (std::size_t l = 0; l < size; ++l) {
        if (it != sorted.end() && *it == l) {
            ++it;
            continue;
        }
        out.push_back(static_cast<Index>(l));
    }
    return out;
}

GraphRow convert_row(const GraphRow& row, RowStorage target, std::size_t size) {
    if (row.storage == target) return row;
    return GraphRow{target, complement_indices(row.columns, size), row.degree};
}

namespace {

GraphRow make_row(std::vector<Index> nonzeros, std::size_t size) {
    const std::size_t degree = nonzeros.size();
    if (degree > size - degree) {
        return GraphRow{RowStorage::zero_columns, complement_indices(nonzeros, size), degree};
    }
    return GraphRow{RowStorage::nonzero_columns, std::move(nonzeros), degree};
}

}  // namespace

CouplingGraph::CouplingGraph(std::size_t size, std::vector<GraphRow> rows)
    : size_(size), rows_(std::move(rows)) {
    for (const auto& r : rows_) ones_ += r.degree;
}

CouplingGraph CouplingGraph::from_nonzeros(std::size_t size, std::vector<std::vector<Index>> rows) {
    if (rows.size() != size) {
        throw DimensionError(fmt::format("expected {} rows, got {}", size, rows.size()));
    }
    std::vector<GraphRow> out;
    out.reserve(size);
    for (std::size_t m = 0; m < size; ++m) {
        auto& cols = rows[m];
        std::sort(cols.begin(), cols.end());
        cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
        if (!cols.empty() && cols.back() >= size) {
            throw ValidationError(fmt::format("row {}: column {} out of range [0, {})", m, cols.back(), size));
        }
        out.push_back(make_row(std::move(cols), size));
    }
    return CouplingGraph(size, std::move(out));
}

CouplingGraph CouplingGraph::from_dense(std::size_t size, std::span<const std::uint8_t> pattern) {
    if (pattern.size() != size * size) {
        throw DimensionError(fmt::format("dense pattern has {} entries, expected {}", pattern.size(), size * size));
    }
    std::vector<std::vector<Index>> rows(size);
    for (std::size_t m = 0; m < size; ++m) {
        for (std::size_t l = 0; l < size; ++l) {
            if (pattern[m * size + l] != 0) rows[m].push_back(static_cast<Index>(l));
        }
    }
    return from_nonzeros(size, std::move(rows));
}

CouplingGraph CouplingGraph::from_raw(std::size_t size, std::vector<GraphRow> rows) {
    if (rows.size() != size) {
        throw DimensionError(fmt::format("expected {} rows, got {}", size, rows.size()));
    }
    return CouplingGraph(size, std::move(rows));
}

CouplingGraph CouplingGraph::complete(std::size_t size) {
    return CouplingGraph(size, std::vector<GraphRow>(size, GraphRow{RowStorage::zero_columns, {}, size}));
}

CouplingGraph CouplingGraph::empty(std::size_t size) {
    return CouplingGraph(size, std::vector<GraphRow>(size, GraphRow{RowStorage::nonzero_columns, {}, 0}));
}

bool CouplingGraph::contains(std::size_t m, std::size_t l) const {
    const GraphRow& r = rows_[m];
    const bool listed = std::binary_search(r.columns.begin(), r.columns.end(), static_cast<Index>(l));
    return r.storage == RowStorage::nonzero_columns ? listed : !listed;
}

std::vector<Index> CouplingGraph::nonzero_columns(std::size_t m) const {
    const GraphRow& r = rows_[m];
    return r.storage == RowStorage::nonzero_columns ? r.columns : complement_indices(r.columns, size_);
}

std::vector<Index> CouplingGraph::zero_columns(std::size_t m) const {
    const GraphRow& r = rows_[m];
    return r.storage == RowStorage::zero_columns ? r.columns : complement_indices(r.columns, size_);
}

bool operator==(const CouplingGraph& a, const CouplingGraph& b) {
    if (a.size_ != b.size_ || a.ones_ != b.ones_) return false;
    for (std::size_t m = 0; m < a.size_; ++m) {
        const GraphRow& ra = a.rows_[m];
        const GraphRow& rb = b.rows_[m];
        if (ra.degree != rb.degree) return false;
        if (ra.storage == rb.storage) {
            if (ra.columns != rb.columns) return false;
        } else if (convert_row(rb, ra.storage, a.size_).columns != ra.columns) {
            return false;
        }
    }
    return true;
}

ValidationReport validate(const CouplingGraph& graph) {
    const std::size_t size = graph.size();
    for (std::size_t m = 0; m < size; ++m) {
        const GraphRow& r = graph.row(m);
        for (std::size_t k = 0; k < r.columns.size(); ++k) {
            const Index l = r.columns[k];
            if (l >= size) {
                return {GraphIssue::index_out_of_range, m,
                        fmt::format("row {}: column {} out of range [0, {})", m, l, size)};
            }
            if (k > 0 && r.columns[k - 1] == l) {
                return {GraphIssue::duplicate_index, m, fmt::format("row {}: duplicate column {}", m, l)};
            }
            if (k > 0 && r.columns[k - 1] > l) {
                return {GraphIssue::unsorted_index, m, fmt::format("row {}: columns not sorted at {}", m, l)};
            }
        }
        const std::size_t expected =
            r.storage == RowStorage::nonzero_columns ? r.columns.size() : size - r.columns.size();
        if (r.degree != expected) {
            return {GraphIssue::degree_mismatch, m,
                    fmt::format("row {}: cached degree {} but row holds {} ones", m, r.degree, expected)};
        }
    }
    return {};
}

bool is_symmetric(const CouplingGraph& graph) {
    const std::size_t size = graph.size();
    for (std::size_t m = 0; m < size; ++m) {
        if (graph.degree(m) == 0) continue;
        bool symmetric = true;
        graph.for_each_nonzero(m, [&](Index l) {
            if (symmetric && !graph.contains(l, m)) symmetric = false;
        });
        if (!symmetric) return false;
    }
    return true;
}

BlockPartition BlockPartition::from_communities(std::size_t size, std::vector<std::vector<Index>> communities) {
    BlockPartition p;
    p.position_.assign(size, static_cast<Index>(size));
    p.order_.reserve(size);
    for (const auto& community : communities) {
        if (community.empty()) throw ValidationError("partition contains an empty community");
        for (Index v : community) {
            if (v >= size) throw ValidationError(fmt::format("partition index {} out of range [0, {})", v, size));
            if (p.position_[v] != size) throw ValidationError(fmt::format("index {} appears in two communities", v));
            p.position_[v] = static_cast<Index>(p.order_.size());
            p.order_.push_back(v);
        }
    }
    if (p.order_.size() != size) {
        throw ValidationError(fmt::format("partition covers {} of {} indices", p.order_.size(), size));
    }
    p.communities_ = std::move(communities);
    return p;
}

BlockPartition BlockPartition::from_sizes(std::span<const std::size_t> sizes) {
    std::vector<std::vector<Index>> communities;
    Index next = 0;
    for (std::size_t s : sizes) {
        std::vector<Index> c(s);
        std::iota(c.begin(), c.end(), next);
        next += static_cast<Index>(s);
        communities.push_back(std::move(c));
    }
    return from_communities(next, std::move(communities));
}

BlockPartition BlockPartition::from_labels(std::span<const Index> labels) {
    Index max_label = 0;
    for (Index l : labels) max_label = std::max(max_label, l);
    std::vector<std::vector<Index>> communities(labels.empty() ? 0 : max_label + 1);
    for (std::size_t v = 0; v < labels.size(); ++v) communities[labels[v]].push_back(static_cast<Index>(v));
    std::erase_if(communities, [](const auto& c) { return c.empty(); });
    return from_communities(labels.size(), std::move(communities));
}

std::vector<std::size_t> BlockPartition::community_sizes() const {
    std::vector<std::size_t> sizes;
    sizes.reserve(communities_.size());
    for (const auto& c : communities_) sizes.push_back(c.size());
    return sizes;
}

std::vector<Index> BlockPartition::labels() const {
    std::vector<Index> labels(order_.size());
    for (std::size_t c = 0; c < communities_.size(); ++c) {
        for (Index v : communities_[c]) labels[v] = static_cast<Index>(c);
    }
    return labels;
}

EvalCounters& EvalCounters::operator+=(const EvalCounters& other) noexcept {
    sin_evals += other.sin_evals;
    cos_evals += other.cos_evals;
    trig_calls += other.trig_calls;
    terms += other.terms;
    evaluations += other.evaluations;
    wall_time += other.wall_time;
    return *this;
}

}  // namespace kuramoto
