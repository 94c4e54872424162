#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace kuramoto {

/// Oscillator index. All indices are 0-based; Matrix Market I/O is the only
/// place where 1-based indices appear.
using Index = std::uint32_t;

/// Phases on the unwrapped lift (never reduced modulo 2*pi) plus model time.
struct PhaseState {
    std::vector<double> phases;
    double time = 0.0;

    [[nodiscard]] std::size_t size() const noexcept { return phases.size(); }
};

struct NaturalFrequencies {
    std::vector<double> omega;

    [[nodiscard]] std::size_t size() const noexcept { return omega.size(); }
};

/// Row normalisation of the adjacency matrix: divide by M or by the row degree.
enum class ScalingMode { uniform, non_uniform };

enum class RowStorage : std::uint8_t { nonzero_columns, zero_columns };

/// One adjacency row. `columns` holds either the ones or the zeros of the row.
struct GraphRow {
    RowStorage storage = RowStorage::nonzero_columns;
    std::vector<Index> columns;
    std::size_t degree = 0;
};

/// Complement of a sorted, deduplicated index set within [0, size).
std::vector<Index> complement_indices(std::span<const Index> sorted, std::size_t size);

/// Re-express a row in the requested storage, preserving the logical row.
GraphRow convert_row(const GraphRow& row, RowStorage target, std::size_t size);

/// Logical M x M 0/1 adjacency matrix. Every row stores whichever of its
/// nonzero or zero column sets is smaller (ties go to nonzero storage).
/// Symmetry is not assumed.
class CouplingGraph {
public:
    CouplingGraph() = default;

    /// Builds from per-row lists of nonzero columns; lists are sorted and
    /// deduplicated. Throws ValidationError on an out-of-range column.
    static CouplingGraph from_nonzeros(std::size_t size, std::vector<std::vector<Index>> rows);

    /// Row-major dense 0/1 pattern (any nonzero byte counts as one).
    static CouplingGraph from_dense(std::size_t size, std::span<const std::uint8_t> pattern);

    /// Takes rows verbatim without any checking; see validate().
    static CouplingGraph from_raw(std::size_t size, std::vector<GraphRow> rows);

    static CouplingGraph complete(std::size_t size);
    static CouplingGraph empty(std::size_t size);

    [[nodiscard]] std::size_t size() const noexcept { return size_; }
    [[nodiscard]] const GraphRow& row(std::size_t m) const { return rows_[m]; }
    [[nodiscard]] std::span<const GraphRow> rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t degree(std::size_t m) const { return rows_[m].degree; }

    /// Total number of ones (ordered pairs, diagonal included).
    [[nodiscard]] std::size_t ones() const noexcept { return ones_; }

    [[nodiscard]] bool contains(std::size_t m, std::size_t l) const;
    [[nodiscard]] std::vector<Index> nonzero_columns(std::size_t m) const;
    [[nodiscard]] std::vector<Index> zero_columns(std::size_t m) const;

    /// Calls fn(l) for every l with A(m, l) = 1 in increasing order.
    template <typename Fn>
    void for_each_nonzero(std::size_t m, Fn&& fn) const {
        const GraphRow& r = rows_[m];
        if (r.storage == RowStorage::nonzero_columns) {
            for (Index l : r.columns) fn(l);
            return;
        }
        auto zero = r.columns.begin();
        for (std::size_t l = 0; l < size_; ++l) {
            if (zero != r.columns.end() && *zero == l) {
                ++zero;
                continue;
            }
            fn(static_cast<Index>(l));
        }
    }

    friend bool operator==(const CouplingGraph& a, const CouplingGraph& b);

private:
    CouplingGraph(std::size_t size, std::vector<GraphRow> rows);

    std::size_t size_ = 0;
    std::size_t ones_ = 0;
    std::vector<GraphRow> rows_;
};

enum class GraphIssue { none, index_out_of_range, duplicate_index, unsorted_index, degree_mismatch };

struct ValidationReport {
    GraphIssue issue = GraphIssue::none;
    std::size_t row = 0;
    std::string message;

    [[nodiscard]] bool ok() const noexcept { return issue == GraphIssue::none; }
};

/// Checks every structural invariant of the graph and reports the first violation.
ValidationReport validate(const CouplingGraph& graph);

[[nodiscard]] bool is_symmetric(const CouplingGraph& graph);

/// Ordered communities and the induced permutation. `order[k]` is the original
/// index placed at position k; communities occupy consecutive positions.
class BlockPartition {
public:
    BlockPartition() = default;

    /// Throws ValidationError unless the communities form a disjoint cover of [0, size).
    static BlockPartition from_communities(std::size_t size, std::vector<std::vector<Index>> communities);

    /// Contiguous blocks of the given sizes over the identity ordering.
    static BlockPartition from_sizes(std::span<const std::size_t> sizes);

    static BlockPartition identity(std::size_t size) {
        const std::size_t sizes[] = {size};
        return from_sizes(sizes);
    }

    /// Community label of every original index.
    static BlockPartition from_labels(std::span<const Index> labels);

    [[nodiscard]] std::size_t size() const noexcept { return order_.size(); }
    [[nodiscard]] std::size_t community_count() const noexcept { return communities_.size(); }
    [[nodiscard]] const std::vector<std::vector<Index>>& communities() const noexcept { return communities_; }
    [[nodiscard]] std::span<const Index> order() const noexcept { return order_; }
    [[nodiscard]] std::span<const Index> position() const noexcept { return position_; }
    [[nodiscard]] std::vector<std::size_t> community_sizes() const;
    [[nodiscard]] std::vector<Index> labels() const;

private:
    std::vector<std::vector<Index>> communities_;
    std::vector<Index> order_;
    std::vector<Index> position_;
};

/// Trigonometric and work accounting for right-hand-side evaluations.
///
/// `sin_evals`/`cos_evals` follow the cost table convention, in which the
/// order-parameter reformulation is charged 2M sines plus 2M cosines.
/// `trig_calls` is the number of sin/cos calls actually executed and
/// `terms` the number of coefficient terms and block-sum entries visited.
struct EvalCounters {
    std::uint64_t sin_evals = 0;
    std::uint64_t cos_evals = 0;
    std::uint64_t trig_calls = 0;
    std::uint64_t terms = 0;
    std::uint64_t evaluations = 0;
    double wall_time = 0.0;

    [[nodiscard]] std::uint64_t trig_evals() const noexcept { return sin_evals + cos_evals; }
    void reset() noexcept { *this = EvalCounters{}; }
    EvalCounters& operator+=(const EvalCounters& other) noexcept;
};

struct SampleDiagnostics {
    double r = 0.0;
    double psi = 0.0;
    double potential = 0.0;
    double conserved_residual = 0.0;
};

struct Trajectory {
    std::vector<double> sample_times;
    std::vector<PhaseState> states;
    std::vector<SampleDiagnostics> diagnostics;

    [[nodiscard]] std::size_t size() const noexcept { return sample_times.size(); }
};

}  // namespace kuramoto
