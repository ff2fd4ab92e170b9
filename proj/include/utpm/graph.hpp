#ifndef UTPM_GRAPH_HPP
#define UTPM_GRAPH_HPP

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "utpm/linalg.hpp"
#include "utpm/taylor_matrix.hpp"

namespace utpm {

/// Elementary operations the recorder understands. Every kind has exactly
/// one push-forward (in forward()) and one pullback (in reverse()).
enum class OpKind {
  kInput,
  kConstant,
  kAdd,
  kSub,
  kMul,
  kSmul,
  kTranspose,
  kTrace,
  kHadamard,
  kInv,
  kSolve,
  kQr,
  kEigh,
  kExtractCoefficient,
  kGetEigenvalueEntry,
};

std::string_view to_string(OpKind kind);

using NodeId = std::size_t;

/// One recorded operation: predecessors by id (all smaller than the node's
/// own id, so the arena order is topological), the value filled in by the
/// forward sweep, and the adjoint accumulator used by the reverse sweep.
/// Factorization nodes keep both factors in aux for their pullback.
struct GraphNode {
  NodeId id = 0;
  OpKind kind = OpKind::kInput;
  std::vector<NodeId> preds;
  std::size_t rows = 0;  // fixed at record time by shape inference
  std::size_t cols = 0;
  std::size_t index = 0;  // coefficient slot / diagonal entry, where used

  std::optional<TaylorMatrix> value;
  std::optional<TaylorMatrix> adjoint;
  std::optional<QrFactors> qr_aux;
  std::optional<EighFactors> eigh_aux;
  std::optional<TaylorMatrix> constant;
};

/// Recorded computational procedure: an arena of nodes in topological
/// order. Recording, forward and reverse are single-writer operations on
/// one instance; a completed instance can be copied and the copies
/// evaluated independently on separate threads.
///
/// The qr node's value is the triangular factor R and the eigh node's
/// value is the diagonal factor Lambda (the factors a downstream program
/// consumes); both factors are kept in aux so the pullbacks see them. The
/// orthogonal factors are not separately addressable as graph values.
class Graph {
 public:
  /// Declares an independent variable of fixed shape.
  NodeId add_input(std::size_t rows, std::size_t cols);

  /// Records a constant; the value is truncated/zero-extended to the degree
  /// of the inputs when the forward sweep runs.
  NodeId add_constant(const TaylorMatrix& value);
  NodeId add_constant(const Matrix& value);

  /// Records one operation over already-recorded predecessors. index names
  /// the coefficient slot (extract_coefficient) or the diagonal entry
  /// (get_eigenvalue_entry) and is ignored by every other kind.
  NodeId record(OpKind kind, const std::vector<NodeId>& preds, std::size_t index = 0);

  // Convenience spellings of record().
  NodeId add(NodeId a, NodeId b) { return record(OpKind::kAdd, {a, b}); }
  NodeId sub(NodeId a, NodeId b) { return record(OpKind::kSub, {a, b}); }
  NodeId mul(NodeId a, NodeId b) { return record(OpKind::kMul, {a, b}); }
  NodeId smul(NodeId scalar, NodeId x) { return record(OpKind::kSmul, {scalar, x}); }
  NodeId transpose(NodeId a) { return record(OpKind::kTranspose, {a}); }
  NodeId trace(NodeId a) { return record(OpKind::kTrace, {a}); }
  NodeId hadamard(NodeId a, NodeId b) { return record(OpKind::kHadamard, {a, b}); }
  NodeId inv(NodeId a) { return record(OpKind::kInv, {a}); }
  NodeId solve(NodeId a, NodeId b) { return record(OpKind::kSolve, {a, b}); }
  NodeId qr(NodeId a) { return record(OpKind::kQr, {a}); }
  NodeId eigh(NodeId a) { return record(OpKind::kEigh, {a}); }
  NodeId extract_coefficient(NodeId a, std::size_t k) {
    return record(OpKind::kExtractCoefficient, {a}, k);
  }
  NodeId get_eigenvalue_entry(NodeId a, std::size_t i) {
    return record(OpKind::kGetEigenvalueEntry, {a}, i);
  }

  /// Marks a node as a dependent (an output of the procedure).
  void mark_dependent(NodeId id);

  std::size_t node_count() const { return nodes_.size(); }
  const GraphNode& node(NodeId id) const;
  const std::vector<NodeId>& independent_ids() const { return independent_ids_; }
  const std::vector<NodeId>& dependent_ids() const { return dependent_ids_; }

  /// Forward sweep: evaluates every node in topological order. All inputs
  /// must be supplied with one common degree count. Returns the dependents.
  std::map<NodeId, TaylorMatrix> forward(const std::map<NodeId, TaylorMatrix>& inputs);

  /// Reverse sweep over the values stored by the last forward(): adjoints
  /// are zero-initialized, dependents seeded, and pullback contributions
  /// accumulated into predecessor slots in reverse topological order.
  /// Returns the independent adjoints.
  std::map<NodeId, TaylorMatrix> reverse(const std::map<NodeId, TaylorMatrix>& seeds);

  /// Degree-1 convenience: forward + reverse with seed 1 on a 1x1
  /// dependent; returns the gradient (degree-0 adjoint coefficient) per
  /// independent.
  std::map<NodeId, Matrix> gradient(NodeId dependent, const std::map<NodeId, TaylorMatrix>& inputs);

  /// Debug dump, one line per node: id kind pred_ids... rows cols.
  /// Stable across runs for golden-file comparisons.
  void dump(std::ostream& os) const;

 private:
  NodeId append(GraphNode node);
  void infer_shape(GraphNode& node) const;

  std::vector<GraphNode> nodes_;
  std::vector<NodeId> independent_ids_;
  std::vector<NodeId> dependent_ids_;
  bool forward_ran_ = false;
};

}  // namespace utpm

#endif  // UTPM_GRAPH_HPP
