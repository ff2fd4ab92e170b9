#include "utpm/graph.hpp"

#include <algorithm>
#include <ostream>

#include "utpm/adjoint.hpp"

namespace utpm {

std::string_view to_string(OpKind kind) {
  switch (kind) {
    case OpKind::kInput: return "input";
    case OpKind::kConstant: return "constant";
    case OpKind::kAdd: return "add";
    case OpKind::kSub: return "sub";
    case OpKind::kMul: return "mul";
    case OpKind::kSmul: return "smul";
    case OpKind::kTranspose: return "transpose";
    case OpKind::kTrace: return "trace";
    case OpKind::kHadamard: return "hadamard";
    case OpKind::kInv: return "inv";
    case OpKind::kSolve: return "solve";
    case OpKind::kQr: return "qr";
    case OpKind::kEigh: return "eigh";
    case OpKind::kExtractCoefficient: return "extract_coefficient";
    case OpKind::kGetEigenvalueEntry: return "get_eigenvalue_entry";
  }
  return "unknown";
}

NodeId Graph::add_input(std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0) {
    throw GraphError("add_input: dimensions must be positive");
  }
  GraphNode node;
  node.kind = OpKind::kInput;
  node.rows = rows;
  node.cols = cols;
  const NodeId id = append(std::move(node));
  independent_ids_.push_back(id);
  return id;
}

NodeId Graph::add_constant(const TaylorMatrix& value) {
  GraphNode node;
  node.kind = OpKind::kConstant;
  node.rows = value.rows();
  node.cols = value.cols();
  node.constant = value;
  return append(std::move(node));
}

NodeId Graph::add_constant(const Matrix& value) {
  return add_constant(TaylorMatrix::constant(value, 1));
}

NodeId Graph::record(OpKind kind, const std::vector<NodeId>& preds, std::size_t index) {
  if (kind == OpKind::kInput || kind == OpKind::kConstant) {
    throw GraphError("record: inputs and constants have dedicated entry points");
  }
  for (NodeId p : preds) {
    if (p >= nodes_.size()) {
      throw GraphError("record: predecessor not recorded yet");
    }
  }
  GraphNode node;
  node.kind = kind;
  node.preds = preds;
  node.index = index;
  infer_shape(node);
  return append(std::move(node));
}

NodeId Graph::append(GraphNode node) {
  node.id = nodes_.size();
  nodes_.push_back(std::move(node));
  forward_ran_ = false;
  return nodes_.back().id;
}

void Graph::infer_shape(GraphNode& node) const {
  auto shape_of = [&](std::size_t slot) -> const GraphNode& { return nodes_[node.preds[slot]]; };
  auto require_preds = [&](std::size_t count) {
    if (node.preds.size() != count) {
      throw GraphError("record: wrong number of predecessors for " +
                       std::string(to_string(node.kind)));
    }
  };
  switch (node.kind) {
    case OpKind::kAdd:
    case OpKind::kSub:
    case OpKind::kHadamard: {
      require_preds(2);
      const GraphNode& a = shape_of(0);
      const GraphNode& b = shape_of(1);
      if (a.rows != b.rows || a.cols != b.cols) {
        throw GraphError("record: operand shapes differ");
      }
      node.rows = a.rows;
      node.cols = a.cols;
      break;
    }
    case OpKind::kMul: {
      require_preds(2);
      const GraphNode& a = shape_of(0);
      const GraphNode& b = shape_of(1);
      if (a.cols != b.rows) {
        throw GraphError("record: inner dimensions disagree");
      }
      node.rows = a.rows;
      node.cols = b.cols;
      break;
    }
    case OpKind::kSmul: {
      require_preds(2);
      const GraphNode& s = shape_of(0);
      if (s.rows != 1 || s.cols != 1) {
        throw GraphError("record: smul scalar operand must be 1x1");
      }
      node.rows = shape_of(1).rows;
      node.cols = shape_of(1).cols;
      break;
    }
    case OpKind::kTranspose: {
      require_preds(1);
      node.rows = shape_of(0).cols;
      node.cols = shape_of(0).rows;
      break;
    }
    case OpKind::kTrace: {
      require_preds(1);
      node.rows = 1;
      node.cols = 1;
      break;
    }
    case OpKind::kInv: {
      require_preds(1);
      const GraphNode& a = shape_of(0);
      if (a.rows != a.cols) {
        throw GraphError("record: inv requires a square operand");
      }
      node.rows = a.rows;
      node.cols = a.cols;
      break;
    }
    case OpKind::kSolve: {
      require_preds(2);
      const GraphNode& a = shape_of(0);
      const GraphNode& b = shape_of(1);
      if (a.rows != a.cols || b.rows != a.rows) {
        throw GraphError("record: solve requires square a and matching b");
      }
      node.rows = b.rows;
      node.cols = b.cols;
      break;
    }
    case OpKind::kQr: {
      require_preds(1);
      const GraphNode& a = shape_of(0);
      if (a.rows < a.cols) {
        throw GraphError("record: qr requires rows >= cols");
      }
      node.rows = a.cols;  // value is the triangular factor
      node.cols = a.cols;
      break;
    }
    case OpKind::kEigh: {
      require_preds(1);
      const GraphNode& a = shape_of(0);
      if (a.rows != a.cols) {
        throw GraphError("record: eigh requires a square operand");
      }
      node.rows = a.rows;  // value is the diagonal factor
      node.cols = a.cols;
      break;
    }
    case OpKind::kExtractCoefficient: {
      require_preds(1);
      node.rows = shape_of(0).rows;
      node.cols = shape_of(0).cols;
      break;
    }
    case OpKind::kGetEigenvalueEntry: {
      require_preds(1);
      const GraphNode& a = shape_of(0);
      if (a.rows != a.cols) {
        throw GraphError("record: get_eigenvalue_entry requires a square operand");
      }
      if (node.index >= a.rows) {
        throw GraphError("record: diagonal entry index out of range");
      }
      node.rows = 1;
      node.cols = 1;
      break;
    }
    default:
      throw GraphError("record: unknown operation kind");
  }
}

void Graph::mark_dependent(NodeId id) {
  if (id >= nodes_.size()) {
    throw GraphError("mark_dependent: node not recorded");
  }
  if (std::find(dependent_ids_.begin(), dependent_ids_.end(), id) == dependent_ids_.end()) {
    dependent_ids_.push_back(id);
  }
}

const GraphNode& Graph::node(NodeId id) const {
  if (id >= nodes_.size()) {
    throw GraphError("node: id out of range");
  }
  return nodes_[id];
}

std::map<NodeId, TaylorMatrix> Graph::forward(const std::map<NodeId, TaylorMatrix>& inputs) {
  // One common degree count across all inputs.
  std::size_t degree = 0;
  for (NodeId id : independent_ids_) {
    auto it = inputs.find(id);
    if (it == inputs.end()) {
      throw GraphError("forward: missing value for an independent node");
    }
    const GraphNode& node = nodes_[id];
    if (it->second.rows() != node.rows || it->second.cols() != node.cols) {
      throw GraphError("forward: input shape differs from the declared shape");
    }
    if (degree == 0) {
      degree = it->second.degree_count();
    } else if (it->second.degree_count() != degree) {
      throw GraphError("forward: input degree counts differ");
    }
  }
  if (degree == 0) {
    throw GraphError("forward: graph has no independent nodes");
  }

  for (GraphNode& node : nodes_) {
    node.adjoint.reset();
    node.qr_aux.reset();
    node.eigh_aux.reset();
    auto value_of = [&](std::size_t slot) -> const TaylorMatrix& {
      return *nodes_[node.preds[slot]].value;
    };
    switch (node.kind) {
      case OpKind::kInput:
        node.value = inputs.at(node.id);
        break;
      case OpKind::kConstant: {
        const TaylorMatrix& c = *node.constant;
        node.value = c.degree_count() >= degree ? c.truncated(degree) : c.extended(degree);
        break;
      }
      case OpKind::kAdd:
        node.value = tp_add(value_of(0), value_of(1));
        break;
      case OpKind::kSub:
        node.value = tp_sub(value_of(0), value_of(1));
        break;
      case OpKind::kMul:
        node.value = tp_mul(value_of(0), value_of(1));
        break;
      case OpKind::kSmul:
        node.value = tp_smul(value_of(0), value_of(1));
        break;
      case OpKind::kTranspose:
        node.value = tp_transpose(value_of(0));
        break;
      case OpKind::kTrace:
        node.value = tp_trace(value_of(0));
        break;
      case OpKind::kHadamard:
        node.value = tp_hadamard(value_of(0), value_of(1));
        break;
      case OpKind::kInv:
        node.value = tp_inv(value_of(0));
        break;
      case OpKind::kSolve:
        node.value = tp_solve(value_of(0), value_of(1));
        break;
      case OpKind::kQr: {
        QrFactors factors = qr_pushforward(value_of(0), degree);
        node.value = factors.r;
        node.qr_aux = std::move(factors);
        break;
      }
      case OpKind::kEigh: {
        EighFactors factors = eigh_pushforward(value_of(0), degree);
        node.value = factors.lam;
        node.eigh_aux = std::move(factors);
        break;
      }
      case OpKind::kExtractCoefficient: {
        const TaylorMatrix& v = value_of(0);
        if (node.index >= v.degree_count()) {
          throw GraphError("forward: extract_coefficient slot out of range");
        }
        node.value = TaylorMatrix::constant(v.coeff(node.index), degree);
        break;
      }
      case OpKind::kGetEigenvalueEntry: {
        const TaylorMatrix& v = value_of(0);
        TaylorScalar entry(degree, 1, 1);
        for (std::size_t dd = 0; dd < degree; ++dd) {
          entry.at(dd, 0, 0) = v.at(dd, node.index, node.index);
        }
        node.value = std::move(entry);
        break;
      }
    }
  }
  forward_ran_ = true;

  std::map<NodeId, TaylorMatrix> out;
  for (NodeId id : dependent_ids_) {
    out.emplace(id, *nodes_[id].value);
  }
  return out;
}

std::map<NodeId, TaylorMatrix> Graph::reverse(const std::map<NodeId, TaylorMatrix>& seeds) {
  if (!forward_ran_) {
    throw GraphError("reverse: forward has not been run");
  }
  for (GraphNode& node : nodes_) {
    node.adjoint = TaylorMatrix(node.value->degree_count(), node.rows, node.cols);
  }
  for (const auto& [id, seed] : seeds) {
    if (std::find(dependent_ids_.begin(), dependent_ids_.end(), id) == dependent_ids_.end()) {
      throw GraphError("reverse: seed on a node that is not a dependent");
    }
    GraphNode& node = nodes_[id];
    if (seed.rows() != node.rows || seed.cols() != node.cols ||
        seed.degree_count() != node.value->degree_count()) {
      throw GraphError("reverse: seed shape or degree differs from the dependent");
    }
    node.adjoint = tp_add(*node.adjoint, seed);
  }

  for (std::size_t idx = nodes_.size(); idx-- > 0;) {
    GraphNode& node = nodes_[idx];
    if (node.preds.empty()) continue;
    const TaylorMatrix& out_bar = *node.adjoint;
    auto value_of = [&](std::size_t slot) -> const TaylorMatrix& {
      return *nodes_[node.preds[slot]].value;
    };
    auto accumulate = [&](std::size_t slot, const TaylorMatrix& contribution) {
      GraphNode& pred = nodes_[node.preds[slot]];
      pred.adjoint = tp_add(*pred.adjoint, contribution);
    };
    switch (node.kind) {
      case OpKind::kAdd:
        accumulate(0, out_bar);
        accumulate(1, out_bar);
        break;
      case OpKind::kSub:
        accumulate(0, out_bar);
        accumulate(1, tp_neg(out_bar));
        break;
      case OpKind::kMul: {
        auto [xbar, ybar] = pb_mul(out_bar, value_of(0), value_of(1));
        accumulate(0, xbar);
        accumulate(1, ybar);
        break;
      }
      case OpKind::kSmul: {
        auto [sbar, xbar] = pb_smul(out_bar, value_of(0), value_of(1));
        accumulate(0, sbar);
        accumulate(1, xbar);
        break;
      }
      case OpKind::kTranspose:
        accumulate(0, pb_transpose(out_bar));
        break;
      case OpKind::kTrace:
        accumulate(0, pb_trace(out_bar, nodes_[node.preds[0]].rows));
        break;
      case OpKind::kHadamard: {
        auto [xbar, ybar] = pb_hadamard(out_bar, value_of(0), value_of(1));
        accumulate(0, xbar);
        accumulate(1, ybar);
        break;
      }
      case OpKind::kInv:
        accumulate(0, pb_inv(out_bar, *node.value));
        break;
      case OpKind::kSolve: {
        auto [abar, bbar] = pb_solve(out_bar, value_of(0), *node.value);
        accumulate(0, abar);
        accumulate(1, bbar);
        break;
      }
      case OpKind::kQr: {
        const QrFactors& f = *node.qr_aux;
        const TaylorMatrix qbar(out_bar.degree_count(), f.q.rows(), f.q.cols());
        accumulate(0, pb_qr(qbar, out_bar, f.q, f.r));
        break;
      }
      case OpKind::kEigh: {
        const EighFactors& f = *node.eigh_aux;
        const TaylorMatrix qbar(out_bar.degree_count(), f.q.rows(), f.q.cols());
        accumulate(0, pb_eigh(qbar, out_bar, f.q, f.lam));
        break;
      }
      case OpKind::kExtractCoefficient: {
        // Plumbing, not a lifted map: the coefficient-0 block of the
        // adjoint lands back in slot k, mirroring y_0 = v_k.
        TaylorMatrix contribution(out_bar.degree_count(), node.rows, node.cols);
        contribution.set_coeff(node.index, out_bar.coeff(0));
        accumulate(0, contribution);
        break;
      }
      case OpKind::kGetEigenvalueEntry: {
        const GraphNode& pred = nodes_[node.preds[0]];
        TaylorMatrix contribution(out_bar.degree_count(), pred.rows, pred.cols);
        for (std::size_t dd = 0; dd < out_bar.degree_count(); ++dd) {
          contribution.at(dd, node.index, node.index) = out_bar.at(dd, 0, 0);
        }
        accumulate(0, contribution);
        break;
      }
      case OpKind::kInput:
      case OpKind::kConstant:
        break;
    }
  }

  std::map<NodeId, TaylorMatrix> out;
  for (NodeId id : independent_ids_) {
    out.emplace(id, *nodes_[id].adjoint);
  }
  return out;
}

std::map<NodeId, Matrix> Graph::gradient(NodeId dependent,
                                         const std::map<NodeId, TaylorMatrix>& inputs) {
  const GraphNode& dep = node(dependent);
  if (dep.rows != 1 || dep.cols != 1) {
    throw GraphError("gradient: dependent must be 1x1");
  }
  mark_dependent(dependent);
  forward(inputs);
  const std::size_t degree = nodes_[dependent].value->degree_count();
  TaylorScalar seed(degree, 1, 1);
  seed.at(0, 0, 0) = 1.0;
  auto adjoints = reverse({{dependent, seed}});
  std::map<NodeId, Matrix> out;
  for (const auto& [id, bar] : adjoints) {
    out.emplace(id, bar.coeff(0));
  }
  return out;
}

void Graph::dump(std::ostream& os) const {
  for (const GraphNode& node : nodes_) {
    os << node.id << ' ' << to_string(node.kind);
    for (NodeId p : node.preds) os << ' ' << p;
    os << ' ' << node.rows << ' ' << node.cols << '\n';
  }
}

}  // namespace utpm
