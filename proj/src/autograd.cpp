#include "hgat/autograd.hpp"

#include <algorithm>
#include <cmath>

namespace hgat {

void zero_gradients(const std::vector<Parameter*>& params) {
  for (Parameter* p : params) p->zero_grad();
}

Tape::Var Tape::push(Tensor value, std::function<void(Tape&, std::size_t)> backprop,
                     const char* op_name) {
  value.require_finite(op_name);
  Node n;
  n.adjoint = Tensor::zeros_like(value);
  n.value = std::move(value);
  n.backprop = std::move(backprop);
  nodes_.push_back(std::move(n));
  return Var{this, nodes_.size() - 1};
}

std::size_t Tape::check(Var v, const char* op_name) const {
  if (v.owner != this || v.index >= nodes_.size()) {
    throw UsageError(std::string(op_name) + ": value does not belong to this tape");
  }
  return v.index;
}

Tape::Var Tape::constant(Tensor v) { return push(std::move(v), nullptr, "constant"); }

Tape::Var Tape::parameter(Parameter& p) {
  if (!p.value.same_shape(p.gradient)) {
    throw DimensionError("parameter '" + p.name + "': gradient shape " +
                         p.gradient.shape_str() + " does not match value shape " +
                         p.value.shape_str());
  }
  Var v = push(p.value, nullptr, "parameter");
  nodes_[v.index].param = &p;
  return v;
}

Tape::Var Tape::add(Var a, Var b) {
  std::size_t ia = check(a, "add"), ib = check(b, "add");
  Tensor out = ops::add(nodes_[ia].value, nodes_[ib].value);
  return push(std::move(out), [ia, ib](Tape& t, std::size_t self) {
    const Tensor& g = t.node(self).adjoint;
    Tensor& ga = t.node(ia).adjoint;
    Tensor& gb = t.node(ib).adjoint;
    for (std::size_t i = 0; i < g.size(); ++i) {
      ga[i] += g[i];
      gb[i] += g[i];
    }
  }, "add");
}

Tape::Var Tape::sub(Var a, Var b) {
  std::size_t ia = check(a, "sub"), ib = check(b, "sub");
  Tensor out = ops::sub(nodes_[ia].value, nodes_[ib].value);
  return push(std::move(out), [ia, ib](Tape& t, std::size_t self) {
    const Tensor& g = t.node(self).adjoint;
    Tensor& ga = t.node(ia).adjoint;
    Tensor& gb = t.node(ib).adjoint;
    for (std::size_t i = 0; i < g.size(); ++i) {
      ga[i] += g[i];
      gb[i] -= g[i];
    }
  }, "sub");
}

Tape::Var Tape::mul(Var a, Var b) {
  std::size_t ia = check(a, "mul"), ib = check(b, "mul");
  Tensor out = ops::mul(nodes_[ia].value, nodes_[ib].value);
  return push(std::move(out), [ia, ib](Tape& t, std::size_t self) {
    const Tensor& g = t.node(self).adjoint;
    // Read values before writing adjoints: ia and ib may alias.
    const Tensor va = t.node(ia).value;
    const Tensor vb = t.node(ib).value;
    Tensor& ga = t.node(ia).adjoint;
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * vb[i];
    Tensor& gb = t.node(ib).adjoint;
    for (std::size_t i = 0; i < g.size(); ++i) gb[i] += g[i] * va[i];
  }, "mul");
}

Tape::Var Tape::scale(Var a, double c) {
  std::size_t ia = check(a, "scale");
  Tensor out = ops::scale(nodes_[ia].value, c);
  return push(std::move(out), [ia, c](Tape& t, std::size_t self) {
    const Tensor& g = t.node(self).adjoint;
    Tensor& ga = t.node(ia).adjoint;
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += c * g[i];
  }, "scale");
}

Tape::Var Tape::mul_const(Var a, const Tensor& c) {
  std::size_t ia = check(a, "mul_const");
  Tensor out = ops::mul(nodes_[ia].value, c);
  Tensor factor = c;
  return push(std::move(out), [ia, factor](Tape& t, std::size_t self) {
    const Tensor& g = t.node(self).adjoint;
    Tensor& ga = t.node(ia).adjoint;
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += factor[i] * g[i];
  }, "mul_const");
}

Tape::Var Tape::matmul(Var a, Var b) {
  std::size_t ia = check(a, "matmul"), ib = check(b, "matmul");
  Tensor out = ops::matmul(nodes_[ia].value, nodes_[ib].value);
  return push(std::move(out), [ia, ib](Tape& t, std::size_t self) {
    const Tensor& g = t.node(self).adjoint;        // m*n
    const Tensor& va = t.node(ia).value;           // m*k
    const Tensor& vb = t.node(ib).value;           // k*n
    const std::size_t m = va.extent(0), k = va.extent(1), n = vb.extent(1);
    Tensor& ga = t.node(ia).adjoint;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t p = 0; p < k; ++p) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) acc += g[i * n + j] * vb[p * n + j];
        ga[i * k + p] += acc;
      }
    }
    Tensor& gb = t.node(ib).adjoint;
    for (std::size_t p = 0; p < k; ++p) {
      for (std::size_t j = 0; j < n; ++j) {
        double acc = 0.0;
        for (std::size_t i = 0; i < m; ++i) acc += va[i * k + p] * g[i * n + j];
        gb[p * n + j] += acc;
      }
    }
  }, "matmul");
}

Tape::Var Tape::linear(Var x, Var w, Var b) {
  std::size_t ix = check(x, "linear"), iw = check(w, "linear"), ib = check(b, "linear");
  const Tensor& xv = nodes_[ix].value;
  const Tensor& wv = nodes_[iw].value;
  const Tensor& bv = nodes_[ib].value;
  if (wv.rank() != 2 || bv.rank() != 1 || wv.extent(0) != bv.extent(0)) {
    throw DimensionError("linear: weight " + wv.shape_str() + " and bias " +
                         bv.shape_str() + " are inconsistent");
  }
  Tensor out = ops::matmul_nt(xv, wv);  // N*out
  const std::size_t rows = out.extent(0), cols = out.extent(1);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) out[i * cols + j] += bv[j];
  }
  return push(std::move(out), [ix, iw, ib](Tape& t, std::size_t self) {
    const Tensor& g = t.node(self).adjoint;   // N*out
    const Tensor& xv = t.node(ix).value;      // N*in
    const Tensor& wv = t.node(iw).value;      // out*in
    const std::size_t n = xv.extent(0), in = xv.extent(1), outd = wv.extent(0);
    Tensor& gx = t.node(ix).adjoint;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t o = 0; o < outd; ++o) {
        double gv = g[i * outd + o];
        if (gv == 0.0) continue;
        const double* wrow = wv.data() + o * in;
        double* gxrow = gx.data() + i * in;
        for (std::size_t p = 0; p < in; ++p) gxrow[p] += gv * wrow[p];
      }
    }
    Tensor& gw = t.node(iw).adjoint;
    for (std::size_t i = 0; i < n; ++i) {
      const double* xrow = xv.data() + i * in;
      for (std::size_t o = 0; o < outd; ++o) {
        double gv = g[i * outd + o];
        if (gv == 0.0) continue;
        double* gwrow = gw.data() + o * in;
        for (std::size_t p = 0; p < in; ++p) gwrow[p] += gv * xrow[p];
      }
    }
    Tensor& gb = t.node(ib).adjoint;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t o = 0; o < outd; ++o) gb[o] += g[i * outd + o];
    }
  }, "linear");
}

Tape::Var Tape::sigmoid(Var a) {
  std::size_t ia = check(a, "sigmoid");
  Tensor out = ops::sigmoid(nodes_[ia].value);
  return push(std::move(out), [ia](Tape& t, std::size_t self) {
    const Tensor& g = t.node(self).adjoint;
    const Tensor& y = t.node(self).value;
    Tensor& ga = t.node(ia).adjoint;
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * y[i] * (1.0 - y[i]);
  }, "sigmoid");
}

Tape::Var Tape::tanh(Var a) {
  std::size_t ia = check(a, "tanh");
  Tensor out = ops::tanh(nodes_[ia].value);
  return push(std::move(out), [ia](Tape& t, std::size_t self) {
    const Tensor& g = t.node(self).adjoint;
    const Tensor& y = t.node(self).value;
    Tensor& ga = t.node(ia).adjoint;
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * (1.0 - y[i] * y[i]);
  }, "tanh");
}

Tape::Var Tape::softmax(Var a, std::size_t axis) {
  std::size_t ia = check(a, "softmax");
  Tensor out = ops::softmax(nodes_[ia].value, axis);
  return push(std::move(out), [ia, axis](Tape& t, std::size_t self) {
    const Tensor& g = t.node(self).adjoint;
    const Tensor& y = t.node(self).value;
    Tensor& ga = t.node(ia).adjoint;
    auto slice_backward = [&](std::size_t base, std::size_t stride, std::size_t count) {
      double dot = 0.0;
      for (std::size_t i = 0; i < count; ++i) {
        std::size_t idx = base + i * stride;
        dot += g[idx] * y[idx];
      }
      for (std::size_t i = 0; i < count; ++i) {
        std::size_t idx = base + i * stride;
        ga[idx] += y[idx] * (g[idx] - dot);
      }
    };
    if (y.rank() == 1) {
      slice_backward(0, 1, y.size());
    } else if (axis == 1) {
      for (std::size_t r = 0; r < y.extent(0); ++r)
        slice_backward(r * y.extent(1), 1, y.extent(1));
    } else {
      for (std::size_t c = 0; c < y.extent(1); ++c)
        slice_backward(c, y.extent(1), y.extent(0));
    }
  }, "softmax");
}

Tape::Var Tape::sum(Var a) {
  std::size_t ia = check(a, "sum");
  Tensor out = Tensor::scalar(ops::sum(nodes_[ia].value));
  return push(std::move(out), [ia](Tape& t, std::size_t self) {
    double g = t.node(self).adjoint[0];
    Tensor& ga = t.node(ia).adjoint;
    for (std::size_t i = 0; i < ga.size(); ++i) ga[i] += g;
  }, "sum");
}

Tape::Var Tape::concat_cols(const std::vector<Var>& parts) {
  if (parts.empty()) throw UsageError("concat_cols: no inputs");
  std::vector<std::size_t> idx;
  idx.reserve(parts.size());
  std::size_t rows = 0, total_cols = 0;
  for (std::size_t p = 0; p < parts.size(); ++p) {
    std::size_t i = check(parts[p], "concat_cols");
    const Tensor& v = nodes_[i].value;
    if (v.rank() != 2) throw DimensionError("concat_cols: inputs must be rank 2, got " + v.shape_str());
    if (p == 0) {
      rows = v.extent(0);
    } else if (v.extent(0) != rows) {
      throw DimensionError("concat_cols: row count mismatch");
    }
    total_cols += v.extent(1);
    idx.push_back(i);
  }
  Tensor out({rows, total_cols});
  std::size_t col = 0;
  for (std::size_t i : idx) {
    const Tensor& v = nodes_[i].value;
    std::size_t c = v.extent(1);
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t j = 0; j < c; ++j) out[r * total_cols + col + j] = v[r * c + j];
    }
    col += c;
  }
  return push(std::move(out), [idx, rows, total_cols](Tape& t, std::size_t self) {
    const Tensor& g = t.node(self).adjoint;
    std::size_t col = 0;
    for (std::size_t i : idx) {
      Tensor& ga = t.node(i).adjoint;
      std::size_t c = ga.extent(1);
      for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t j = 0; j < c; ++j) ga[r * c + j] += g[r * total_cols + col + j];
      }
      col += c;
    }
  }, "concat_cols");
}

Tape::Var Tape::gather_rows(Var m, std::vector<std::size_t> rows) {
  std::size_t im = check(m, "gather_rows");
  const Tensor& v = nodes_[im].value;
  if (v.rank() != 2) throw DimensionError("gather_rows: input must be rank 2");
  if (rows.empty()) throw UsageError("gather_rows: empty row list");
  const std::size_t cols = v.extent(1);
  Tensor out({rows.size(), cols});
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r] >= v.extent(0)) throw DimensionError("gather_rows: row index out of range");
    for (std::size_t j = 0; j < cols; ++j) out[r * cols + j] = v[rows[r] * cols + j];
  }
  return push(std::move(out), [im, rows = std::move(rows), cols](Tape& t, std::size_t self) {
    const Tensor& g = t.node(self).adjoint;
    Tensor& gm = t.node(im).adjoint;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      for (std::size_t j = 0; j < cols; ++j) gm[rows[r] * cols + j] += g[r * cols + j];
    }
  }, "gather_rows");
}

Tape::Var Tape::segment_softmax(Var v, std::vector<std::size_t> offsets) {
  std::size_t iv = check(v, "segment_softmax");
  const Tensor& x = nodes_[iv].value;
  if (offsets.size() < 2 || offsets.front() != 0 || offsets.back() != x.size() ||
      !std::is_sorted(offsets.begin(), offsets.end())) {
    throw DimensionError("segment_softmax: offsets must start at 0, be sorted, and end at the input length");
  }
  Tensor out = x;
  for (std::size_t s = 0; s + 1 < offsets.size(); ++s) {
    std::size_t lo = offsets[s], hi = offsets[s + 1];
    if (lo == hi) continue;
    double mx = out[lo];
    for (std::size_t i = lo + 1; i < hi; ++i) mx = std::max(mx, out[i]);
    double denom = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      out[i] = std::exp(out[i] - mx);
      denom += out[i];
    }
    for (std::size_t i = lo; i < hi; ++i) out[i] /= denom;
  }
  return push(std::move(out), [iv, offsets = std::move(offsets)](Tape& t, std::size_t self) {
    const Tensor& g = t.node(self).adjoint;
    const Tensor& y = t.node(self).value;
    Tensor& gv = t.node(iv).adjoint;
    for (std::size_t s = 0; s + 1 < offsets.size(); ++s) {
      std::size_t lo = offsets[s], hi = offsets[s + 1];
      double dot = 0.0;
      for (std::size_t i = lo; i < hi; ++i) dot += g[i] * y[i];
      for (std::size_t i = lo; i < hi; ++i) gv[i] += y[i] * (g[i] - dot);
    }
  }, "segment_softmax");
}

Tape::Var Tape::scatter_rows_weighted(Var coeff, Var values, std::vector<std::size_t> src,
                                      std::vector<std::size_t> dst, std::size_t out_rows) {
  std::size_t ic = check(coeff, "scatter_rows_weighted");
  std::size_t iv = check(values, "scatter_rows_weighted");
  const Tensor& c = nodes_[ic].value;
  const Tensor& v = nodes_[iv].value;
  if (v.rank() != 2) throw DimensionError("scatter_rows_weighted: values must be rank 2");
  if (c.size() != src.size() || src.size() != dst.size()) {
    throw DimensionError("scatter_rows_weighted: coefficient/index lengths disagree");
  }
  const std::size_t cols = v.extent(1);
  Tensor out({out_rows, cols});
  for (std::size_t p = 0; p < src.size(); ++p) {
    if (src[p] >= v.extent(0) || dst[p] >= out_rows) {
      throw DimensionError("scatter_rows_weighted: index out of range");
    }
    const double* vrow = v.data() + src[p] * cols;
    double* orow = out.data() + dst[p] * cols;
    for (std::size_t j = 0; j < cols; ++j) orow[j] += c[p] * vrow[j];
  }
  return push(std::move(out),
              [ic, iv, src = std::move(src), dst = std::move(dst), cols](Tape& t, std::size_t self) {
    const Tensor& g = t.node(self).adjoint;
    const Tensor& c = t.node(ic).value;
    const Tensor& v = t.node(iv).value;
    Tensor& gc = t.node(ic).adjoint;
    Tensor& gv = t.node(iv).adjoint;
    for (std::size_t p = 0; p < src.size(); ++p) {
      const double* grow = g.data() + dst[p] * cols;
      const double* vrow = v.data() + src[p] * cols;
      double* gvrow = gv.data() + src[p] * cols;
      double acc = 0.0;
      for (std::size_t j = 0; j < cols; ++j) {
        acc += grow[j] * vrow[j];
        gvrow[j] += c[p] * grow[j];
      }
      gc[p] += acc;
    }
  }, "scatter_rows_weighted");
}

Tape::Var Tape::rank_hinge(Var pred, Tensor target) {
  std::size_t ip = check(pred, "rank_hinge");
  const Tensor& p = nodes_[ip].value;
  if (p.size() != target.size()) {
    throw DimensionError("rank_hinge: prediction length " + std::to_string(p.size()) +
                         " vs target length " + std::to_string(target.size()));
  }
  target.require_finite("rank_hinge target");
  const std::size_t n = p.size();
  double loss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double term = -(p[i] - p[j]) * (target[i] - target[j]);
      if (term > 0.0) loss += term;
    }
  }
  return push(Tensor::scalar(loss),
              [ip, target = std::move(target), n](Tape& t, std::size_t self) {
    double g = t.node(self).adjoint[0];
    const Tensor& p = t.node(ip).value;
    Tensor& gp = t.node(ip).adjoint;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        double dr = target[i] - target[j];
        if (-(p[i] - p[j]) * dr > 0.0) {
          gp[i] += g * (-dr);
          gp[j] += g * dr;
        }
      }
    }
  }, "rank_hinge");
}

void Tape::backward(Var loss) {
  std::size_t il = check(loss, "backward");
  Node& root = nodes_[il];
  if (root.value.size() != 1) {
    throw UsageError("backward: loss must be a scalar, got shape " + root.value.shape_str());
  }
  for (Node& n : nodes_) n.adjoint.fill(0.0);
  root.adjoint[0] = 1.0;
  for (std::size_t i = il + 1; i-- > 0;) {
    if (nodes_[i].backprop) nodes_[i].backprop(*this, i);
  }
  for (Node& n : nodes_) {
    if (n.param != nullptr) {
      Tensor& g = n.param->gradient;
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += n.adjoint[i];
    }
  }
}

const Tensor& Tape::value(Var v) const { return nodes_[check(v, "value")].value; }

const Tensor& Tape::adjoint(Var v) const { return nodes_[check(v, "adjoint")].adjoint; }

}  // namespace hgat
