// SPDX-License-Identifier: Apache-2.0
//
// dedt — diffusion-enhanced decision-transformer workbench for RIS beamforming
// Copyright (C) 2026 the dedt authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "dedt/nn.hpp"

#include <cmath>

namespace dedt::nn {

namespace {
constexpr double kGeluC = 0.7978845608028654;  // sqrt(2/pi)
constexpr double kLnEps = 1e-5;
}  // namespace

int Tape::push(Mat value, bool needs_grad, std::function<void()> back) {
    Node n;
    n.val = std::move(value);
    n.needs_grad = needs_grad;
    n.back = std::move(back);
    nodes_.push_back(std::move(n));
    return static_cast<int>(nodes_.size()) - 1;
}

int Tape::leaf(Mat value, bool needs_grad) {
    return push(std::move(value), needs_grad, nullptr);
}

Mat& Tape::grad(int id) {
    Node& n = nodes_[id];
    if (n.grad.size() == 0) n.grad = Mat::Zero(n.val.rows(), n.val.cols());
    return n.grad;
}

int Tape::matmul(int a, int b) {
    Mat out = val(a) * val(b);
    bool ng = needs_grad(a) || needs_grad(b);
    int id = push(std::move(out), ng, nullptr);
    nodes_[id].back = [this, a, b, id] {
        const Mat& g = nodes_[id].grad;
        if (needs_grad(a)) grad(a).noalias() += g * val(b).transpose();
        if (needs_grad(b)) grad(b).noalias() += val(a).transpose() * g;
    };
    return id;
}

int Tape::add(int a, int b) {
    int id = push(val(a) + val(b), needs_grad(a) || needs_grad(b), nullptr);
    nodes_[id].back = [this, a, b, id] {
        const Mat& g = nodes_[id].grad;
        if (needs_grad(a)) grad(a) += g;
        if (needs_grad(b)) grad(b) += g;
    };
    return id;
}

int Tape::sub(int a, int b) {
    int id = push(val(a) - val(b), needs_grad(a) || needs_grad(b), nullptr);
    nodes_[id].back = [this, a, b, id] {
        const Mat& g = nodes_[id].grad;
        if (needs_grad(a)) grad(a) += g;
        if (needs_grad(b)) grad(b) -= g;
    };
    return id;
}

int Tape::add_rowvec(int a, int row) {
    Mat out = val(a).rowwise() + val(row).row(0);
    int id = push(std::move(out), needs_grad(a) || needs_grad(row), nullptr);
    nodes_[id].back = [this, a, row, id] {
        const Mat& g = nodes_[id].grad;
        if (needs_grad(a)) grad(a) += g;
        if (needs_grad(row)) grad(row) += g.colwise().sum();
    };
    return id;
}

int Tape::scale(int a, double s) {
    int id = push(val(a) * s, needs_grad(a), nullptr);
    nodes_[id].back = [this, a, s, id] {
        if (needs_grad(a)) grad(a) += s * nodes_[id].grad;
    };
    return id;
}

int Tape::hadamard(int a, int b) {
    int id = push(val(a).cwiseProduct(val(b)), needs_grad(a) || needs_grad(b), nullptr);
    nodes_[id].back = [this, a, b, id] {
        const Mat& g = nodes_[id].grad;
        if (needs_grad(a)) grad(a) += g.cwiseProduct(val(b));
        if (needs_grad(b)) grad(b) += g.cwiseProduct(val(a));
    };
    return id;
}

int Tape::mul_mask(int a, Mat mask) {
    Mat out = val(a).cwiseProduct(mask);
    int id = push(std::move(out), needs_grad(a), nullptr);
    auto m = std::make_shared<Mat>(std::move(mask));
    nodes_[id].back = [this, a, m, id] {
        if (needs_grad(a)) grad(a) += nodes_[id].grad.cwiseProduct(*m);
    };
    return id;
}

int Tape::gelu(int a) {
    const Mat& x = val(a);
    Mat out(x.rows(), x.cols());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        double v = x(i);
        out(i) = 0.5 * v * (1.0 + std::tanh(kGeluC * (v + 0.044715 * v * v * v)));
    }
    int id = push(std::move(out), needs_grad(a), nullptr);
    nodes_[id].back = [this, a, id] {
        if (!needs_grad(a)) return;
        const Mat& x = val(a);
        const Mat& g = nodes_[id].grad;
        Mat& ga = grad(a);
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            double v = x(i);
            double u = kGeluC * (v + 0.044715 * v * v * v);
            double t = std::tanh(u);
            double du = kGeluC * (1.0 + 3.0 * 0.044715 * v * v);
            ga(i) += g(i) * (0.5 * (1.0 + t) + 0.5 * v * (1.0 - t * t) * du);
        }
    };
    return id;
}

int Tape::tanh_op(int a) {
    Mat out = val(a).array().tanh().matrix();
    int id = push(std::move(out), needs_grad(a), nullptr);
    nodes_[id].back = [this, a, id] {
        if (!needs_grad(a)) return;
        const Mat& y = nodes_[id].val;
        grad(a) += nodes_[id].grad.cwiseProduct((1.0 - y.array().square()).matrix());
    };
    return id;
}

int Tape::exp_op(int a) {
    Mat out = val(a).array().exp().matrix();
    int id = push(std::move(out), needs_grad(a), nullptr);
    nodes_[id].back = [this, a, id] {
        if (needs_grad(a)) grad(a) += nodes_[id].grad.cwiseProduct(nodes_[id].val);
    };
    return id;
}

int Tape::rowsum(int a) {
    Mat out = val(a).rowwise().sum();
    int id = push(std::move(out), needs_grad(a), nullptr);
    nodes_[id].back = [this, a, id] {
        if (!needs_grad(a)) return;
        const Mat& g = nodes_[id].grad;
        grad(a).colwise() += g.col(0);
    };
    return id;
}

int Tape::gather_rows(int a, std::vector<int> idx) {
    Mat out(static_cast<Eigen::Index>(idx.size()), val(a).cols());
    for (size_t r = 0; r < idx.size(); ++r) out.row(static_cast<Eigen::Index>(r)) = val(a).row(idx[r]);
    int id = push(std::move(out), needs_grad(a), nullptr);
    auto indices = std::make_shared<std::vector<int>>(std::move(idx));
    nodes_[id].back = [this, a, indices, id] {
        if (!needs_grad(a)) return;
        const Mat& g = nodes_[id].grad;
        Mat& ga = grad(a);
        for (size_t r = 0; r < indices->size(); ++r)
            ga.row((*indices)[r]) += g.row(static_cast<Eigen::Index>(r));
    };
    return id;
}

int Tape::concat_rows(int a, int b) {
    Mat out(val(a).rows() + val(b).rows(), val(a).cols());
    out.topRows(val(a).rows()) = val(a);
    out.bottomRows(val(b).rows()) = val(b);
    int id = push(std::move(out), needs_grad(a) || needs_grad(b), nullptr);
    nodes_[id].back = [this, a, b, id] {
        const Mat& g = nodes_[id].grad;
        if (needs_grad(a)) grad(a) += g.topRows(val(a).rows());
        if (needs_grad(b)) grad(b) += g.bottomRows(val(b).rows());
    };
    return id;
}

int Tape::shift_blocks(int a, int offset, int block) {
    const Mat& x = val(a);
    require(x.rows() % block == 0, "shift_blocks: rows must be a multiple of block");
    auto apply = [block](const Mat& src, int off) {
        Mat out = Mat::Zero(src.rows(), src.cols());
        const Eigen::Index nblocks = src.rows() / block;
        for (Eigen::Index b = 0; b < nblocks; ++b)
            for (int i = 0; i < block; ++i) {
                int j = i - off;
                if (j >= 0 && j < block) out.row(b * block + i) = src.row(b * block + j);
            }
        return out;
    };
    int id = push(apply(x, offset), needs_grad(a), nullptr);
    nodes_[id].back = [this, a, offset, block, apply, id] {
        if (needs_grad(a)) grad(a) += apply(nodes_[id].grad, -offset);
    };
    return id;
}

int Tape::layer_norm(int x, int gain, int bias) {
    const Mat& in = val(x);
    const Eigen::Index rows = in.rows(), cols = in.cols();
    auto xhat = std::make_shared<Mat>(rows, cols);
    auto inv_std = std::make_shared<Vec>(rows);
    Mat out(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        double mu = in.row(r).mean();
        double var = (in.row(r).array() - mu).square().mean();
        double is = 1.0 / std::sqrt(var + kLnEps);
        (*inv_std)(r) = is;
        xhat->row(r) = (in.row(r).array() - mu) * is;
        out.row(r) = xhat->row(r).cwiseProduct(val(gain).row(0)) + val(bias).row(0);
    }
    bool ng = needs_grad(x) || needs_grad(gain) || needs_grad(bias);
    int id = push(std::move(out), ng, nullptr);
    nodes_[id].back = [this, x, gain, bias, xhat, inv_std, id] {
        const Mat& g = nodes_[id].grad;
        if (needs_grad(gain)) grad(gain) += (g.cwiseProduct(*xhat)).colwise().sum();
        if (needs_grad(bias)) grad(bias) += g.colwise().sum();
        if (!needs_grad(x)) return;
        Mat& gx = grad(x);
        const Eigen::Index cols = g.cols();
        for (Eigen::Index r = 0; r < g.rows(); ++r) {
            Eigen::RowVectorXd dxhat = g.row(r).cwiseProduct(val(gain).row(0));
            double m1 = dxhat.mean();
            double m2 = dxhat.cwiseProduct(xhat->row(r)).mean();
            gx.row(r) += (*inv_std)(r) *
                         (dxhat.array() - m1 - xhat->row(r).array() * m2).matrix();
        }
        (void)cols;
    };
    return id;
}

int Tape::attention(int q, int k, int v, int heads, std::vector<int> q_lens,
                    std::vector<int> k_lens, bool causal) {
    const Mat& Q = val(q);
    const Mat& K = val(k);
    const Mat& V = val(v);
    const int dim = static_cast<int>(Q.cols());
    require(dim % heads == 0, "attention: head count must divide width");
    require(q_lens.size() == k_lens.size(), "attention: segment count mismatch");
    const int dh = dim / heads;
    const double sc = 1.0 / std::sqrt(static_cast<double>(dh));

    auto softmaxes = std::make_shared<std::vector<Mat>>();
    Mat out = Mat::Zero(Q.rows(), dim);
    Eigen::Index qo = 0, ko = 0;
    for (size_t s = 0; s < q_lens.size(); ++s) {
        const int lq = q_lens[s], lk = k_lens[s];
        if (causal) require(lq == lk, "attention: causal segments must be square");
        if (lk > 0) {
            for (int h = 0; h < heads; ++h) {
                Mat qh = Q.block(qo, h * dh, lq, dh);
                Mat kh = K.block(ko, h * dh, lk, dh);
                Mat scores = sc * (qh * kh.transpose());
                if (causal)
                    for (int i = 0; i < lq; ++i)
                        for (int j = i + 1; j < lk; ++j) scores(i, j) = -1e30;
                Mat a(lq, lk);
                for (int i = 0; i < lq; ++i) {
                    double mx = scores.row(i).maxCoeff();
                    Eigen::RowVectorXd e = (scores.row(i).array() - mx).exp();
                    a.row(i) = e / e.sum();
                }
                out.block(qo, h * dh, lq, dh).noalias() = a * V.block(ko, h * dh, lk, dh);
                softmaxes->push_back(std::move(a));
            }
        } else {
            for (int h = 0; h < heads; ++h) softmaxes->push_back(Mat());
        }
        qo += lq;
        ko += lk;
    }

    bool ng = needs_grad(q) || needs_grad(k) || needs_grad(v);
    int id = push(std::move(out), ng, nullptr);
    auto ql = std::make_shared<std::vector<int>>(std::move(q_lens));
    auto kl = std::make_shared<std::vector<int>>(std::move(k_lens));
    nodes_[id].back = [this, q, k, v, heads, dh, sc, softmaxes, ql, kl, id] {
        const Mat& g = nodes_[id].grad;
        const Mat& Q = val(q);
        const Mat& K = val(k);
        const Mat& V = val(v);
        Mat& gq = grad(q);
        Mat& gk = grad(k);
        Mat& gv = grad(v);
        Eigen::Index qo = 0, ko = 0;
        size_t slot = 0;
        for (size_t s = 0; s < ql->size(); ++s) {
            const int lq = (*ql)[s], lk = (*kl)[s];
            if (lk > 0) {
                for (int h = 0; h < heads; ++h, ++slot) {
                    const Mat& a = (*softmaxes)[slot];
                    Mat go = g.block(qo, h * dh, lq, dh);
                    Mat vh = V.block(ko, h * dh, lk, dh);
                    Mat da = go * vh.transpose();
                    if (needs_grad(v)) gv.block(ko, h * dh, lk, dh).noalias() += a.transpose() * go;
                    Vec row_dot = (da.cwiseProduct(a)).rowwise().sum();
                    Mat ds = a.cwiseProduct(da.colwise() - row_dot);
                    if (needs_grad(q))
                        gq.block(qo, h * dh, lq, dh).noalias() +=
                            sc * (ds * K.block(ko, h * dh, lk, dh));
                    if (needs_grad(k))
                        gk.block(ko, h * dh, lk, dh).noalias() +=
                            sc * (ds.transpose() * Q.block(qo, h * dh, lq, dh));
                }
            } else {
                slot += heads;
            }
            qo += lq;
            ko += lk;
        }
    };
    return id;
}

int Tape::minimum(int a, int b) {
    int id = push(val(a).cwiseMin(val(b)), needs_grad(a) || needs_grad(b), nullptr);
    nodes_[id].back = [this, a, b, id] {
        const Mat& g = nodes_[id].grad;
        const Mat& av = val(a);
        const Mat& bv = val(b);
        for (Eigen::Index i = 0; i < g.size(); ++i) {
            if (av(i) <= bv(i)) {
                if (needs_grad(a)) grad(a)(i) += g(i);
            } else {
                if (needs_grad(b)) grad(b)(i) += g(i);
            }
        }
    };
    return id;
}

int Tape::clamp_op(int a, double lo, double hi) {
    Mat out = val(a).cwiseMax(lo).cwiseMin(hi);
    int id = push(std::move(out), needs_grad(a), nullptr);
    nodes_[id].back = [this, a, lo, hi, id] {
        if (!needs_grad(a)) return;
        const Mat& g = nodes_[id].grad;
        const Mat& x = val(a);
        Mat& ga = grad(a);
        for (Eigen::Index i = 0; i < g.size(); ++i)
            if (x(i) > lo && x(i) < hi) ga(i) += g(i);
    };
    return id;
}

int Tape::mul_rowvec(int a, int row) {
    Mat out = val(a).array().rowwise() * val(row).row(0).array();
    int id = push(std::move(out), needs_grad(a) || needs_grad(row), nullptr);
    nodes_[id].back = [this, a, row, id] {
        const Mat& g = nodes_[id].grad;
        if (needs_grad(a))
            grad(a) += (g.array().rowwise() * val(row).row(0).array()).matrix();
        if (needs_grad(row)) grad(row) += g.cwiseProduct(val(a)).colwise().sum();
    };
    return id;
}

int Tape::add_scalar_node(int a, int s) {
    require(val(s).size() == 1, "add_scalar_node: second operand must be 1x1");
    Mat out = val(a).array() + val(s)(0, 0);
    int id = push(std::move(out), needs_grad(a) || needs_grad(s), nullptr);
    nodes_[id].back = [this, a, s, id] {
        const Mat& g = nodes_[id].grad;
        if (needs_grad(a)) grad(a) += g;
        if (needs_grad(s)) grad(s)(0, 0) += g.sum();
    };
    return id;
}

int Tape::sq_error(int a, Mat target, double w) {
    Mat diff = val(a) - target;
    Mat out(1, 1);
    out(0, 0) = w * diff.squaredNorm();
    int id = push(std::move(out), needs_grad(a), nullptr);
    auto d = std::make_shared<Mat>(std::move(diff));
    nodes_[id].back = [this, a, d, w, id] {
        if (needs_grad(a)) grad(a) += (2.0 * w * nodes_[id].grad(0, 0)) * (*d);
    };
    return id;
}

int Tape::weighted_sum(int a, Mat w) {
    Mat out(1, 1);
    out(0, 0) = val(a).cwiseProduct(w).sum();
    int id = push(std::move(out), needs_grad(a), nullptr);
    auto wp = std::make_shared<Mat>(std::move(w));
    nodes_[id].back = [this, a, wp, id] {
        if (needs_grad(a)) grad(a) += nodes_[id].grad(0, 0) * (*wp);
    };
    return id;
}

void Tape::backward(int loss_id) {
    require(nodes_[loss_id].val.size() == 1, "backward: loss must be scalar");
    grad(loss_id).setOnes();
    for (int id = loss_id; id >= 0; --id) {
        Node& n = nodes_[id];
        if (!n.back || !n.needs_grad || n.grad.size() == 0) continue;
        n.back();
    }
}

// ---- parameters ----------------------------------------------------------

Mat& ParamStore::create(const std::string& name, Eigen::Index rows, Eigen::Index cols,
                        double init_std, Rng& rng) {
    auto it = params_.find(name);
    if (it != params_.end()) return it->second.value;
    Param p;
    p.value.resize(rows, cols);
    if (init_std > 0.0) {
        for (Eigen::Index i = 0; i < p.value.size(); ++i) p.value(i) = init_std * rng.normal();
    } else {
        p.value.setZero();
    }
    p.m = Mat::Zero(rows, cols);
    p.v = Mat::Zero(rows, cols);
    return params_.emplace(name, std::move(p)).first->second.value;
}

Mat& ParamStore::create_const(const std::string& name, Eigen::Index rows, Eigen::Index cols,
                              double fill) {
    auto it = params_.find(name);
    if (it != params_.end()) return it->second.value;
    Param p;
    p.value = Mat::Constant(rows, cols, fill);
    p.m = Mat::Zero(rows, cols);
    p.v = Mat::Zero(rows, cols);
    return params_.emplace(name, std::move(p)).first->second.value;
}

Param& ParamStore::at(const std::string& name) {
    auto it = params_.find(name);
    require(it != params_.end(), "unknown parameter: " + name);
    return it->second;
}

const Param& ParamStore::at(const std::string& name) const {
    auto it = params_.find(name);
    require(it != params_.end(), "unknown parameter: " + name);
    return it->second;
}

void AdamW::step(ParamStore& store, const std::map<std::string, Mat>& grads,
                 const std::vector<std::string>& frozen) const {
    double clip_scale = 1.0;
    if (grad_clip > 0.0) {
        double norm = global_grad_norm(grads);
        if (norm > grad_clip) clip_scale = grad_clip / norm;
    }
    store.step_count += 1;
    const double t = static_cast<double>(store.step_count);
    const double bc1 = 1.0 - std::pow(beta1, t);
    const double bc2 = 1.0 - std::pow(beta2, t);
    for (auto& [name, grad] : grads) {
        bool skip = false;
        for (const auto& f : frozen)
            if (name.rfind(f, 0) == 0) skip = true;
        if (skip) continue;
        Param& p = store.at(name);
        Mat g = grad * clip_scale;
        p.m = beta1 * p.m + (1.0 - beta1) * g;
        p.v = beta2 * p.v + (1.0 - beta2) * g.cwiseProduct(g);
        Mat mhat = p.m / bc1;
        Mat vhat = p.v / bc2;
        if (weight_decay > 0.0) p.value -= lr * weight_decay * p.value;
        p.value -= lr * mhat.cwiseQuotient(vhat.cwiseSqrt().array().matrix() +
                                            Mat::Constant(vhat.rows(), vhat.cols(), eps));
    }
}

// ---- graph ---------------------------------------------------------------

Rng& Graph::init_rng() {
    if (rng_) return *rng_;
    if (!fallback_rng_) fallback_rng_ = std::make_unique<Rng>(0x5eed);
    return *fallback_rng_;
}

int Graph::P(const std::string& name, Eigen::Index rows, Eigen::Index cols,
             double init_std, double init_const) {
    auto it = bound_.find(name);
    if (it != bound_.end()) return it->second;
    if (!store_->has(name)) {
        if (init_std == 0.0 && init_const != 0.0)
            store_->create_const(name, rows, cols, init_const);
        else
            store_->create(name, rows, cols, init_std, init_rng());
    }
    int id = tape.leaf(store_->at(name).value, true);
    bound_.emplace(name, id);
    return id;
}

int Graph::dropout(int x, double p) {
    if (!train_ || p <= 0.0) return x;
    const Mat& v = tape.val(x);
    Mat mask(v.rows(), v.cols());
    const double keep = 1.0 - p;
    Rng& r = init_rng();
    for (Eigen::Index i = 0; i < mask.size(); ++i)
        mask(i) = (r.uniform() < keep) ? 1.0 / keep : 0.0;
    return tape.mul_mask(x, std::move(mask));
}

std::map<std::string, Mat> Graph::grads() {
    std::map<std::string, Mat> out;
    for (auto& [name, id] : bound_) {
        Mat& g = tape.grad(id);
        out.emplace(name, g);
    }
    return out;
}

// ---- layers --------------------------------------------------------------

int linear(Graph& g, int x, const std::string& prefix, int in_dim, int out_dim,
           double init_std) {
    int w = g.P(prefix + ".w", in_dim, out_dim, init_std);
    int b = g.P(prefix + ".b", 1, out_dim, 0.0);
    return g.tape.add_rowvec(g.tape.matmul(x, w), b);
}

int layer_norm(Graph& g, int x, const std::string& prefix, int dim) {
    int gain = g.P(prefix + ".g", 1, dim, 0.0, 1.0);
    int bias = g.P(prefix + ".b", 1, dim, 0.0);
    return g.tape.layer_norm(x, gain, bias);
}

namespace {

int ffn(Graph& g, int x, const std::string& prefix, int dim, int ffn_mult) {
    int h = linear(g, x, prefix + ".fc1", dim, dim * ffn_mult);
    h = g.tape.gelu(h);
    return linear(g, h, prefix + ".fc2", dim * ffn_mult, dim);
}

int mha(Graph& g, int xq, int xkv, const std::string& prefix, int dim, int heads,
        const std::vector<int>& q_lens, const std::vector<int>& k_lens, bool causal) {
    int q = linear(g, xq, prefix + ".q", dim, dim);
    int k = linear(g, xkv, prefix + ".k", dim, dim);
    int v = linear(g, xkv, prefix + ".v", dim, dim);
    int att = g.tape.attention(q, k, v, heads, q_lens, k_lens, causal);
    return linear(g, att, prefix + ".o", dim, dim);
}

}  // namespace

int transformer_block(Graph& g, int x, const std::string& prefix, int dim, int heads,
                      const std::vector<int>& lens, bool causal, double dropout_p,
                      int ffn_mult) {
    int h = layer_norm(g, x, prefix + ".ln1", dim);
    h = mha(g, h, h, prefix + ".attn", dim, heads, lens, lens, causal);
    h = g.dropout(h, dropout_p);
    x = g.tape.add(x, h);
    int f = layer_norm(g, x, prefix + ".ln2", dim);
    f = ffn(g, f, prefix + ".ffn", dim, ffn_mult);
    f = g.dropout(f, dropout_p);
    return g.tape.add(x, f);
}

int cross_attention_block(Graph& g, int x, int kv, const std::string& prefix, int dim,
                          int heads, const std::vector<int>& q_lens,
                          const std::vector<int>& k_lens, double dropout_p, int ffn_mult) {
    int h = layer_norm(g, x, prefix + ".ln1", dim);
    int kvn = layer_norm(g, kv, prefix + ".lnkv", dim);
    h = mha(g, h, kvn, prefix + ".attn", dim, heads, q_lens, k_lens, false);
    h = g.dropout(h, dropout_p);
    x = g.tape.add(x, h);
    int f = layer_norm(g, x, prefix + ".ln2", dim);
    f = ffn(g, f, prefix + ".ffn", dim, ffn_mult);
    f = g.dropout(f, dropout_p);
    return g.tape.add(x, f);
}

Mat sinusoidal_embedding(const std::vector<double>& values, int dim) {
    Mat out(static_cast<Eigen::Index>(values.size()), dim);
    const int half = dim / 2;
    for (size_t r = 0; r < values.size(); ++r) {
        for (int i = 0; i < half; ++i) {
            double freq = std::pow(10000.0, -2.0 * i / static_cast<double>(dim));
            out(static_cast<Eigen::Index>(r), i) = std::sin(values[r] * freq);
            out(static_cast<Eigen::Index>(r), half + i) = std::cos(values[r] * freq);
        }
        for (int i = 2 * half; i < dim; ++i) out(static_cast<Eigen::Index>(r), i) = 0.0;
    }
    return out;
}

double global_grad_norm(const std::map<std::string, Mat>& grads) {
    double ss = 0.0;
    for (const auto& [name, g] : grads) ss += g.squaredNorm();
    return std::sqrt(ss);
}

}  // namespace dedt::nn
