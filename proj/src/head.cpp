#include "persona/head.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "persona/rng.hpp"

namespace persona {

namespace {

void check_config(const HeadConfig& config) {
    if (config.input_dim < 1 || config.hidden_dim < 1) {
        throw std::invalid_argument("head config: dims must be positive");
    }
    if (config.layers < 1) {
        throw std::invalid_argument("head config: layers must be >= 1");
    }
    if (config.dropout_p < 0.0 || config.dropout_p >= 1.0) {
        throw std::invalid_argument("head config: dropout_p must be in [0, 1)");
    }
}

Matrix init_matrix(size_t rows, size_t cols, Rng& rng) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(cols));
    Matrix m(rows, cols);
    for (double& v : m.data) {
        v = rng.uniform(-bound, bound);
    }
    return m;
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

void add_outer(Matrix& acc, const std::vector<double>& col, const std::vector<double>& row) {
    for (size_t i = 0; i < acc.rows; ++i) {
        double* arow = acc.row(i);
        const double ci = col[i];
        for (size_t j = 0; j < acc.cols; ++j) {
            arow[j] += ci * row[j];
        }
    }
}

void add_to(std::vector<double>& acc, const std::vector<double>& v) {
    for (size_t i = 0; i < acc.size(); ++i) {
        acc[i] += v[i];
    }
}

struct GateActivations {
    std::vector<double> z, r, hbar, h;
};

GateActivations gru_step_full(const GruLayerParams& p, const std::vector<double>& x,
                              const std::vector<double>& h_prev) {
    if (x.size() != p.wz.cols || h_prev.size() != p.uz.cols || p.wz.rows != p.uz.rows) {
        throw std::invalid_argument("gru_step: shape mismatch");
    }
    const size_t hidden = p.wz.rows;
    GateActivations g;
    g.z = matvec(p.wz, x);
    add_to(g.z, matvec(p.uz, h_prev));
    g.r = matvec(p.wr, x);
    add_to(g.r, matvec(p.ur, h_prev));
    for (size_t i = 0; i < hidden; ++i) {
        g.z[i] = sigmoid(g.z[i] + p.bz[i]);
        g.r[i] = sigmoid(g.r[i] + p.br[i]);
    }
    std::vector<double> gated(hidden);
    for (size_t i = 0; i < hidden; ++i) {
        gated[i] = g.r[i] * h_prev[i];
    }
    g.hbar = matvec(p.wh, x);
    add_to(g.hbar, matvec(p.uh, gated));
    g.h.resize(hidden);
    for (size_t i = 0; i < hidden; ++i) {
        g.hbar[i] = std::tanh(g.hbar[i] + p.bh[i]);
        g.h[i] = (1.0 - g.z[i]) * h_prev[i] + g.z[i] * g.hbar[i];
    }
    return g;
}

}  // namespace

HeadParams init_head(const HeadConfig& config) {
    check_config(config);
    const size_t input = static_cast<size_t>(config.input_dim);
    const size_t hidden = static_cast<size_t>(config.hidden_dim);
    Rng rng(config.seed);

    HeadParams params;
    params.config = config;
    if (config.kind == HeadKind::gru) {
        params.gru_layers.resize(static_cast<size_t>(config.layers));
        for (int l = 0; l < config.layers; ++l) {
            const size_t in = l == 0 ? input : hidden;
            GruLayerParams& layer = params.gru_layers[static_cast<size_t>(l)];
            layer.wz = init_matrix(hidden, in, rng);
            layer.uz = init_matrix(hidden, hidden, rng);
            layer.bz.assign(hidden, 0.0);
            layer.wr = init_matrix(hidden, in, rng);
            layer.ur = init_matrix(hidden, hidden, rng);
            layer.br.assign(hidden, 0.0);
            layer.wh = init_matrix(hidden, in, rng);
            layer.uh = init_matrix(hidden, hidden, rng);
            layer.bh.assign(hidden, 0.0);
        }
    } else {
        params.pool_w = init_matrix(hidden, input, rng);
        params.pool_b.assign(hidden, 0.0);
    }
    for (size_t a = 0; a < 4; ++a) {
        params.axis_w[a] = init_matrix(2, hidden, rng);
        params.axis_b[a].assign(2, 0.0);
    }
    params.type16_w = init_matrix(16, hidden, rng);
    params.type16_b.assign(16, 0.0);
    return params;
}

HeadParams zeros_like(const HeadParams& params) {
    HeadParams z = params;
    visit_tensors(z, [](std::vector<double>& t) { std::fill(t.begin(), t.end(), 0.0); });
    return z;
}

std::vector<std::vector<double>*> tensor_list(HeadParams& params) {
    std::vector<std::vector<double>*> out;
    visit_tensors(params, [&out](std::vector<double>& t) { out.push_back(&t); });
    return out;
}

std::vector<const std::vector<double>*> tensor_list(const HeadParams& params) {
    std::vector<const std::vector<double>*> out;
    visit_tensors(params, [&out](const std::vector<double>& t) { out.push_back(&t); });
    return out;
}

std::vector<double> gru_step(const GruLayerParams& params, const std::vector<double>& x,
                             const std::vector<double>& h_prev) {
    return gru_step_full(params, x, h_prev).h;
}

ForwardResult head_forward(const HeadParams& params, const std::vector<Embedding>& sequence,
                           HeadMode mode, uint64_t dropout_seed) {
    if (sequence.empty()) {
        throw std::invalid_argument("head_forward: empty sequence");
    }
    const HeadConfig& config = params.config;
    for (const Embedding& e : sequence) {
        if (e.dim() != static_cast<size_t>(config.input_dim)) {
            throw std::invalid_argument("head_forward: embedding dim differs from input_dim");
        }
    }
    const size_t T = sequence.size();
    const size_t hidden = static_cast<size_t>(config.hidden_dim);
    const bool train = mode == HeadMode::train;

    ForwardResult result;
    ForwardTrace trace;
    trace.seq_len = T;

    if (config.kind == HeadKind::meanpool) {
        std::vector<double> mean(static_cast<size_t>(config.input_dim), 0.0);
        for (const Embedding& e : sequence) {
            add_to(mean, e.vector);
        }
        const double inv = 1.0 / static_cast<double>(T);
        for (double& v : mean) {
            v *= inv;
        }
        result.h_final = matvec(params.pool_w, mean);
        add_to(result.h_final, params.pool_b);
        if (train) {
            trace.pooled_mean = std::move(mean);
            result.trace = std::move(trace);
        }
        return result;
    }

    const size_t L = params.gru_layers.size();
    const bool mask_layers = train && config.dropout_p > 0.0 && L > 1;
    Rng rng(dropout_seed);
    const double keep_scale = 1.0 / (1.0 - config.dropout_p);

    trace.steps.assign(L, {});
    if (mask_layers) {
        trace.dropout.assign(L, {});
    }
    std::vector<std::vector<double>> h(L, std::vector<double>(hidden, 0.0));
    for (size_t t = 0; t < T; ++t) {
        std::vector<double> x = sequence[t].vector;
        for (size_t l = 0; l < L; ++l) {
            if (l > 0 && mask_layers) {
                // Fresh inverted-dropout mask per layer boundary per step.
                std::vector<double> mask(x.size());
                for (size_t i = 0; i < x.size(); ++i) {
                    mask[i] = rng.next_double() < config.dropout_p ? 0.0 : keep_scale;
                    x[i] *= mask[i];
                }
                trace.dropout[l].push_back(std::move(mask));
            }
            GateActivations g = gru_step_full(params.gru_layers[l], x, h[l]);
            if (train) {
                GruStepTrace step;
                step.x = std::move(x);
                step.h_prev = h[l];
                step.z = g.z;
                step.r = g.r;
                step.hbar = g.hbar;
                trace.steps[l].push_back(std::move(step));
            }
            h[l] = std::move(g.h);
            x = h[l];
        }
    }
    result.h_final = h[L - 1];
    if (train) {
        result.trace = std::move(trace);
    }
    return result;
}

std::vector<double> classifier_forward(const HeadParams& params,
                                       const std::vector<double>& h_final, ClsTask task) {
    const Matrix* w = nullptr;
    const std::vector<double>* b = nullptr;
    switch (task) {
        case ClsTask::ei:
        case ClsTask::sn:
        case ClsTask::tf:
        case ClsTask::jp: {
            const size_t a = static_cast<size_t>(task);
            w = &params.axis_w[a];
            b = &params.axis_b[a];
            break;
        }
        case ClsTask::type16:
            w = &params.type16_w;
            b = &params.type16_b;
            break;
        default:
            throw std::invalid_argument("classifier_forward: unknown task");
    }
    std::vector<double> logits = matvec(*w, h_final);
    add_to(logits, *b);
    return logits;
}

HeadParams head_backward(const HeadParams& params, const ForwardTrace& trace,
                         const std::vector<std::pair<ClsTask, std::vector<double>>>& dlogits) {
    const HeadConfig& config = params.config;
    const size_t hidden = static_cast<size_t>(config.hidden_dim);
    HeadParams grads = zeros_like(params);

    // Recover h_final from the trace for the classifier weight gradients.
    std::vector<double> h_final;
    if (config.kind == HeadKind::meanpool) {
        if (trace.pooled_mean.empty()) {
            throw std::invalid_argument("head_backward: trace does not match a meanpool head");
        }
        h_final = matvec(params.pool_w, trace.pooled_mean);
        add_to(h_final, params.pool_b);
    } else {
        if (trace.steps.size() != params.gru_layers.size() || trace.steps.back().empty()) {
            throw std::invalid_argument("head_backward: trace does not match the recurrent stack");
        }
        const GruStepTrace& last = trace.steps.back().back();
        h_final.resize(hidden);
        for (size_t i = 0; i < hidden; ++i) {
            h_final[i] = (1.0 - last.z[i]) * last.h_prev[i] + last.z[i] * last.hbar[i];
        }
    }

    std::vector<double> dh_final(hidden, 0.0);
    for (const auto& [task, dlogit] : dlogits) {
        Matrix* dw = nullptr;
        std::vector<double>* db = nullptr;
        const Matrix* w = nullptr;
        switch (task) {
            case ClsTask::ei:
            case ClsTask::sn:
            case ClsTask::tf:
            case ClsTask::jp: {
                const size_t a = static_cast<size_t>(task);
                dw = &grads.axis_w[a];
                db = &grads.axis_b[a];
                w = &params.axis_w[a];
                break;
            }
            case ClsTask::type16:
                dw = &grads.type16_w;
                db = &grads.type16_b;
                w = &params.type16_w;
                break;
            default:
                throw std::invalid_argument("head_backward: unknown task");
        }
        if (dlogit.size() != w->rows) {
            throw std::invalid_argument("head_backward: upstream gradient length mismatch");
        }
        add_outer(*dw, dlogit, h_final);
        add_to(*db, dlogit);
        add_to(dh_final, matvec_transposed(*w, dlogit));
    }

    if (config.kind == HeadKind::meanpool) {
        add_outer(grads.pool_w, dh_final, trace.pooled_mean);
        add_to(grads.pool_b, dh_final);
        return grads;
    }

    const size_t L = params.gru_layers.size();
    const size_t T = trace.seq_len;
    // dout[t]: gradient w.r.t. this layer's output at step t, fed by the
    // layer above (through its dropout mask) and, for the top layer's last
    // step, by the classifiers.
    std::vector<std::vector<double>> dout(T, std::vector<double>(hidden, 0.0));
    dout[T - 1] = dh_final;

    for (size_t l = L; l-- > 0;) {
        const GruLayerParams& p = params.gru_layers[l];
        GruLayerParams& g = grads.gru_layers[l];
        const size_t in_dim = p.wz.cols;
        std::vector<std::vector<double>> dbelow;
        if (l > 0) {
            dbelow.assign(T, std::vector<double>(hidden, 0.0));
        }
        std::vector<double> dh_carry(hidden, 0.0);
        for (size_t t = T; t-- > 0;) {
            const GruStepTrace& s = trace.steps[l][t];
            std::vector<double> dh = dout[t];
            add_to(dh, dh_carry);

            std::vector<double> da_z(hidden), da_h(hidden), dh_prev(hidden), gated(hidden);
            for (size_t i = 0; i < hidden; ++i) {
                const double dz = dh[i] * (s.hbar[i] - s.h_prev[i]);
                da_z[i] = dz * s.z[i] * (1.0 - s.z[i]);
                const double dhbar = dh[i] * s.z[i];
                da_h[i] = dhbar * (1.0 - s.hbar[i] * s.hbar[i]);
                dh_prev[i] = dh[i] * (1.0 - s.z[i]);
                gated[i] = s.r[i] * s.h_prev[i];
            }
            std::vector<double> dgated = matvec_transposed(p.uh, da_h);
            std::vector<double> da_r(hidden);
            for (size_t i = 0; i < hidden; ++i) {
                const double dr = dgated[i] * s.h_prev[i];
                da_r[i] = dr * s.r[i] * (1.0 - s.r[i]);
                dh_prev[i] += dgated[i] * s.r[i];
            }
            add_to(dh_prev, matvec_transposed(p.uz, da_z));
            add_to(dh_prev, matvec_transposed(p.ur, da_r));

            add_outer(g.wz, da_z, s.x);
            add_outer(g.uz, da_z, s.h_prev);
            add_to(g.bz, da_z);
            add_outer(g.wr, da_r, s.x);
            add_outer(g.ur, da_r, s.h_prev);
            add_to(g.br, da_r);
            add_outer(g.wh, da_h, s.x);
            add_outer(g.uh, da_h, gated);
            add_to(g.bh, da_h);

            if (l > 0) {
                std::vector<double> dx(in_dim, 0.0);
                add_to(dx, matvec_transposed(p.wz, da_z));
                add_to(dx, matvec_transposed(p.wr, da_r));
                add_to(dx, matvec_transposed(p.wh, da_h));
                const bool masked = l < trace.dropout.size() && !trace.dropout[l].empty();
                for (size_t i = 0; i < in_dim; ++i) {
                    dbelow[t][i] = masked ? dx[i] * trace.dropout[l][t][i] : dx[i];
                }
            }
            dh_carry = std::move(dh_prev);
        }
        if (l > 0) {
            dout = std::move(dbelow);
        }
    }
    return grads;
}

}  // namespace persona
