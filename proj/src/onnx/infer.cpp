#include <cmath>
#include <stdexcept>

#include "boxverify/errors.hpp"
#include "boxverify/kernels.hpp"
#include "boxverify/onnx.hpp"

namespace boxverify {

namespace {

bool all_finite(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x))
            return false;
    return true;
}

void elementwise(LayerOp::Kind kind, const std::vector<double>& x, const Tensor& c,
                 bool const_on_left, std::vector<double>& out) {
    const std::size_t n = x.size();
    out.resize(n);
    if (c.size() == n) {
        const double* a = const_on_left ? c.data.data() : x.data();
        const double* b = const_on_left ? x.data() : c.data.data();
        switch (kind) {
        case LayerOp::Kind::Add:
            kernels::add(a, b, out.data(), n);
            break;
        case LayerOp::Kind::Sub:
            kernels::sub(a, b, out.data(), n);
            break;
        case LayerOp::Kind::Mul:
            kernels::mul(a, b, out.data(), n);
            break;
        case LayerOp::Kind::Div:
            kernels::div(a, b, out.data(), n);
            break;
        default:
            throw std::logic_error("not an elementwise op");
        }
        return;
    }
    // scalar broadcast
    const double s = c.data[0];
    switch (kind) {
    case LayerOp::Kind::Add:
        for (std::size_t i = 0; i < n; ++i)
            out[i] = x[i] + s;
        break;
    case LayerOp::Kind::Sub:
        for (std::size_t i = 0; i < n; ++i)
            out[i] = const_on_left ? s - x[i] : x[i] - s;
        break;
    case LayerOp::Kind::Mul:
        for (std::size_t i = 0; i < n; ++i)
            out[i] = x[i] * s;
        break;
    case LayerOp::Kind::Div:
        for (std::size_t i = 0; i < n; ++i)
            out[i] = const_on_left ? s / x[i] : x[i] / s;
        break;
    default:
        throw std::logic_error("not an elementwise op");
    }
}

}  // namespace

std::vector<double> infer(const Network& net, std::span<const double> x) {
    if (x.size() != net.input_dim)
        throw std::invalid_argument("infer: input has length " + std::to_string(x.size()) +
                                    ", network expects " + std::to_string(net.input_dim));
    for (double v : x)
        if (!std::isfinite(v))
            throw std::invalid_argument("infer: input contains a non-finite value");

    std::vector<double> cur(x.begin(), x.end());
    std::vector<double> next;

    for (const LayerOp& layer : net.layers) {
        switch (layer.kind) {
        case LayerOp::Kind::Flatten:
            continue;

        case LayerOp::Kind::Relu:
            next.resize(cur.size());
            kernels::relu(cur.data(), next.data(), cur.size());
            break;

        case LayerOp::Kind::Sigmoid:
            next.resize(cur.size());
            kernels::sigmoid(cur.data(), next.data(), cur.size());
            break;

        case LayerOp::Kind::Tanh:
            next.resize(cur.size());
            kernels::tanh(cur.data(), next.data(), cur.size());
            break;

        case LayerOp::Kind::MatMul: {
            const auto rows = static_cast<std::size_t>(layer.constant.shape[0]);
            const auto cols = static_cast<std::size_t>(layer.constant.shape[1]);
            if (layer.constant_on_left) {
                next.resize(rows);
                kernels::matvec(layer.constant.data.data(), rows, cols, cur.data(), next.data());
            } else {
                next.resize(cols);
                kernels::vecmat(cur.data(), layer.constant.data.data(), rows, cols, next.data());
            }
            break;
        }

        case LayerOp::Kind::Gemm: {
            const auto rows = static_cast<std::size_t>(layer.constant.shape[0]);
            const auto cols = static_cast<std::size_t>(layer.constant.shape[1]);
            const std::size_t out_len = layer.trans_b ? rows : cols;
            next.resize(out_len);
            if (layer.trans_b)
                kernels::matvec(layer.constant.data.data(), rows, cols, cur.data(), next.data());
            else
                kernels::vecmat(cur.data(), layer.constant.data.data(), rows, cols, next.data());
            if (layer.alpha != 1.0)
                for (double& v : next)
                    v *= layer.alpha;
            if (!layer.bias.empty() && layer.beta != 0.0) {
                if (layer.bias.size() == 1) {
                    const double c = layer.beta * layer.bias.data[0];
                    for (double& v : next)
                        v += c;
                } else if (layer.beta == 1.0) {
                    kernels::add(next.data(), layer.bias.data.data(), next.data(), out_len);
                } else {
                    kernels::axpy(layer.beta, layer.bias.data.data(), next.data(), out_len);
                }
            }
            break;
        }

        case LayerOp::Kind::Add:
        case LayerOp::Kind::Sub:
        case LayerOp::Kind::Mul:
        case LayerOp::Kind::Div:
            elementwise(layer.kind, cur, layer.constant, layer.constant_on_left, next);
            break;
        }

        if (layer.kind != LayerOp::Kind::Relu && layer.kind != LayerOp::Kind::Sigmoid &&
            layer.kind != LayerOp::Kind::Tanh && !all_finite(next))
            throw NonFiniteOutput("layer '" + layer.name + "' produced a non-finite value");
        cur.swap(next);
    }
    return cur;
}

}  // namespace boxverify
