#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace boxverify {

// Dense row-major tensor, already widened to binary64.
struct Tensor {
    std::vector<std::int64_t> shape;
    std::vector<double> data;

    std::size_t size() const { return data.size(); }
    bool empty() const { return data.empty(); }
};

// One step of a single-chain feedforward model.
struct LayerOp {
    enum class Kind { MatMul, Add, Sub, Mul, Div, Gemm, Relu, Sigmoid, Tanh, Flatten };

    Kind kind = Kind::Relu;
    std::string name;

    // MatMul weight or the constant operand of Add/Sub/Mul/Div; Gemm B.
    Tensor constant;
    // true when the constant sits in operand position 0 (c - x, c / x, W @ x)
    bool constant_on_left = false;

    // Gemm only
    Tensor bias;  // C, may be empty
    double alpha = 1.0;
    double beta = 1.0;
    bool trans_b = false;
};

// A loaded feedforward model, evaluable as a pure vector -> vector function.
// Immutable after load; infer() is reentrant.
struct Network {
    std::size_t input_dim = 0;
    std::size_t output_dim = 0;
    std::vector<LayerOp> layers;
    std::string source_digest;  // sha-256 of the model file bytes, lowercase hex
};

// Decodes an ONNX protobuf model restricted to single-chain graphs over the
// LayerOp operator set. Throws UnsupportedOperator, NonChainGraph or
// MalformedModel.
Network load_network(std::span<const std::uint8_t> bytes);
Network load_network_file(const std::string& path);

std::size_t input_size(const Network& net);

// Deterministic binary64 forward pass. Throws NonFiniteOutput if any
// arithmetic layer overflows to inf/NaN.
std::vector<double> infer(const Network& net, std::span<const double> x);

}  // namespace boxverify
