#pragma once

// Minimal protobuf wire-format reader covering the slice of onnx.proto this
// tool consumes: ModelProto -> GraphProto -> Node/Tensor/ValueInfo. Unknown
// fields are skipped, so decoding is opset independent.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace boxverify::onnxwire {

struct AttrLite {
    std::string name;
    bool has_f = false;
    double f = 0.0;
    bool has_i = false;
    std::int64_t i = 0;
};

struct NodeLite {
    std::string op_type;
    std::string name;
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    std::vector<AttrLite> attrs;
};

struct TensorLite {
    std::string name;
    std::vector<std::int64_t> dims;
    std::int32_t data_type = 0;  // onnx enum: 1 = float32, 11 = float64
    std::vector<double> values;  // widened on decode
};

struct ValueInfoLite {
    std::string name;
    bool has_shape = false;
    std::vector<std::int64_t> dims;  // -1 encodes a symbolic dimension
};

struct GraphLite {
    std::vector<NodeLite> nodes;
    std::vector<TensorLite> initializers;
    std::vector<ValueInfoLite> inputs;
    std::vector<ValueInfoLite> outputs;
};

// Throws MalformedModel on wire-level corruption or unsupported tensor
// encodings.
GraphLite decode_model(std::span<const std::uint8_t> bytes);

}  // namespace boxverify::onnxwire
