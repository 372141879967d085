#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "boxverify/errors.hpp"
#include "boxverify/onnx.hpp"
#include "protowire.hpp"

namespace boxverify {

namespace {

std::string sha256_hex(std::span<const std::uint8_t> bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw MalformedModel("sha-256 digest failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xF]);
    }
    return out;
}

std::optional<LayerOp::Kind> kind_from_op_type(const std::string& op) {
    if (op == "MatMul")
        return LayerOp::Kind::MatMul;
    if (op == "Add")
        return LayerOp::Kind::Add;
    if (op == "Sub")
        return LayerOp::Kind::Sub;
    if (op == "Mul")
        return LayerOp::Kind::Mul;
    if (op == "Div")
        return LayerOp::Kind::Div;
    if (op == "Gemm")
        return LayerOp::Kind::Gemm;
    if (op == "Relu")
        return LayerOp::Kind::Relu;
    if (op == "Sigmoid")
        return LayerOp::Kind::Sigmoid;
    if (op == "Tanh")
        return LayerOp::Kind::Tanh;
    if (op == "Flatten")
        return LayerOp::Kind::Flatten;
    return std::nullopt;
}

// Flattened element count of a declared value shape: a leading dimension of
// size 1 or symbolic is the batch and gets squeezed; any other leading batch
// size is rejected. Remaining dimensions multiply out.
std::size_t flattened_dim(const onnxwire::ValueInfoLite& vi) {
    if (!vi.has_shape || vi.dims.empty())
        throw MalformedModel("value '" + vi.name + "' has no usable shape");
    std::size_t start = 0;
    if (vi.dims.size() >= 2) {
        if (vi.dims[0] == 1 || vi.dims[0] == -1)
            start = 1;
        else
            throw MalformedModel("value '" + vi.name + "' has batch dimension != 1");
    }
    std::size_t prod = 1;
    for (std::size_t i = start; i < vi.dims.size(); ++i) {
        if (vi.dims[i] == -1)
            continue;  // stray symbolic dim counts as 1
        if (vi.dims[i] <= 0)
            throw MalformedModel("value '" + vi.name + "' has non-positive dimension");
        prod *= static_cast<std::size_t>(vi.dims[i]);
    }
    return prod;
}

Tensor to_tensor(const onnxwire::TensorLite& t) {
    if (t.data_type != 1 && t.data_type != 11)
        throw MalformedModel("initializer '" + t.name +
                             "' has unsupported element type " + std::to_string(t.data_type));
    std::size_t expect = 1;
    for (std::int64_t d : t.dims) {
        if (d <= 0)
            throw MalformedModel("initializer '" + t.name + "' has non-positive dimension");
        expect *= static_cast<std::size_t>(d);
    }
    if (t.dims.empty())
        expect = t.values.size() == 1 ? 1 : t.values.size();
    if (t.values.size() != expect)
        throw MalformedModel("initializer '" + t.name + "' data does not match its shape");
    Tensor out;
    out.shape = t.dims;
    out.data = t.values;
    return out;
}

// Effective (rows, cols) of a weight tensor; dimensions of size 1 beyond
// rank 2 are not tolerated, weights must be plain matrices.
std::pair<std::size_t, std::size_t> matrix_shape(const Tensor& t, const std::string& who) {
    if (t.shape.size() != 2)
        throw MalformedModel(who + ": weight tensor must have rank 2");
    return {static_cast<std::size_t>(t.shape[0]), static_cast<std::size_t>(t.shape[1])};
}

const onnxwire::AttrLite* find_attr(const onnxwire::NodeLite& n, const char* name) {
    for (const auto& a : n.attrs)
        if (a.name == name)
            return &a;
    return nullptr;
}

}  // namespace

Network load_network(std::span<const std::uint8_t> bytes) {
    onnxwire::GraphLite g = onnxwire::decode_model(bytes);

    std::map<std::string, const onnxwire::TensorLite*> initializers;
    for (const auto& t : g.initializers)
        initializers[t.name] = &t;

    // older opsets list initializers among the graph inputs; the real input
    // is the one without an initializer
    std::vector<const onnxwire::ValueInfoLite*> real_inputs;
    for (const auto& vi : g.inputs)
        if (!initializers.count(vi.name))
            real_inputs.push_back(&vi);
    if (real_inputs.size() != 1)
        throw NonChainGraph("expected exactly one graph input, found " +
                            std::to_string(real_inputs.size()));
    if (g.outputs.size() != 1)
        throw NonChainGraph("expected exactly one graph output, found " +
                            std::to_string(g.outputs.size()));

    std::map<std::string, std::vector<std::size_t>> consumers;
    for (std::size_t i = 0; i < g.nodes.size(); ++i)
        for (const auto& in : g.nodes[i].inputs)
            if (!initializers.count(in))
                consumers[in].push_back(i);

    Network net;
    net.source_digest = sha256_hex(bytes);
    net.input_dim = flattened_dim(*real_inputs[0]);
    if (net.input_dim == 0)
        throw MalformedModel("graph input has zero elements");

    std::string current = real_inputs[0]->name;
    const std::string output_name = g.outputs[0].name;
    std::size_t current_len = net.input_dim;
    std::size_t visited = 0;

    while (true) {
        auto it = consumers.find(current);
        if (it == consumers.end() || it->second.empty()) {
            if (current != output_name)
                throw MalformedModel("tensor '" + current +
                                     "' is neither consumed nor the graph output");
            break;
        }
        if (it->second.size() > 1)
            throw NonChainGraph("tensor '" + current + "' fans out to " +
                                std::to_string(it->second.size()) + " nodes");
        if (current == output_name)
            throw NonChainGraph("graph output '" + current + "' is consumed by another node");

        const onnxwire::NodeLite& node = g.nodes[it->second[0]];
        if (++visited > g.nodes.size())
            throw MalformedModel("graph contains a cycle");
        if (node.outputs.size() != 1)
            throw NonChainGraph("node '" + node.name + "' must have exactly one output");

        auto kind = kind_from_op_type(node.op_type);
        if (!kind)
            throw UnsupportedOperator("operator '" + node.op_type + "' is not supported");

        // every input other than the flowing tensor must be an initializer
        std::size_t flowing = 0;
        std::vector<const onnxwire::TensorLite*> const_inputs;
        std::vector<bool> input_is_const;
        for (const auto& in : node.inputs) {
            auto init = initializers.find(in);
            if (init != initializers.end()) {
                const_inputs.push_back(init->second);
                input_is_const.push_back(true);
            } else {
                if (in != current)
                    throw NonChainGraph("node '" + node.name +
                                        "' consumes a tensor outside the chain");
                ++flowing;
                input_is_const.push_back(false);
            }
        }
        if (flowing != 1)
            throw NonChainGraph("node '" + node.name + "' must consume the chain exactly once");

        LayerOp layer;
        layer.kind = *kind;
        layer.name = node.name.empty() ? node.op_type : node.name;

        switch (*kind) {
        case LayerOp::Kind::Relu:
        case LayerOp::Kind::Sigmoid:
        case LayerOp::Kind::Tanh:
        case LayerOp::Kind::Flatten:
            if (!const_inputs.empty() || node.inputs.size() != 1)
                throw MalformedModel("node '" + layer.name + "' takes exactly one input");
            break;

        case LayerOp::Kind::MatMul: {
            if (node.inputs.size() != 2 || const_inputs.size() != 1)
                throw MalformedModel("MatMul '" + layer.name +
                                     "' needs one constant and one chain operand");
            layer.constant = to_tensor(*const_inputs[0]);
            layer.constant_on_left = input_is_const[0];
            auto [rows, cols] = matrix_shape(layer.constant, "MatMul '" + layer.name + "'");
            if (layer.constant_on_left) {
                if (cols != current_len)
                    throw MalformedModel("MatMul '" + layer.name + "': weight is " +
                                         std::to_string(rows) + "x" + std::to_string(cols) +
                                         " but incoming vector has length " +
                                         std::to_string(current_len));
                current_len = rows;
            } else {
                if (rows != current_len)
                    throw MalformedModel("MatMul '" + layer.name + "': weight is " +
                                         std::to_string(rows) + "x" + std::to_string(cols) +
                                         " but incoming vector has length " +
                                         std::to_string(current_len));
                current_len = cols;
            }
            break;
        }

        case LayerOp::Kind::Add:
        case LayerOp::Kind::Sub:
        case LayerOp::Kind::Mul:
        case LayerOp::Kind::Div: {
            if (node.inputs.size() != 2 || const_inputs.size() != 1)
                throw MalformedModel("node '" + layer.name +
                                     "' needs one constant and one chain operand");
            layer.constant = to_tensor(*const_inputs[0]);
            layer.constant_on_left = input_is_const[0];
            const std::size_t csize = layer.constant.size();
            if (csize != current_len && csize != 1)
                throw MalformedModel("node '" + layer.name + "': constant of length " +
                                     std::to_string(csize) +
                                     " does not broadcast against vector of length " +
                                     std::to_string(current_len));
            if (layer.kind == LayerOp::Kind::Div && !layer.constant_on_left) {
                for (double v : layer.constant.data)
                    if (v == 0.0)
                        throw MalformedModel("Div '" + layer.name +
                                             "' divides by a constant containing zero");
            }
            break;
        }

        case LayerOp::Kind::Gemm: {
            if (node.inputs.size() < 2 || node.inputs.size() > 3)
                throw MalformedModel("Gemm '" + layer.name + "' takes 2 or 3 inputs");
            if (input_is_const[0])
                throw MalformedModel("Gemm '" + layer.name +
                                     "' with a constant A operand is not supported");
            if (!input_is_const[1])
                throw NonChainGraph("Gemm '" + layer.name + "' B operand must be constant");
            layer.constant = to_tensor(*initializers.at(node.inputs[1]));
            if (node.inputs.size() == 3) {
                if (!input_is_const[2])
                    throw NonChainGraph("Gemm '" + layer.name + "' C operand must be constant");
                layer.bias = to_tensor(*initializers.at(node.inputs[2]));
            }
            if (const auto* a = find_attr(node, "alpha"); a && a->has_f)
                layer.alpha = a->f;
            if (const auto* a = find_attr(node, "beta"); a && a->has_f)
                layer.beta = a->f;
            if (const auto* a = find_attr(node, "transA"); a && a->has_i && a->i != 0)
                throw MalformedModel("Gemm '" + layer.name +
                                     "': transA is not meaningful for vector input");
            if (const auto* a = find_attr(node, "transB"); a && a->has_i)
                layer.trans_b = a->i != 0;
            auto [rows, cols] = matrix_shape(layer.constant, "Gemm '" + layer.name + "'");
            const std::size_t in_len = layer.trans_b ? cols : rows;
            const std::size_t out_len = layer.trans_b ? rows : cols;
            if (in_len != current_len)
                throw MalformedModel("Gemm '" + layer.name + "': B is " + std::to_string(rows) +
                                     "x" + std::to_string(cols) +
                                     " but incoming vector has length " +
                                     std::to_string(current_len));
            if (!layer.bias.empty() && layer.bias.size() != out_len && layer.bias.size() != 1)
                throw MalformedModel("Gemm '" + layer.name + "': C does not broadcast");
            current_len = out_len;
            break;
        }
        }

        net.layers.push_back(std::move(layer));
        current = node.outputs[0];
    }

    if (visited != g.nodes.size())
        throw NonChainGraph("graph has nodes outside the input-output chain");

    if (g.outputs[0].has_shape) {
        const std::size_t declared = flattened_dim(g.outputs[0]);
        if (declared != current_len)
            throw MalformedModel("declared output size " + std::to_string(declared) +
                                 " does not match computed size " + std::to_string(current_len));
    }
    net.output_dim = current_len;
    if (net.output_dim == 0)
        throw MalformedModel("graph output has zero elements");
    return net;
}

Network load_network_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw FileError("cannot open model file: " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return load_network(std::span<const std::uint8_t>(bytes.data(), bytes.size()));
}

std::size_t input_size(const Network& net) {
    return net.input_dim;
}

}  // namespace boxverify
