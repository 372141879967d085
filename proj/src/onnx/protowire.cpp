#include "protowire.hpp"

#include <bit>
#include <cstring>

#include "boxverify/errors.hpp"

namespace boxverify::onnxwire {

namespace {

constexpr std::uint32_t kVarint = 0;
constexpr std::uint32_t kFixed64 = 1;
constexpr std::uint32_t kLenDelim = 2;
constexpr std::uint32_t kFixed32 = 5;

class Reader {
public:
    explicit Reader(std::span<const std::uint8_t> data) : p_(data.data()), end_(p_ + data.size()) {}

    bool done() const { return p_ >= end_; }

    std::uint64_t varint() {
        std::uint64_t value = 0;
        int shift = 0;
        while (true) {
            if (p_ >= end_)
                throw MalformedModel("truncated varint");
            const std::uint8_t byte = *p_++;
            if (shift < 64)
                value |= static_cast<std::uint64_t>(byte & 0x7F) << shift;
            if ((byte & 0x80) == 0)
                return value;
            shift += 7;
            if (shift > 70)
                throw MalformedModel("overlong varint");
        }
    }

    std::uint32_t fixed32() {
        if (end_ - p_ < 4)
            throw MalformedModel("truncated fixed32");
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i)
            v |= static_cast<std::uint32_t>(p_[i]) << (8 * i);
        p_ += 4;
        return v;
    }

    std::uint64_t fixed64() {
        if (end_ - p_ < 8)
            throw MalformedModel("truncated fixed64");
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i)
            v |= static_cast<std::uint64_t>(p_[i]) << (8 * i);
        p_ += 8;
        return v;
    }

    std::span<const std::uint8_t> bytes() {
        const std::uint64_t len = varint();
        if (static_cast<std::uint64_t>(end_ - p_) < len)
            throw MalformedModel("truncated length-delimited field");
        std::span<const std::uint8_t> out(p_, static_cast<std::size_t>(len));
        p_ += len;
        return out;
    }

    std::pair<std::uint32_t, std::uint32_t> tag() {
        const std::uint64_t key = varint();
        return {static_cast<std::uint32_t>(key >> 3), static_cast<std::uint32_t>(key & 7)};
    }

    void skip(std::uint32_t wire_type) {
        switch (wire_type) {
        case kVarint:
            varint();
            break;
        case kFixed64:
            fixed64();
            break;
        case kLenDelim:
            bytes();
            break;
        case kFixed32:
            fixed32();
            break;
        default:
            throw MalformedModel("unsupported wire type " + std::to_string(wire_type));
        }
    }

private:
    const std::uint8_t* p_;
    const std::uint8_t* end_;
};

std::string to_string(std::span<const std::uint8_t> b) {
    return std::string(reinterpret_cast<const char*>(b.data()), b.size());
}

double float_from_bits(std::uint32_t bits) {
    return static_cast<double>(std::bit_cast<float>(bits));
}

double double_from_bits(std::uint64_t bits) {
    return std::bit_cast<double>(bits);
}

AttrLite decode_attribute(std::span<const std::uint8_t> data) {
    AttrLite attr;
    Reader r(data);
    while (!r.done()) {
        auto [field, wt] = r.tag();
        switch (field) {
        case 1:  // name
            attr.name = to_string(r.bytes());
            break;
        case 2:  // f
            attr.has_f = true;
            attr.f = float_from_bits(r.fixed32());
            break;
        case 3:  // i
            attr.has_i = true;
            attr.i = static_cast<std::int64_t>(r.varint());
            break;
        default:
            r.skip(wt);
        }
    }
    return attr;
}

NodeLite decode_node(std::span<const std::uint8_t> data) {
    NodeLite node;
    Reader r(data);
    while (!r.done()) {
        auto [field, wt] = r.tag();
        switch (field) {
        case 1:
            node.inputs.push_back(to_string(r.bytes()));
            break;
        case 2:
            node.outputs.push_back(to_string(r.bytes()));
            break;
        case 3:
            node.name = to_string(r.bytes());
            break;
        case 4:
            node.op_type = to_string(r.bytes());
            break;
        case 5:
            node.attrs.push_back(decode_attribute(r.bytes()));
            break;
        default:
            r.skip(wt);
        }
    }
    return node;
}

// dims and the *_data fields are repeated numerics: accept both packed and
// unpacked encodings.
void decode_int64s(Reader& r, std::uint32_t wt, std::vector<std::int64_t>& out) {
    if (wt == kVarint) {
        out.push_back(static_cast<std::int64_t>(r.varint()));
    } else if (wt == kLenDelim) {
        Reader packed(r.bytes());
        while (!packed.done())
            out.push_back(static_cast<std::int64_t>(packed.varint()));
    } else {
        throw MalformedModel("unexpected wire type for repeated int64");
    }
}

TensorLite decode_tensor(std::span<const std::uint8_t> data) {
    TensorLite t;
    Reader r(data);
    std::vector<std::uint8_t> raw;
    std::vector<double> float_data;
    std::vector<double> double_data;
    while (!r.done()) {
        auto [field, wt] = r.tag();
        switch (field) {
        case 1:
            decode_int64s(r, wt, t.dims);
            break;
        case 2:
            t.data_type = static_cast<std::int32_t>(r.varint());
            break;
        case 4:  // float_data
            if (wt == kFixed32) {
                float_data.push_back(float_from_bits(r.fixed32()));
            } else if (wt == kLenDelim) {
                Reader packed(r.bytes());
                while (!packed.done())
                    float_data.push_back(float_from_bits(packed.fixed32()));
            } else {
                throw MalformedModel("unexpected wire type for float_data");
            }
            break;
        case 8:
            t.name = to_string(r.bytes());
            break;
        case 9: {
            auto b = r.bytes();
            raw.assign(b.begin(), b.end());
            break;
        }
        case 10:  // double_data
            if (wt == kFixed64) {
                double_data.push_back(double_from_bits(r.fixed64()));
            } else if (wt == kLenDelim) {
                Reader packed(r.bytes());
                while (!packed.done())
                    double_data.push_back(double_from_bits(packed.fixed64()));
            } else {
                throw MalformedModel("unexpected wire type for double_data");
            }
            break;
        default:
            r.skip(wt);
        }
    }

    if (t.data_type == 1) {  // float32
        if (!raw.empty()) {
            if (raw.size() % 4 != 0)
                throw MalformedModel("tensor '" + t.name + "': raw float32 data misaligned");
            t.values.reserve(raw.size() / 4);
            for (std::size_t i = 0; i < raw.size(); i += 4) {
                std::uint32_t bits = 0;
                for (int k = 0; k < 4; ++k)
                    bits |= static_cast<std::uint32_t>(raw[i + k]) << (8 * k);
                t.values.push_back(float_from_bits(bits));
            }
        } else {
            t.values = std::move(float_data);
        }
    } else if (t.data_type == 11) {  // float64
        if (!raw.empty()) {
            if (raw.size() % 8 != 0)
                throw MalformedModel("tensor '" + t.name + "': raw float64 data misaligned");
            t.values.reserve(raw.size() / 8);
            for (std::size_t i = 0; i < raw.size(); i += 8) {
                std::uint64_t bits = 0;
                for (int k = 0; k < 8; ++k)
                    bits |= static_cast<std::uint64_t>(raw[i + k]) << (8 * k);
                t.values.push_back(double_from_bits(bits));
            }
        } else {
            t.values = std::move(double_data);
        }
    }
    // other element types keep an empty values vector; the graph builder
    // rejects them if a supported operator tries to consume one
    return t;
}

ValueInfoLite decode_value_info(std::span<const std::uint8_t> data) {
    ValueInfoLite vi;
    Reader r(data);
    while (!r.done()) {
        auto [field, wt] = r.tag();
        if (field == 1) {
            vi.name = to_string(r.bytes());
        } else if (field == 2) {  // TypeProto
            Reader type(r.bytes());
            while (!type.done()) {
                auto [tf, twt] = type.tag();
                if (tf == 1) {  // tensor_type
                    Reader tt(type.bytes());
                    while (!tt.done()) {
                        auto [ttf, ttwt] = tt.tag();
                        if (ttf == 2) {  // shape
                            vi.has_shape = true;
                            Reader shape(tt.bytes());
                            while (!shape.done()) {
                                auto [sf, swt] = shape.tag();
                                if (sf == 1) {  // dim
                                    Reader dim(shape.bytes());
                                    std::int64_t value = -1;  // symbolic unless dim_value seen
                                    while (!dim.done()) {
                                        auto [df, dwt] = dim.tag();
                                        if (df == 1)
                                            value = static_cast<std::int64_t>(dim.varint());
                                        else
                                            dim.skip(dwt);
                                    }
                                    vi.dims.push_back(value);
                                } else {
                                    shape.skip(swt);
                                }
                            }
                        } else {
                            tt.skip(ttwt);
                        }
                    }
                } else {
                    type.skip(twt);
                }
            }
        } else {
            r.skip(wt);
        }
    }
    return vi;
}

GraphLite decode_graph(std::span<const std::uint8_t> data) {
    GraphLite g;
    Reader r(data);
    while (!r.done()) {
        auto [field, wt] = r.tag();
        switch (field) {
        case 1:
            g.nodes.push_back(decode_node(r.bytes()));
            break;
        case 5:
            g.initializers.push_back(decode_tensor(r.bytes()));
            break;
        case 11:
            g.inputs.push_back(decode_value_info(r.bytes()));
            break;
        case 12:
            g.outputs.push_back(decode_value_info(r.bytes()));
            break;
        default:
            r.skip(wt);
        }
    }
    return g;
}

}  // namespace

GraphLite decode_model(std::span<const std::uint8_t> bytes) {
    Reader r(bytes);
    bool saw_graph = false;
    GraphLite g;
    while (!r.done()) {
        auto [field, wt] = r.tag();
        if (field == 7) {  // ModelProto.graph
            g = decode_graph(r.bytes());
            saw_graph = true;
        } else {
            r.skip(wt);
        }
    }
    if (!saw_graph)
        throw MalformedModel("model has no graph");
    return g;
}

}  // namespace boxverify::onnxwire
