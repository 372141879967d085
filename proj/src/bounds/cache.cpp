#include "boxverify/cache.hpp"

#include <openssl/evp.h>
#include <unistd.h>

#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

namespace boxverify {

namespace {

constexpr const char* kMagic = "boxverify-cache 1";

std::uint64_t fold64(const unsigned char* digest, unsigned int len) {
    std::uint64_t v = 0;
    for (unsigned int i = 0; i < len; ++i)
        v ^= static_cast<std::uint64_t>(digest[i]) << (8 * (i % 8));
    return v;
}

std::uint64_t hash_bytes(const void* data, std::size_t size) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(data, size, digest, &len, EVP_sha256(), nullptr);
    return fold64(digest, len);
}

std::uint64_t hash_doubles(const std::vector<double>& v) {
    return hash_bytes(v.data(), v.size() * sizeof(double));
}

std::string hex_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%a", v);
    return buf;
}

bool parse_double(const std::string& tok, double& out) {
    char* end = nullptr;
    out = std::strtod(tok.c_str(), &end);
    return end && *end == '\0' && !tok.empty();
}

void write_vector(std::ostream& os, const char* tag, const std::vector<double>& v) {
    os << tag;
    for (double x : v)
        os << ' ' << hex_double(x);
    os << '\n';
}

bool read_vector(std::istringstream& line, std::size_t n, std::vector<double>& out) {
    out.clear();
    std::string tok;
    while (line >> tok) {
        double v;
        if (!parse_double(tok, v))
            return false;
        out.push_back(v);
    }
    return out.size() == n;
}

}  // namespace

std::string cache_key_id(const CacheKey& key) {
    std::uint64_t id = 0;
    // model digest arrives as hex; fold its bytes
    id ^= hash_bytes(key.model_digest.data(), key.model_digest.size());
    id ^= hash_doubles(key.box.lo);
    id ^= hash_doubles(key.box.hi) * 0x9E3779B97F4A7C15ULL;
    id ^= key.seed;
    std::ostringstream cfg;
    cfg << key.samples_per_input << ' ' << key.opt.memory << ' ' << key.opt.max_iterations
        << ' ' << hex_double(key.opt.grad_tolerance) << ' ' << hex_double(key.opt.f_tolerance)
        << ' ' << hex_double(key.opt.fd_step);
    const std::string fingerprint = cfg.str();
    id ^= hash_bytes(fingerprint.data(), fingerprint.size());
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016" PRIx64, id);
    return buf;
}

namespace {

std::filesystem::path cache_path(const std::string& dir, const CacheKey& key) {
    return std::filesystem::path(dir) / (cache_key_id(key) + ".bounds");
}

bool key_matches(std::istream& in, const CacheKey& key) {
    std::string line;

    auto expect_prefix = [&](const char* tag, std::string& rest) {
        if (!std::getline(in, line))
            return false;
        const std::size_t tlen = std::strlen(tag);
        if (line.compare(0, tlen, tag) != 0 || line.size() < tlen + 1)
            return false;
        rest = line.substr(tlen + 1);
        return true;
    };

    std::string rest;
    if (!expect_prefix("model", rest) || rest != key.model_digest)
        return false;
    if (!expect_prefix("seed", rest) || rest != std::to_string(key.seed))
        return false;
    if (!expect_prefix("samples-per-input", rest) ||
        rest != std::to_string(key.samples_per_input))
        return false;
    if (!expect_prefix("opt", rest))
        return false;
    {
        std::ostringstream want;
        want << key.opt.memory << ' ' << key.opt.max_iterations << ' '
             << hex_double(key.opt.grad_tolerance) << ' ' << hex_double(key.opt.f_tolerance)
             << ' ' << hex_double(key.opt.fd_step);
        if (rest != want.str())
            return false;
    }
    const std::size_t d = key.box.dim();
    for (const char* tag : {"box-lo", "box-hi"}) {
        if (!expect_prefix(tag, rest))
            return false;
        std::istringstream ls(rest);
        std::vector<double> v;
        if (!read_vector(ls, d, v))
            return false;
        const std::vector<double>& want = std::strcmp(tag, "box-lo") == 0 ? key.box.lo : key.box.hi;
        if (std::memcmp(v.data(), want.data(), d * sizeof(double)) != 0)
            return false;
    }
    return true;
}

}  // namespace

std::optional<OutputBounds> cache_lookup(const std::string& dir, const CacheKey& key) {
    const auto path = cache_path(dir, key);
    std::ifstream in(path);
    if (!in)
        return std::nullopt;  // plain miss, no warning

    auto corrupt = [&]() -> std::optional<OutputBounds> {
        std::cerr << "warning: ignoring unusable cache file " << path.string() << "\n";
        return std::nullopt;
    };

    std::string line;
    if (!std::getline(in, line) || line != kMagic)
        return corrupt();
    if (!key_matches(in, key))
        return corrupt();

    if (!std::getline(in, line))
        return corrupt();
    std::size_t m = 0;
    if (std::sscanf(line.c_str(), "outputs %zu", &m) != 1 || m == 0)
        return corrupt();

    OutputBounds bounds;
    bounds.provenance = Provenance::Cache;
    bounds.outputs.resize(m);
    const std::size_t d = key.box.dim();
    for (std::size_t j = 0; j < m; ++j) {
        auto& out = bounds.outputs[j];
        for (const char* tag : {"lo", "hi"}) {
            const bool is_lo = std::strcmp(tag, "lo") == 0;
            if (!std::getline(in, line))
                return corrupt();
            std::istringstream ls(line);
            std::string word;
            std::size_t idx = 0;
            std::string value;
            if (!(ls >> word >> idx >> value) || word != tag || idx != j)
                return corrupt();
            double v;
            if (!parse_double(value, v))
                return corrupt();
            (is_lo ? out.lo : out.hi) = v;

            if (!std::getline(in, line))
                return corrupt();
            std::istringstream ws(line);
            std::string wtag;
            std::size_t widx = 0;
            if (!(ws >> wtag >> widx) || wtag != std::string(tag) + "-witness" || widx != j)
                return corrupt();
            std::vector<double>& wit = is_lo ? out.lo_witness : out.hi_witness;
            if (!read_vector(ws, d, wit))
                return corrupt();
        }
        if (out.lo > out.hi)
            return corrupt();
    }
    return bounds;
}

void cache_store(const std::string& dir, const CacheKey& key, const OutputBounds& bounds) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);  // best effort; open failure reported below

    const fs::path final_path = cache_path(dir, key);
    const fs::path tmp_path = final_path.string() + ".tmp." + std::to_string(::getpid()) + "." +
                              std::to_string(reinterpret_cast<std::uintptr_t>(&bounds) & 0xFFFF);

    {
        std::ofstream out(tmp_path);
        if (!out) {
            std::cerr << "warning: cannot write cache file " << tmp_path.string() << "\n";
            return;
        }
        out << kMagic << '\n';
        out << "model " << key.model_digest << '\n';
        out << "seed " << key.seed << '\n';
        out << "samples-per-input " << key.samples_per_input << '\n';
        out << "opt " << key.opt.memory << ' ' << key.opt.max_iterations << ' '
            << hex_double(key.opt.grad_tolerance) << ' ' << hex_double(key.opt.f_tolerance)
            << ' ' << hex_double(key.opt.fd_step) << '\n';
        write_vector(out, "box-lo", key.box.lo);
        write_vector(out, "box-hi", key.box.hi);
        out << "outputs " << bounds.outputs.size() << '\n';
        for (std::size_t j = 0; j < bounds.outputs.size(); ++j) {
            const auto& o = bounds.outputs[j];
            out << "lo " << j << ' ' << hex_double(o.lo) << '\n';
            write_vector(out, ("lo-witness " + std::to_string(j)).c_str(), o.lo_witness);
            out << "hi " << j << ' ' << hex_double(o.hi) << '\n';
            write_vector(out, ("hi-witness " + std::to_string(j)).c_str(), o.hi_witness);
        }
        out << "created " << std::time(nullptr) << '\n';
        if (!out.good()) {
            std::cerr << "warning: cache write failed for " << tmp_path.string() << "\n";
            return;
        }
    }
    fs::rename(tmp_path, final_path, ec);
    if (ec) {
        std::cerr << "warning: cache rename failed: " << ec.message() << "\n";
        fs::remove(tmp_path, ec);
    }
}

}  // namespace boxverify
