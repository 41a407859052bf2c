// Instance file format (shared with the CLI): a single JSON record
//
//   { "mu":     [positive reals, one per point],
//     "blocks": [[1-based indices] ...],
//     "u":      [[re, im] ...],
//     "w":      [[re, im] ...] }
//
// Reading validates semantics and reports the location of the first
// violation; writing emits 17-significant-digit numbers so instances
// round-trip exactly.

#pragma once

#include "wctlab/records.hpp"
#include "wctlab/wct.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace wctlab {

struct InstanceFormatError : std::runtime_error {
    explicit InstanceFormatError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

inline MFunc parse_complex_array(const nlohmann::json& j, const char* key, int n) {
    if (!j.contains(key)) throw InstanceFormatError(std::string("missing field \"") + key + "\"");
    const auto& arr = j.at(key);
    if (!arr.is_array())
        throw InstanceFormatError(std::string("field \"") + key + "\" must be an array");
    if (static_cast<int>(arr.size()) != n)
        throw InstanceFormatError(std::string("field \"") + key + "\" has length " +
                                  std::to_string(arr.size()) + ", expected " + std::to_string(n));
    MFunc f(n);
    for (int i = 0; i < n; ++i) {
        const auto& pair = arr.at(static_cast<std::size_t>(i));
        if (!pair.is_array() || pair.size() != 2 || !pair.at(0).is_number() || !pair.at(1).is_number())
            throw InstanceFormatError(std::string(key) + "[" + std::to_string(i + 1) +
                                      "] must be a [re, im] pair");
        f[i] = Complex(pair.at(0).get<double>(), pair.at(1).get<double>());
    }
    return f;
}

}  // namespace detail

inline WCTInstance read_instance(std::istream& in) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw InstanceFormatError(std::string("not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw InstanceFormatError("top level must be an object");

    if (!j.contains("mu")) throw InstanceFormatError("missing field \"mu\"");
    const auto& jmu = j.at("mu");
    if (!jmu.is_array() || jmu.empty())
        throw InstanceFormatError("field \"mu\" must be a non-empty array");
    const int n = static_cast<int>(jmu.size());
    Eigen::VectorXd mu(n);
    for (int i = 0; i < n; ++i) {
        const auto& v = jmu.at(static_cast<std::size_t>(i));
        if (!v.is_number())
            throw InstanceFormatError("mu[" + std::to_string(i + 1) + "] must be a number");
        mu[i] = v.get<double>();
        if (!(mu[i] > 0.0))
            throw InstanceFormatError("mu[" + std::to_string(i + 1) + "] must be > 0 (got " +
                                      fmt17(mu[i]) + ")");
    }

    if (!j.contains("blocks")) throw InstanceFormatError("missing field \"blocks\"");
    const auto& jblocks = j.at("blocks");
    if (!jblocks.is_array() || jblocks.empty())
        throw InstanceFormatError("field \"blocks\" must be a non-empty array of index arrays");
    std::vector<std::vector<int>> blocks;
    std::vector<int> seen(static_cast<std::size_t>(n), 0);
    for (std::size_t b = 0; b < jblocks.size(); ++b) {
        const auto& jb = jblocks.at(b);
        if (!jb.is_array() || jb.empty())
            throw InstanceFormatError("blocks[" + std::to_string(b + 1) +
                                      "] must be a non-empty array of 1-based indices");
        std::vector<int> blk;
        for (const auto& v : jb) {
            if (!v.is_number_integer())
                throw InstanceFormatError("blocks[" + std::to_string(b + 1) +
                                          "] must contain integers");
            const int idx = v.get<int>();
            if (idx < 1 || idx > n)
                throw InstanceFormatError("blocks[" + std::to_string(b + 1) + "] index " +
                                          std::to_string(idx) + " outside 1.." + std::to_string(n));
            if (seen[static_cast<std::size_t>(idx - 1)]++)
                throw InstanceFormatError("index " + std::to_string(idx) +
                                          " appears in more than one block");
            blk.push_back(idx - 1);
        }
        blocks.push_back(std::move(blk));
    }
    for (int i = 0; i < n; ++i)
        if (!seen[static_cast<std::size_t>(i)])
            throw InstanceFormatError("index " + std::to_string(i + 1) +
                                      " is not covered by any block");

    MFunc u = detail::parse_complex_array(j, "u", n);
    MFunc w = detail::parse_complex_array(j, "w", n);

    return build(FiniteMeasureSpace(std::move(mu)), Partition(std::move(blocks), n),
                 std::move(u), std::move(w));
}

inline WCTInstance read_instance_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InstanceFormatError("cannot open instance file: " + path);
    return read_instance(in);
}

inline void write_instance(const WCTInstance& inst, std::ostream& out) {
    out << "{\n  \"mu\": [";
    for (int i = 0; i < inst.size(); ++i)
        out << (i ? ", " : "") << fmt17(inst.space.mass(i));
    out << "],\n  \"blocks\": [";
    for (int b = 0; b < inst.blocks(); ++b) {
        out << (b ? ", " : "") << "[";
        const auto& blk = inst.part.block(b);
        for (std::size_t k = 0; k < blk.size(); ++k)
            out << (k ? ", " : "") << (blk[k] + 1);
        out << "]";
    }
    out << "],\n  \"u\": [";
    for (int i = 0; i < inst.size(); ++i)
        out << (i ? ", " : "") << "[" << fmt17(inst.u[i].real()) << ", " << fmt17(inst.u[i].imag())
            << "]";
    out << "],\n  \"w\": [";
    for (int i = 0; i < inst.size(); ++i)
        out << (i ? ", " : "") << "[" << fmt17(inst.w[i].real()) << ", " << fmt17(inst.w[i].imag())
            << "]";
    out << "]\n}\n";
}

inline void write_instance_file(const WCTInstance& inst, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    write_instance(inst, out);
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace wctlab
