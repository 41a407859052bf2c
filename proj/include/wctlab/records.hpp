// Line-delimited record output: one ordered JSON object per line, with every
// number printed at 17 significant digits so values round-trip exactly.

#pragma once

#include "wctlab/space.hpp"

#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

namespace wctlab {

inline std::string fmt17(double v) {
    if (!std::isfinite(v)) {
        if (std::isnan(v)) return "\"nan\"";
        return v > 0 ? "\"inf\"" : "\"-inf\"";
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace detail {

inline void append_json_string(std::string& out, std::string_view s) {
    out += '"';
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    out += '"';
}

}  // namespace detail

/// Ordered JSON object built field by field.
class Record {
public:
    Record& field(std::string_view key, double v) { return raw(key, fmt17(v)); }

    Record& field(std::string_view key, int v) { return raw(key, std::to_string(v)); }
    Record& field(std::string_view key, long v) { return raw(key, std::to_string(v)); }
    Record& field(std::string_view key, std::uint64_t v) { return raw(key, std::to_string(v)); }

    Record& field(std::string_view key, bool v) { return raw(key, v ? "true" : "false"); }

    Record& field(std::string_view key, std::string_view v) {
        std::string s;
        detail::append_json_string(s, v);
        return raw(key, s);
    }
    Record& field(std::string_view key, const char* v) { return field(key, std::string_view(v)); }

    Record& field(std::string_view key, Complex v) {
        return raw(key, "[" + fmt17(v.real()) + "," + fmt17(v.imag()) + "]");
    }

    Record& field(std::string_view key, const std::vector<double>& vs) {
        std::string s = "[";
        for (std::size_t i = 0; i < vs.size(); ++i) {
            if (i) s += ',';
            s += fmt17(vs[i]);
        }
        return raw(key, s + "]");
    }

    Record& field(std::string_view key, const std::vector<Complex>& vs) {
        std::string s = "[";
        for (std::size_t i = 0; i < vs.size(); ++i) {
            if (i) s += ',';
            s += "[" + fmt17(vs[i].real()) + "," + fmt17(vs[i].imag()) + "]";
        }
        return raw(key, s + "]");
    }

    Record& field(std::string_view key, const std::vector<std::string>& vs) {
        std::string s = "[";
        for (std::size_t i = 0; i < vs.size(); ++i) {
            if (i) s += ',';
            detail::append_json_string(s, vs[i]);
        }
        return raw(key, s + "]");
    }

    Record& field(std::string_view key, const Record& sub) { return raw(key, sub.str()); }

    std::string str() const { return "{" + body_ + "}"; }
    std::string line() const { return str() + "\n"; }

private:
    Record& raw(std::string_view key, std::string_view value) {
        if (!body_.empty()) body_ += ',';
        detail::append_json_string(body_, key);
        body_ += ':';
        body_ += value;
        return *this;
    }

    std::string body_;
};

}  // namespace wctlab
