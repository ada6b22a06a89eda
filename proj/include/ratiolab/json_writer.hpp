#pragma once

// Flat JSON object writer with fixed 17-significant-digit numbers, so that
// emitted datasets and reports are byte-identical across runs and locales.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <string>
#include <string_view>

#include "ratiolab/numeric_kernel.hpp"

namespace ratiolab {

/// 17 significant digits, '.' separator, independent of the C locale.
inline std::string format_double(double x)
{
    if (std::isnan(x))
        return "nan";
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    if (x == 0.0)
        x = 0.0;  // drop the sign of negative zero
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

class JsonObject {
public:
    JsonObject& add(std::string_view key, double v)
    {
        // JSON has no literal for non-finite numbers.
        return add_raw(key, std::isfinite(v) ? format_double(v) : std::string("null"));
    }
    JsonObject& add(std::string_view key, bool v) { return add_raw(key, v ? "true" : "false"); }
    JsonObject& add(std::string_view key, int v) { return add_raw(key, std::to_string(v)); }
    JsonObject& add(std::string_view key, std::size_t v) { return add_raw(key, std::to_string(v)); }
    JsonObject& add(std::string_view key, std::string_view v) { return add_raw(key, quote(v)); }
    JsonObject& add(std::string_view key, const char* v) { return add(key, std::string_view(v)); }
    JsonObject& add(std::string_view key, Complex z) { return add_raw(key, complex_json(z)); }
    JsonObject& add(std::string_view key, const JsonObject& nested) { return add_raw(key, nested.str()); }
    JsonObject& add_null(std::string_view key) { return add_raw(key, "null"); }

    JsonObject& add_raw(std::string_view key, std::string_view json)
    {
        if (!body_.empty())
            body_ += ',';
        body_ += quote(key);
        body_ += ':';
        body_ += json;
        return *this;
    }

    std::string str() const { return "{" + body_ + "}"; }

    static std::string complex_json(Complex z)
    {
        return JsonObject{}.add("re", z.real()).add("im", z.imag()).str();
    }

    static std::string quote(std::string_view s)
    {
        std::string out = "\"";
        for (char c : s) {
            switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char esc[8];
                    std::snprintf(esc, sizeof esc, "\\u%04x", c);
                    out += esc;
                } else {
                    out += c;
                }
            }
        }
        out += '"';
        return out;
    }

private:
    std::string body_;
};

}  // namespace ratiolab
