#pragma once

#include <array>
#include <optional>
#include <string>

#include "ratiolab/cubic_model.hpp"
#include "ratiolab/json_writer.hpp"
#include "ratiolab/numeric_kernel.hpp"
#include "ratiolab/ratio_engine.hpp"

namespace ratiolab {

/// One row of a sweep or sample dataset. Excluded grid points carry no
/// ratio values.
struct SampleRecord {
    Complex w;
    std::optional<Complex> sigma1;
    std::optional<Complex> sigma2;
    RatioPath path = RatioPath::Direct;
    Configuration classification = Configuration::Generic;
    bool reachable = true;
    bool bounds_ok = true;
    // Original roots when the record describes a concrete cubic.
    std::optional<std::array<Complex, 3>> roots;
};

/// One JSON object with the dataset column names; roots are appended when known.
inline std::string record_json(const SampleRecord& r)
{
    JsonObject o;
    o.add("w_re", r.w.real()).add("w_im", r.w.imag());
    if (r.sigma1) o.add("sigma1_re", r.sigma1->real()).add("sigma1_im", r.sigma1->imag());
    else o.add_null("sigma1_re").add_null("sigma1_im");
    if (r.sigma2) o.add("sigma2_re", r.sigma2->real()).add("sigma2_im", r.sigma2->imag());
    else o.add_null("sigma2_re").add_null("sigma2_im");
    o.add("path", to_string(r.path)).add("classification", to_string(r.classification));
    o.add("reachable", r.reachable).add("bounds_ok", r.bounds_ok);
    if (r.roots) {
        std::string arr = "[";
        for (std::size_t i = 0; i < 3; ++i)
            arr += (i ? "," : "") + JsonObject::complex_json((*r.roots)[i]);
        o.add_raw("roots", arr + "]");
    }
    return o.str();
}

}  // namespace ratiolab
