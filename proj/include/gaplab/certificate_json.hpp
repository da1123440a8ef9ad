#pragma once

#include <string>

#include <json.hpp>

#include "gaplab/covering.hpp"

namespace gaplab::cover {

nlohmann::json certificate_to_json(const Certificate& cert);

// Canonical serialization: sorted keys, two-space indent, trailing newline.
// Two builds with identical params produce byte-identical strings.
std::string certificate_to_string(const Certificate& cert);

// Throws certificate_error on malformed input.
Certificate certificate_from_json(const nlohmann::json& j);
Certificate certificate_from_string(const std::string& text);

}  // namespace gaplab::cover
