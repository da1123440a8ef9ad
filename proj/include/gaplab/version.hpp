#pragma once

namespace gaplab {

inline constexpr const char* kVersion = "0.1.0";

// Serialization schema tags. Bump when a format changes shape.
inline constexpr const char* kCertificateSchema = "gaplab/certificate-v1";
inline constexpr const char* kRecordsSchema = "gaplab/records-v1";
inline constexpr const char* kSignScanSchema = "gaplab/signscan-v1";
inline constexpr const char* kManifestSchema = "gaplab/manifest-v1";

}  // namespace gaplab
