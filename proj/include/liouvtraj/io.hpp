#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "liouvtraj/spectral.hpp"

namespace liouvtraj {

using Json = nlohmann::json;

inline constexpr const char* kCodeVersion = "1.0.0";

// Floating-point formatting with 17 significant digits (lossless round trip).
std::string format_float(double v);

Json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const Json& j);
void write_text_file(const std::string& path, const std::string& content);

// FNV-1a 64-bit over the canonical (sorted-key) JSON dump.
std::uint64_t fnv1a64(const std::string& text);

// Current UTC time, ISO-8601 (e.g. "2026-01-01T12:00:00Z").
std::string utc_timestamp();

// Spectrum export: {"dim", "condition_number", "biorth_residual",
// "spectral_center", "eigenvalues": [{re_lambda, im_lambda, group_id,
// conj_partner}, ...]}.
Json spectrum_to_json(const SpectralData& sd);

// Eigenoperator dump: <base>_right.bin / <base>_left.bin hold the r_a / l_a
// operators as consecutive row-major complex128 (little-endian) D x D blocks
// in eigenvalue order; <base>_manifest.json describes the layout.
void write_eigenoperator_blobs(const std::string& dir, const std::string& base,
                               const SpectralData& sd);

// Quasiprobability CSV: alpha, re_lambda, im_lambda, re_p, im_p, abs_p.
std::string quasiprob_csv(const SpectralData& sd, const Vector& p);

}  // namespace liouvtraj
