#pragma once

#include <filesystem>
#include <span>
#include <string>

#include "json.hpp"
#include "nclab/pipeline.hpp"
#include "nclab/quantize.hpp"
#include "nclab/residue.hpp"
#include "nclab/spectral.hpp"

namespace nclab {

using Json = nlohmann::ordered_json;

/// Transform sign, frequency units and residue prefactor used for a report.
Json conventions_json(Convention residue_convention = Convention::Lattice);

Json connes_json(const ConnesComparison& c);
Json residue_json(const ResidueReport& r);
Json identity_json(const IdentityReport& r, std::int64_t M, int Q);
Json seminorm_json(const SeminormReport& r);
Json dixmier_json(const SpectralSummary& s, bool fast_path, bool symmetrized);

/// Columns N, s_N, S_N, D_N with %.17g; D_1 is written as nan.
std::string spectrum_csv(std::span<const double> s);
/// Columns row, col, re, im.
std::string matrix_csv(const OperatorMatrix& a);

/// 16-byte header ("NCRM", u32 n, u32 M, u32 reserved = 0) then row-major
/// little-endian float64 (re, im) pairs.
std::string matrix_binary(const OperatorMatrix& a);
/// Inverse of matrix_binary; the basis tag is not stored and must be supplied.
OperatorMatrix read_matrix_binary(std::string_view bytes, Basis basis);

void write_file(const std::filesystem::path& path, std::string_view contents);
std::string read_file(const std::filesystem::path& path);

}  // namespace nclab
