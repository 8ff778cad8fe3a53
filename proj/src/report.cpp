#include "nclab/report.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "nclab/errors.hpp"

namespace nclab {

namespace {

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f64(std::string& out, double d) {
    const auto v = std::bit_cast<std::uint64_t>(d);
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint64_t get_le(std::string_view b, std::size_t at, int bytes) {
    std::uint64_t v = 0;
    for (int i = 0; i < bytes; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(b[at + i])) << (8 * i);
    return v;
}

}  // namespace

Json conventions_json(Convention residue_convention) {
    Json j;
    j["transform_sign"] = "(F f)(xi) = sum_k f(k) exp(-2 pi i k.xi); t_sigma f(n') = int exp(+2 pi i n'.xi) sigma(n',xi) (F f)(xi) dxi";
    j["fourier_conjugation"] = "F e_{-k} = delta_k, so (F A F^-1)[n',k] = A[-n',-k]";
    j["torus"] = "[0,1)^n, characters exp(2 pi i k.x), unit Haar measure";
    j["frequency_units"] = "lattice-dual (lattice point k is frequency k, no 2 pi)";
    j["residue_prefactor"] = residue_convention == Convention::Lattice ? "1/n" : "1/(n (2 pi)^n)";
    j["singular_value_order"] = "nonincreasing";
    j["logarithm"] = "natural";
    return j;
}

Json connes_json(const ConnesComparison& c) {
    Json j;
    j["n"] = c.n;
    j["M"] = c.M;
    j["Q"] = c.fast_path ? Json(nullptr) : Json(c.Q);
    j["symmetrized"] = c.symmetrized;
    j["spectral_estimate"] = number_or_null(c.spectral_estimate);
    j["residue_lattice"] = c.residue_lattice.real();
    j["residue_paper_convention"] = c.residue_paper.real();
    j["relative_deviation"] = number_or_null(c.relative_deviation);
    j["fit_window"] = Json::array({c.summary.window_begin, c.summary.window_end});
    j["fit_rms"] = number_or_null(c.summary.fit_rms);
    j["stability_span"] = number_or_null(c.summary.stability_span);
    j["min_eigenvalue"] = number_or_null(c.min_eigenvalue);
    j["residue_lattice_imag"] = c.residue_lattice.imag();
    j["residue_source"] = to_string(c.residue_source);
    j["fast_path"] = c.fast_path;
    j["hermiticity_deviation"] = number_or_null(c.hermiticity_deviation);
    j["warnings"] = c.warnings;
    j["conventions"] = conventions_json(Convention::Lattice);
    return j;
}

Json residue_json(const ResidueReport& r) {
    Json j;
    j["value"] = r.value.real();
    j["convention"] = to_string(r.convention);
    j["n"] = r.n;
    j["sphere_order"] = r.sphere_order;
    j["torus_Q"] = r.torus_Q;
    j["component_source"] = to_string(r.source);
    j["value_imag"] = r.value.imag();
    j["flipped"] = r.flipped;
    j["conventions"] = conventions_json(r.convention);
    return j;
}

Json identity_json(const IdentityReport& r, std::int64_t M, int Q) {
    Json j;
    j["M"] = M;
    j["Q"] = Q;
    j["full_deviation"] = r.full_deviation;
    j["interior_deviation"] = r.interior_deviation;
    j["bandwidth"] = r.bandwidth;
    j["interior_half_width"] = r.interior_half_width;
    j["max_entry"] = r.max_entry;
    j["conventions"] = conventions_json();
    return j;
}

Json seminorm_json(const SeminormReport& r) {
    Json j;
    j["alpha"] = r.alpha.entries;
    j["beta"] = r.beta.entries;
    j["window"] = Json::array({r.window.r_min, r.window.r_max});
    j["sup_ratio"] = number_or_null(r.sup_ratio);
    j["fitted_exponent"] = number_or_null(r.fitted_exponent);
    j["residual"] = number_or_null(r.residual);
    j["shells"] = r.shells;
    return j;
}

Json dixmier_json(const SpectralSummary& s, bool fast_path, bool symmetrized) {
    Json j;
    j["trace_estimate"] = number_or_null(s.trace_estimate);
    j["intercept"] = number_or_null(s.intercept);
    j["fit_window"] = Json::array({s.window_begin, s.window_end});
    j["fit_rms"] = number_or_null(s.fit_rms);
    j["stability_span"] = number_or_null(s.stability_span);
    j["l1inf_norm"] = number_or_null(s.l1inf_norm);
    j["length"] = s.values.size();
    j["fast_path"] = fast_path;
    j["symmetrized"] = symmetrized;
    j["conventions"] = conventions_json();
    return j;
}

std::string spectrum_csv(std::span<const double> s) {
    std::string out = "N,s_N,S_N,D_N\n";
    long double acc = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        acc += s[i];
        const std::size_t N = i + 1;
        const double S = static_cast<double>(acc);
        const double D = N >= 2 ? S / std::log(static_cast<double>(N)) : std::nan("");
        out += std::to_string(N) + "," + g17(s[i]) + "," + g17(S) + "," + g17(D) + "\n";
    }
    return out;
}

std::string matrix_csv(const OperatorMatrix& a) {
    std::string out = "row,col,re,im\n";
    for (Eigen::Index r = 0; r < a.entries.rows(); ++r)
        for (Eigen::Index c = 0; c < a.entries.cols(); ++c)
            out += std::to_string(r) + "," + std::to_string(c) + "," + g17(a.entries(r, c).real()) + "," +
                   g17(a.entries(r, c).imag()) + "\n";
    return out;
}

std::string matrix_binary(const OperatorMatrix& a) {
    std::string out = "NCRM";
    put_u32(out, static_cast<std::uint32_t>(a.box.dim()));
    put_u32(out, static_cast<std::uint32_t>(a.box.half_width()));
    put_u32(out, 0);
    out.reserve(out.size() + static_cast<std::size_t>(a.entries.size()) * 16);
    for (Eigen::Index r = 0; r < a.entries.rows(); ++r)
        for (Eigen::Index c = 0; c < a.entries.cols(); ++c) {
            put_f64(out, a.entries(r, c).real());
            put_f64(out, a.entries(r, c).imag());
        }
    return out;
}

OperatorMatrix read_matrix_binary(std::string_view bytes, Basis basis) {
    if (bytes.size() < 16 || bytes.substr(0, 4) != "NCRM") throw UsageError("not an NCRM matrix file");
    const auto n = static_cast<int>(get_le(bytes, 4, 4));
    const auto M = static_cast<std::int64_t>(get_le(bytes, 8, 4));
    const TruncationBox box(n, M);
    const auto N = static_cast<Eigen::Index>(box.size());
    if (bytes.size() != 16 + static_cast<std::size_t>(N * N) * 16) throw UsageError("NCRM file has the wrong length");
    OperatorMatrix a{Eigen::MatrixXcd(N, N), box, basis};
    std::size_t at = 16;
    for (Eigen::Index r = 0; r < N; ++r)
        for (Eigen::Index c = 0; c < N; ++c) {
            const double re = std::bit_cast<double>(get_le(bytes, at, 8));
            const double im = std::bit_cast<double>(get_le(bytes, at + 8, 8));
            a.entries(r, c) = {re, im};
            at += 16;
        }
    return a;
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw IoError("write to " + path.string() + " failed");
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace nclab
