// output.hpp - CSV rendering and atomic file writes

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "qbm/decoherence.hpp"

namespace qbm {

inline constexpr const char* kCurveHeader =
    "t,magnitude,phase,lambda1_re,lambda1_im,lambda2_re,lambda2_im,method,err_flag";
inline constexpr const char* kSpectraHeader = "omega,J_abrupt,J_DL,J_exp";

// err_flag values in curve CSVs
enum ErrFlag : int { kFlagOk = 0, kFlagClamped = 1, kFlagFailed = 2 };

// Shortest decimal form that parses back to the same double; independent of the C locale.
std::string format_real(double v);

std::string curve_csv(const CurveSeries& c);

std::string spectra_csv(const std::vector<double>& omega, double s, double lambda, double gamma);

// Writes to a temporary file in the target directory and renames it into place.
void write_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace qbm
