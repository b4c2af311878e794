#include "qbm/output.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <unistd.h>

namespace qbm {

std::string format_real(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0";  // no signed zero in output
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

std::string curve_csv(const CurveSeries& c) {
    std::string out = kCurveHeader;
    out += '\n';
    for (std::size_t i = 0; i < c.times.size(); ++i) {
        const int flag = c.failed[i] ? kFlagFailed : (c.clamped[i] ? kFlagClamped : kFlagOk);
        out += format_real(c.times[i]);
        for (double v : {c.magnitude[i], c.phase[i], c.lambda1[i].real(), c.lambda1[i].imag(), c.lambda2[i].real(),
                         c.lambda2[i].imag()}) {
            out += ',';
            out += format_real(v);
        }
        out += ',';
        out += c.method[i];
        out += ',';
        out += std::to_string(flag);
        out += '\n';
    }
    return out;
}

std::string spectra_csv(const std::vector<double>& omega, double s, double lambda, double gamma) {
    std::string out = kSpectraHeader;
    out += '\n';
    for (double w : omega) {
        out += format_real(w);
        for (Cutoff c : {Cutoff::Abrupt, Cutoff::DrudeLorentz, Cutoff::Exponential}) {
            out += ',';
            out += format_real(spectral_density(SpectralDensity{s, c, lambda, gamma}, w));
        }
        out += '\n';
    }
    return out;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
    static std::atomic<unsigned long> counter{0};
    const auto dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
    const auto tmp = dir / ("." + path.filename().string() + ".tmp." + std::to_string(::getpid()) + "." +
                            std::to_string(counter++));
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot write " + tmp.string());
        f.write(content.data(), static_cast<std::streamsize>(content.size()));
        f.flush();
        if (!f) {
            std::filesystem::remove(tmp);
            throw std::runtime_error("write failed for " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw std::runtime_error("cannot rename into " + path.string() + ": " + ec.message());
    }
}

}  // namespace qbm
