#include "snslab/io.hpp"

#include <openssl/evp.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <memory>
#include <sstream>

#include "json.hpp"
#include "snslab/errors.hpp"

namespace snslab {

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw Error("cannot open " + path.string() + " for writing");
    os << contents;
    if (!os) throw Error("failed writing " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ValidationError("cannot read " + path.string());
    return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

std::string sha256_file(const std::filesystem::path& path) {
    const std::string bytes = read_text_file(path);
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int length = 0;
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), digest.data(), &length) != 1) {
        throw Error("sha256 failed for " + path.string());
    }
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < length; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 15];
    }
    return out;
}

void write_field_snapshot(const std::filesystem::path& csv_path, const std::filesystem::path& json_path,
                          const SpectralField& u, double time, const std::string& scenario_id) {
    std::ostringstream os;
    os << "k_x,k_y,re_u1,im_u1,re_u2,im_u2\n";
    for (int iky = 0; iky < u.nky(); ++iky) {
        for (int ix = 0; ix < u.n(); ++ix) {
            const int kx = u.kx(ix);
            if (iky == 0 && kx <= 0) continue;
            const cplx a = u.at(0, ix, iky);
            const cplx b = u.at(1, ix, iky);
            if (a == cplx(0.0) && b == cplx(0.0)) continue;
            os << kx << ',' << iky << ',' << format_double(a.real()) << ',' << format_double(a.imag()) << ','
               << format_double(b.real()) << ',' << format_double(b.imag()) << '\n';
        }
    }
    write_text_file(csv_path, os.str());
    nlohmann::ordered_json header;
    header["N"] = u.n();
    header["time"] = time;
    header["scenario_id"] = scenario_id;
    header["columns"] = {"k_x", "k_y", "re_u1", "im_u1", "re_u2", "im_u2"};
    write_text_file(json_path, header.dump(2) + "\n");
}

SpectralField read_field_snapshot(const std::filesystem::path& csv_path, int n) {
    std::istringstream is(read_text_file(csv_path));
    std::string line;
    std::getline(is, line);  // header
    SpectralField u(n);
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        int kx = 0, ky = 0;
        double v[4] = {};
        if (std::sscanf(line.c_str(), "%d,%d,%lf,%lf,%lf,%lf", &kx, &ky, &v[0], &v[1], &v[2], &v[3]) != 6) {
            throw ValidationError("field snapshot: malformed row '" + line + "'");
        }
        if (std::abs(kx) >= n / 2 || ky < 0 || ky >= n / 2) throw ValidationError("field snapshot: mode outside grid");
        const int ix = kx >= 0 ? kx : kx + n;
        u.at(0, ix, ky) = cplx(v[0], v[1]);
        u.at(1, ix, ky) = cplx(v[2], v[3]);
        if (ky == 0) {
            u.at(0, n - ix, 0) = std::conj(u.at(0, ix, 0));
            u.at(1, n - ix, 0) = std::conj(u.at(1, ix, 0));
        }
    }
    return u;
}

}  // namespace snslab
