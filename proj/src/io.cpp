#include "ucw/io.hpp"

#include "ucw/errors.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>

namespace ucw::io {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_text_atomic(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ucw::io_error("cannot open " + tmp.string() + " for writing");
        out << content;
        if (!out.good()) throw ucw::io_error("write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ucw::io_error("cannot open " + path.string());
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

std::string to_ndjson(const spectral::FourierState& state) {
    state.validate();
    json rec;
    rec["N"] = state.truncation_N;
    json re = json::array(), im = json::array();
    for (int i = 0; i < state.coeffs.size(); ++i) {
        re.push_back(state.coeffs(i).real());
        im.push_back(state.coeffs(i).imag());
    }
    rec["re"] = std::move(re);
    rec["im"] = std::move(im);
    return rec.dump();
}

spectral::FourierState fourier_state_from_ndjson(const std::string& line) {
    json rec;
    try {
        rec = json::parse(line);
    } catch (const json::exception& e) {
        throw ucw::io_error(std::string("bad FourierState record: ") + e.what());
    }
    if (!rec.contains("N") || !rec.contains("re") || !rec.contains("im"))
        throw ucw::io_error("FourierState record must hold N, re, im");
    const int N = rec["N"].get<int>();
    auto state = spectral::FourierState::zeros(N);
    const auto& re = rec["re"];
    const auto& im = rec["im"];
    if (static_cast<int>(re.size()) != 2 * N + 1 || static_cast<int>(im.size()) != 2 * N + 1)
        throw ucw::io_error("FourierState record arrays must have 2N+1 entries");
    for (int i = 0; i < 2 * N + 1; ++i)
        state.coeffs(i) = {re[static_cast<size_t>(i)].get<double>(),
                           im[static_cast<size_t>(i)].get<double>()};
    state.validate();
    return state;
}

std::string to_ndjson(const fluid::SurfaceState& state) {
    state.validate();
    json rec;
    rec["nx"] = static_cast<int>(state.eta.size());
    json eta = json::array(), phi = json::array();
    for (int i = 0; i < state.eta.size(); ++i) {
        eta.push_back(state.eta(i));
        phi.push_back(state.phi(i));
    }
    rec["eta"] = std::move(eta);
    rec["phi"] = std::move(phi);
    return rec.dump();
}

fluid::SurfaceState surface_state_from_ndjson(const std::string& line) {
    json rec;
    try {
        rec = json::parse(line);
    } catch (const json::exception& e) {
        throw ucw::io_error(std::string("bad SurfaceState record: ") + e.what());
    }
    if (!rec.contains("nx") || !rec.contains("eta") || !rec.contains("phi"))
        throw ucw::io_error("SurfaceState record must hold nx, eta, phi");
    const int nx = rec["nx"].get<int>();
    if (static_cast<int>(rec["eta"].size()) != nx || static_cast<int>(rec["phi"].size()) != nx)
        throw ucw::io_error("SurfaceState record arrays must have nx entries");
    fluid::SurfaceState state = fluid::SurfaceState::zero(nx);
    for (int i = 0; i < nx; ++i) {
        state.eta(i) = rec["eta"][static_cast<size_t>(i)].get<double>();
        state.phi(i) = rec["phi"][static_cast<size_t>(i)].get<double>();
    }
    state.validate();
    return state;
}

void save_ndjson(const spectral::FourierState& state, const fs::path& path) {
    write_text_atomic(path, to_ndjson(state) + "\n");
}

spectral::FourierState load_fourier_state(const fs::path& path) {
    std::string text = read_text(path);
    const auto nl = text.find('\n');
    if (nl != std::string::npos) text.resize(nl);
    return fourier_state_from_ndjson(text);
}

void save_ndjson(const fluid::SurfaceState& state, const fs::path& path) {
    write_text_atomic(path, to_ndjson(state) + "\n");
}

fluid::SurfaceState load_surface_state(const fs::path& path) {
    std::string text = read_text(path);
    const auto nl = text.find('\n');
    if (nl != std::string::npos) text.resize(nl);
    return surface_state_from_ndjson(text);
}

} // namespace ucw::io
