#ifndef UCW_IO_HPP
#define UCW_IO_HPP

#include "ucw/fluid.hpp"
#include "ucw/spectral.hpp"

#include <filesystem>
#include <string>

namespace ucw::io {

/// Shortest text that round-trips a double exactly ("%.17g").
std::string format_double(double v);

/// Writes through a temporary file in the same directory and renames, so
/// partially written outputs are never observed.
void write_text_atomic(const std::filesystem::path& path, const std::string& content);

std::string read_text(const std::filesystem::path& path);

// NDJSON record {"N":..., "re":[...], "im":[...]}.
std::string to_ndjson(const spectral::FourierState& state);
spectral::FourierState fourier_state_from_ndjson(const std::string& line);

// NDJSON record {"nx":..., "eta":[...], "phi":[...]}.
std::string to_ndjson(const fluid::SurfaceState& state);
fluid::SurfaceState surface_state_from_ndjson(const std::string& line);

void save_ndjson(const spectral::FourierState& state, const std::filesystem::path& path);
spectral::FourierState load_fourier_state(const std::filesystem::path& path);

void save_ndjson(const fluid::SurfaceState& state, const std::filesystem::path& path);
fluid::SurfaceState load_surface_state(const std::filesystem::path& path);

} // namespace ucw::io

#endif
