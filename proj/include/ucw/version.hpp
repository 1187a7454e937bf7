#ifndef UCW_VERSION_HPP
#define UCW_VERSION_HPP

namespace ucw {

inline constexpr const char* version = "0.1.0";

} // namespace ucw

#endif
