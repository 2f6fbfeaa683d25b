#ifndef MATMI_VERSION_HPP
#define MATMI_VERSION_HPP

namespace matmi {
inline constexpr const char* kVersion = "0.1.0";
}

#endif
