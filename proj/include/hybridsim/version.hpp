#ifndef HYBRIDSIM_VERSION_HPP
#define HYBRIDSIM_VERSION_HPP

namespace hybridsim {

inline constexpr const char* kVersion = "0.1.0";

} // namespace hybridsim

#endif
