#pragma once

// Locale-free numeric serialization. Every number the library writes goes
// through fmt17, which emits 17 significant digits via to_chars: doubles
// round-trip exactly, so identical runs produce byte-identical artifacts.

#include <charconv>
#include <ostream>
#include <string>
#include <system_error>

namespace sigmageom {

inline std::string fmt17(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

inline void write_kv(std::ostream& os, const std::string& key, double value) {
    os << key << "=" << fmt17(value) << "\n";
}

inline void write_kv(std::ostream& os, const std::string& key, long long value) {
    os << key << "=" << value << "\n";
}

inline void write_kv(std::ostream& os, const std::string& key, const std::string& value) {
    os << key << "=" << value << "\n";
}

} // namespace sigmageom
