#include "rico/util.hpp"

#include <cctype>

namespace rico {

bool natural_less(std::string_view a, std::string_view b) {
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        const bool da = std::isdigit(static_cast<unsigned char>(a[i])) != 0;
        const bool db = std::isdigit(static_cast<unsigned char>(b[j])) != 0;
        if (da && db) {
            std::size_t ia = i, jb = j;
            while (ia < a.size() && std::isdigit(static_cast<unsigned char>(a[ia]))) ++ia;
            while (jb < b.size() && std::isdigit(static_cast<unsigned char>(b[jb]))) ++jb;
            std::string_view na = a.substr(i, ia - i);
            std::string_view nb = b.substr(j, jb - j);
            // strip leading zeros, then compare by length and digits
            std::size_t za = na.find_first_not_of('0');
            std::size_t zb = nb.find_first_not_of('0');
            std::string_view ca = (za == std::string_view::npos) ? na.substr(na.size() - 1) : na.substr(za);
            std::string_view cb = (zb == std::string_view::npos) ? nb.substr(nb.size() - 1) : nb.substr(zb);
            if (ca.size() != cb.size()) return ca.size() < cb.size();
            if (ca != cb) return ca < cb;
            if (na.size() != nb.size()) return na.size() < nb.size(); // fewer leading zeros first
            i = ia;
            j = jb;
            continue;
        }
        if (a[i] != b[j]) return a[i] < b[j];
        ++i;
        ++j;
    }
    return a.size() - i < b.size() - j;
}

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace rico
