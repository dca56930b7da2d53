#ifndef LCR_EDGE_TYPE_HPP
#define LCR_EDGE_TYPE_HPP

#include <array>
#include <stdexcept>
#include <string>

namespace lcr {

// Dyad / tour-edge coding for an ordered pair (i, j):
// first bit = edge i->j present, second bit = edge j->i present.
enum class EdgeType : unsigned char {
    e00 = 0,  // no edge
    e10 = 1,  // i->j only
    e01 = 2,  // j->i only
    e11 = 3,  // double edge
};

constexpr std::array<EdgeType, 4> kAllEdgeTypes = {EdgeType::e00, EdgeType::e10, EdgeType::e01,
                                                   EdgeType::e11};

// Swap the two directions (the coding of the pair read as (j, i)).
inline EdgeType transpose(EdgeType t) {
    switch (t) {
        case EdgeType::e10: return EdgeType::e01;
        case EdgeType::e01: return EdgeType::e10;
        default: return t;
    }
}

inline const char* to_code(EdgeType t) {
    switch (t) {
        case EdgeType::e00: return "00";
        case EdgeType::e10: return "10";
        case EdgeType::e01: return "01";
        case EdgeType::e11: return "11";
    }
    return "??";
}

inline EdgeType edge_type_from_code(const std::string& s) {
    if (s == "00") return EdgeType::e00;
    if (s == "10") return EdgeType::e10;
    if (s == "01") return EdgeType::e01;
    if (s == "11") return EdgeType::e11;
    throw std::invalid_argument("bad edge-type code: " + s);
}

}  // namespace lcr

#endif
