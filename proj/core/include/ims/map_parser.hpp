#ifndef IMS_MAP_PARSER_HPP
#define IMS_MAP_PARSER_HPP

#include "ims/analytic_map.hpp"

#include <string>

namespace ims {

// Prefix map-expression grammar (case-sensitive):
//
//   map  := "id" | "koebe" | "logmap" | "gmap"
//         | "const" "(" num ")"
//         | "affine" "(" num "," num ")"          a*z + b, real a, b
//         | "pow1mz" "(" num ")"                  (1-z)^s
//         | "cover" "(" num ")"                   gamma/(1-z)
//         | "fgamma" "(" num ")"                  [(1-z)^{1-g}-1]/(g-1)
//         | "ggamma" "(" num ")"                  [(1-z)^{1+g}-1]/(-g-1)
//         | "kscaled" "(" num ")"                 koebe(rho z)/rho
//         | "scale" "(" num "," map ")"           map(rho z)
//         | "derivpow" "(" map "," num ")"
//         | "fromphi" "(" map ")"
//         | "sum" "(" map "," map ")"
//         | "prod" "(" map "," map ")"
//         | "quot" "(" map "," map ")"
//
// Whitespace is ignored. Errors throw ParseError carrying the byte offset.
AnalyticMap parse_map(const std::string& text);

} // namespace ims

#endif
